#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "lemonlens/dist.hpp"
#include "lemonlens/error.hpp"
#include "lemonlens/rng.hpp"

using namespace lemonlens;

namespace {

std::vector<TypeDistribution> all_families() {
  return {TypeDistribution::uniform(),
          TypeDistribution::beta(2, 2),
          TypeDistribution::beta(3, 3),
          TypeDistribution::beta(2.5, 1.2),
          TypeDistribution::beta(1, 0.5),
          TypeDistribution::truncnorm(0.5, 0.1),
          TypeDistribution::truncnorm(0.5, std::sqrt(0.001)),
          TypeDistribution::tabulated({{0.0, 0.5}, {0.5, 1.5}, {1.0, 0.5}})};
}

}  // namespace

TEST_SUITE("dist") {

TEST_CASE("uniform hazard profile is exact") {
  const TypeDistribution u = TypeDistribution::uniform();
  const HazardProfile h = hazard_profile(u, 0.3);
  CHECK(h.r == doctest::Approx(0.7).epsilon(1e-16));
  CHECK(h.r1 == doctest::Approx(-1.0).epsilon(1e-16));
  CHECK(h.r2 == doctest::Approx(0.0).epsilon(1e-16));
  CHECK(h.psi == doctest::Approx(2 * 0.3 - 1).epsilon(1e-15));
  CHECK(h.psi1 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(u.eval(0.3).F == doctest::Approx(0.3).epsilon(1e-16));
  CHECK(u.eval(0.3).f == doctest::Approx(1.0).epsilon(1e-16));
}

TEST_CASE("beta(2,2) and beta(3,3) reference values") {
  const TypeDistribution b22 = TypeDistribution::beta(2, 2);
  CHECK(b22.eval(0.5).F == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(b22.eval(0.5).f == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(hazard_profile(b22, 0.5).r == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  const TypeDistribution b33 = TypeDistribution::beta(3, 3);
  CHECK(b33.eval(0.4).f == doctest::Approx(1.728).epsilon(1e-14));
  const HazardProfile h = hazard_profile(b33, 0.4);
  CHECK(h.r == doctest::Approx(0.395).epsilon(1e-13));
  CHECK(h.psi == doctest::Approx(0.005).epsilon(1e-10));
  CHECK(h.r * h.r2 + h.r1 ==
        doctest::Approx(2.2505208333333333).epsilon(1e-11));
}

TEST_CASE("truncated normal reference values") {
  // sd = 0.1, symmetric around 0.5: r'(0.5) = -1 and r''(0.5) = 1/(2 f s^2).
  const TypeDistribution tn = TypeDistribution::truncnorm(0.5, 0.1);
  CHECK(tn.eval(0.5).F == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(tn.eval(0.5).f == doctest::Approx(3.9894250911642733).epsilon(1e-13));
  HazardProfile h = hazard_profile(tn, 0.5);
  CHECK(h.r == doctest::Approx(0.12533134187865652).epsilon(1e-13));
  CHECK(h.r1 == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(h.r2 == doctest::Approx(12.533134187865652).epsilon(1e-11));

  h = hazard_profile(tn, 0.3);
  CHECK(h.r == doctest::Approx(1.8100242401875543).epsilon(1e-12));
  CHECK(h.r1 == doctest::Approx(-37.200484803751086).epsilon(1e-12));
  CHECK(h.r2 == doctest::Approx(925.01212009377715).epsilon(1e-11));

  const TypeDistribution peaked =
      TypeDistribution::truncnorm(0.5, std::sqrt(0.001));
  CHECK(peaked.eval(0.5).f ==
        doctest::Approx(12.615662610100800).epsilon(1e-13));
  h = hazard_profile(peaked, 0.5);
  CHECK(h.r == doctest::Approx(0.039633272976060110).epsilon(1e-12));
  CHECK(h.r2 == doctest::Approx(39.633272976060110).epsilon(1e-11));
}

TEST_CASE("F and S are complementary and monotone") {
  for (const TypeDistribution& d : all_families()) {
    double prev = -1.0;
    for (int i = 1; i < 40; ++i) {
      const double v = i / 40.0;
      const Eval e = d.eval(v);
      CHECK(std::fabs(e.F + e.S - 1.0) <= 1e-12);
      CHECK(e.f >= 0.0);
      CHECK(e.F >= prev - 1e-15);
      prev = e.F;
    }
    CHECK(d.eval(0.0).F <= 1e-6);
    CHECK(d.eval(1.0).S <= 5e-5);  // beta(1,0.5) has the fattest clipped tail
  }
}

TEST_CASE("density and derivative fields agree with finite differences") {
  for (const TypeDistribution& d : all_families()) {
    for (int i = 2; i < 20; ++i) {
      const double v = i / 20.0 + 0.013;  // interior, away from tabulated knots
      if (v >= 0.97) continue;
      const double h = 1e-6;
      const Eval mid = d.eval(v);
      const Eval up = d.eval(v + h);
      const Eval dn = d.eval(v - h);
      const double fd_f = (up.F - dn.F) / (2 * h);
      const double fd_f1 = (up.f - dn.f) / (2 * h);
      const double fd_f2 = (up.f1 - dn.f1) / (2 * h);
      CHECK(fd_f == doctest::Approx(mid.f).epsilon(1e-6));
      CHECK(std::fabs(fd_f1 - mid.f1) <=
            1e-4 * std::max(1.0, std::fabs(mid.f1)));
      CHECK(std::fabs(fd_f2 - mid.f2) <=
            1e-3 * std::max(1.0, std::fabs(mid.f2)));
    }
  }
}

TEST_CASE("hazard derivatives agree with finite differences of r") {
  for (const TypeDistribution& d : all_families()) {
    for (double v : {0.15, 0.33, 0.52, 0.71, 0.88}) {
      const double h = 1e-5;
      const HazardProfile mid = hazard_profile(d, v);
      const double r_up = hazard_profile(d, v + h).r;
      const double r_dn = hazard_profile(d, v - h).r;
      const double fd_r1 = (r_up - r_dn) / (2 * h);
      const double fd_r2 = (r_up - 2 * mid.r + r_dn) / (h * h);
      CHECK(std::fabs(fd_r1 - mid.r1) <=
            1e-4 * std::max(1.0, std::fabs(mid.r1)));
      CHECK(std::fabs(fd_r2 - mid.r2) <=
            2e-3 * std::max(1.0, std::fabs(mid.r2)));
      CHECK(mid.psi == doctest::Approx(v - mid.r).epsilon(1e-14));
      CHECK(mid.psi1 == doctest::Approx(1.0 - mid.r1).epsilon(1e-14));
    }
  }
}

TEST_CASE("inverse hazard rate vanishes toward the upper endpoint") {
  for (const TypeDistribution& d :
       {TypeDistribution::beta(3, 3), TypeDistribution::truncnorm(0.5, 0.1)}) {
    double prev = hazard_profile(d, 1.0 - 1e-3).r;
    for (int k = 4; k <= 8; ++k) {
      const double r = hazard_profile(d, 1.0 - std::pow(10.0, -k)).r;
      CHECK(r < prev);
      prev = r;
    }
    CHECK(prev < 1e-3);
  }
}

TEST_CASE("tabulated density integrates to one and interpolates smoothly") {
  const TypeDistribution tab =
      TypeDistribution::tabulated({{0.0, 0.5}, {0.5, 1.5}, {1.0, 0.5}});
  // Endpoint evaluation clips v by 1e-9, so F(1) misses 1 by about f(1)*1e-9.
  CHECK(tab.eval(1.0).F == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(tab.eval(0.0).F <= 1e-8);
  // C1 at the interior knot: f continuous, one-sided slopes may differ.
  const double left = tab.eval(0.5 - 1e-10).f;
  const double right = tab.eval(0.5 + 1e-10).f;
  CHECK(left == doctest::Approx(right).epsilon(1e-6));
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(TypeDistribution::beta(0, 1), ConfigError);
  CHECK_THROWS_AS(TypeDistribution::beta(1, -2), ConfigError);
  CHECK_THROWS_AS(TypeDistribution::truncnorm(0.5, 0.0), ConfigError);
  CHECK_THROWS_AS(TypeDistribution::truncnorm(500.0, 1e-4), ConfigError);
  CHECK_THROWS_AS(TypeDistribution::tabulated({{0.0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(TypeDistribution::tabulated({{0.0, 1.0}, {0.5, 1.0}}),
                  ConfigError);
  CHECK_THROWS_AS(TypeDistribution::tabulated({{0.0, 1.0}, {0.0, 1.0}, {1.0, 1.0}}),
                  ConfigError);
  CHECK_THROWS_AS(TypeDistribution::tabulated({{0.0, 1.0}, {0.5, -1.0}, {1.0, 1.0}}),
                  ConfigError);
  CHECK_THROWS_AS(TypeDistribution::uniform().eval(-0.1), DomainError);
  CHECK_THROWS_AS(TypeDistribution::uniform().eval(1.5), DomainError);
}

TEST_CASE("weak regularity holds for the stock families") {
  for (const TypeDistribution& d : all_families()) {
    const RegularityReport rep = check_weak_regularity(d, 2000);
    CHECK(rep.holds);
    CHECK(rep.witnesses.empty());
  }
  CHECK_THROWS_AS(check_weak_regularity(TypeDistribution::uniform(), 10),
                  ConfigError);
}

TEST_CASE("tail curvature advisory samples five tail points") {
  for (const TypeDistribution& d :
       {TypeDistribution::uniform(), TypeDistribution::beta(2, 2)}) {
    const TailAdvisory adv = tail_curvature_advisory(d);
    CHECK(adv.samples.size() == 5);
    CHECK(adv.bounded);
  }
}

TEST_CASE("names identify the distribution") {
  CHECK(TypeDistribution::uniform().name() == "uniform");
  CHECK(TypeDistribution::beta(3, 3).name() == "beta(3,3)");
  CHECK(TypeDistribution::truncnorm(0.5, 0.1).name() == "truncnorm(0.5,0.1)");
}

}  // TEST_SUITE
