#include "lemonlens/welfare.hpp"

#include <cmath>
#include <limits>

#include "lemonlens/error.hpp"
#include "lemonlens/quadrature.hpp"

namespace lemonlens {

const char* to_string(PriceDirection d) {
  switch (d) {
    case PriceDirection::Decreasing: return "decreasing";
    case PriceDirection::Increasing: return "increasing";
    case PriceDirection::Mixed: return "mixed";
    case PriceDirection::Linear: return "linear";
  }
  return "?";
}

double consumer_surplus(const MarketScenario& s, double q, double quad_tol) {
  const PricePoint pt = solve_price(s, q);
  const double integral = integrate(
      [&s](double v) { return s.dist.eval(v).F; }, pt.pbar, 1.0, quad_tol);
  double cs = q - pt.p - q * integral;
  if (cs < 0.0 && cs > -1e-9) cs = 0.0;  // quadrature noise on an empty trade region
  return cs;
}

double total_surplus(const MarketScenario& s, double q, double quad_tol) {
  const PricePoint pt = solve_price(s, q);
  const double c = s.cost;
  return integrate(
      [&s, q, c](double v) { return (v * q - c) * s.dist.eval(v).f; },
      pt.pbar, 1.0, quad_tol);
}

CurvaturePoint curvature(const MarketScenario& s, double q, double quad_tol) {
  if (!(q > s.q_lo) || !(q < s.q_hi))
    throw DomainError("curvature: q must lie strictly inside (q_lo, q_hi)");
  const PricePoint pt = solve_price(s, q);
  const HazardProfile h = hazard_profile(s.dist, pt.pbar);
  const double f = s.dist.eval(pt.pbar).f;
  const double c = s.cost;
  const double denom = 1.0 - h.r1;
  const double q3 = q * q * q;
  const double shared = f * c * c / (q3 * denom * denom);
  CurvaturePoint cp;
  cp.q = q;
  cp.cs = consumer_surplus(s, q, quad_tol);
  cp.ts = total_surplus(s, q, quad_tol);
  cp.cs2 = shared * (1.0 - h.r * h.r2 / denom);
  cp.ts2 = shared * (2.0 - h.r1 - h.r * h.r2 / denom);
  cp.p2 = h.r2 * c * c / (q3 * denom * denom * denom);
  cp.buyer_lhs = h.r * h.r2 + h.r1;
  cp.total_rhs = 1.0 + denom * denom;
  return cp;
}

namespace {

PriceDirection classify_direction(bool any_pos, bool any_neg) {
  if (any_pos && any_neg) return PriceDirection::Mixed;
  if (any_pos) return PriceDirection::Increasing;
  if (any_neg) return PriceDirection::Decreasing;
  return PriceDirection::Linear;
}

constexpr double kCurvZero = 1e-12;  // |r''| below this counts as linear

}  // namespace

ConditionReport check_conditions(const MarketScenario& s, int grid,
                                 ExecPolicy policy) {
  if (grid < 100) throw ConfigError("check_conditions: grid must be >= 100");
  const double lo = solve_price(s, s.q_hi).pbar;
  const double hi = solve_price(s, s.q_lo).pbar;
  const std::size_t n = static_cast<std::size_t>(grid) - 1;  // interior points
  struct Cell {
    double buyer_margin = 0.0;
    double total_margin = 0.0;
    signed char curv_sign = 0;
  };
  std::vector<Cell> cells(n);
  const double step = (hi - lo) / static_cast<double>(grid);
  parallel_for(policy, n, [&](std::size_t i) {
    const double v = lo + step * static_cast<double>(i + 1);
    const HazardProfile h = hazard_profile(s.dist, v);
    const double lhs = h.r * h.r2 + h.r1;
    const double denom = 1.0 - h.r1;
    cells[i].buyer_margin = lhs - 1.0;
    cells[i].total_margin = lhs - (1.0 + denom * denom);
    cells[i].curv_sign = (h.r2 > kCurvZero) ? 1 : (h.r2 < -kCurvZero ? -1 : 0);
  });

  ConditionReport rep;
  rep.interval_lo = lo;
  rep.interval_hi = hi;
  rep.buyer_holds = true;
  rep.total_holds = true;
  bool any_pos = false, any_neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = lo + step * static_cast<double>(i + 1);
    if (cells[i].buyer_margin > 0.0) {
      rep.buyer_holds = false;
      rep.violations.push_back({v, cells[i].buyer_margin, "buyer"});
    }
    if (cells[i].total_margin > 0.0) {
      rep.total_holds = false;
      rep.violations.push_back({v, cells[i].total_margin, "total"});
    }
    any_pos = any_pos || cells[i].curv_sign > 0;
    any_neg = any_neg || cells[i].curv_sign < 0;
  }
  rep.price_direction = classify_direction(any_pos, any_neg);
  return rep;
}

namespace {

bool buyer_violates(const TypeDistribution& d, double v) {
  const HazardProfile h = hazard_profile(d, v);
  return h.psi > 0.0 && h.r * h.r2 + h.r1 > 1.0;
}

}  // namespace

KResult compute_k(const TypeDistribution& d, long long resolution,
                  ExecPolicy policy) {
  if (resolution < 10000) throw ConfigError("compute_k: resolution must be >= 1e4");
  const std::size_t n = static_cast<std::size_t>(resolution);
  std::vector<unsigned char> bad(n, 0);
  const double denom = static_cast<double>(n) + 1.0;
  parallel_for(policy, n, [&](std::size_t i) {
    const double v = static_cast<double>(i + 1) / denom;
    if (buyer_violates(d, v)) bad[i] = 1;
  });
  std::size_t last_bad = n;  // sentinel
  for (std::size_t i = n; i-- > 0;) {
    if (bad[i]) { last_bad = i; break; }
  }

  KResult res;
  res.resolution = resolution;
  if (last_bad == n) {
    res.k = std::numeric_limits<double>::infinity();
    res.v_dagger = std::numeric_limits<double>::quiet_NaN();
    res.infinite_up_to_resolution = true;
    return res;
  }

  // The sup of the violation set lies in the grid cell just above the last
  // violating point; bisect the violation indicator down to 1e-10 width.
  double lo = static_cast<double>(last_bad + 1) / denom;  // violating
  double hi = std::min(lo + 1.0 / denom, 1.0 - kEdgeClip);  // clean (or edge)
  for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (buyer_violates(d, mid)) lo = mid; else hi = mid;
  }
  const double v_dagger = 0.5 * (lo + hi);
  const double psi = hazard_profile(d, v_dagger).psi;
  if (!(psi > 0.0) || !(psi < 1.0))
    throw RegularityError("compute_k: psi(v_dagger) outside (0,1)");
  res.k = 1.0 / psi;
  res.v_dagger = v_dagger;
  res.infinite_up_to_resolution = false;
  return res;
}

bool sufficient_check(const MarketScenario& s, const KResult& k) {
  if (k.infinite_up_to_resolution) return true;
  return s.q_hi <= k.k * s.cost;
}

bool sufficient_check(const MarketScenario& s) {
  return sufficient_check(s, compute_k(s.dist));
}

}  // namespace lemonlens
