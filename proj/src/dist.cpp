#include "lemonlens/dist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "lemonlens/error.hpp"
#include "lemonlens/special.hpp"

namespace lemonlens {

namespace {

double clip_unit(double v) {
  return std::min(std::max(v, kEdgeClip), 1.0 - kEdgeClip);
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

std::string fmt(const char* pattern, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

// Fritsch-Carlson slopes: interior slopes are weighted harmonic means of
// adjacent secants (zero at local extrema), endpoints use the shape-limited
// three-point formula. The resulting C^1 cubic never overshoots the data.
std::vector<double> pchip_slopes(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), d(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    d[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    m[0] = m[1] = d[0];
    return m;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] == 0.0 || d[i] == 0.0 || sign_of(d[i - 1]) != sign_of(d[i])) {
      m[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  auto edge = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sign_of(s) != sign_of(d0)) return 0.0;
    if (sign_of(d0) != sign_of(d1) && std::fabs(s) > 3.0 * std::fabs(d0))
      return 3.0 * d0;
    return s;
  };
  m[0] = edge(h[0], h[1], d[0], d[1]);
  m[n - 1] = edge(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
  return m;
}

}  // namespace

TypeDistribution TypeDistribution::uniform() {
  TypeDistribution d;
  d.impl_ = UniformImpl{};
  d.family_ = Family::Uniform;
  d.name_ = "uniform";
  return d;
}

TypeDistribution TypeDistribution::beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw ConfigError("beta: shape parameters must be positive and finite");
  TypeDistribution d;
  d.impl_ = BetaImpl{alpha, beta};
  d.family_ = Family::Beta;
  d.params_ = {alpha, beta};
  d.name_ = fmt("beta(%g,%g)", alpha, beta);
  return d;
}

TypeDistribution TypeDistribution::truncnorm(double mean, double sd) {
  if (!(sd > 0.0) || !std::isfinite(sd) || !std::isfinite(mean))
    throw ConfigError("truncnorm: sd must be positive and parameters finite");
  const double z0 = (0.0 - mean) / sd;
  const double z1 = (1.0 - mean) / sd;
  const double mass = norm_cdf_diff(z0, z1);
  if (!(mass > 1e-300))
    throw ConfigError("truncnorm: no probability mass survives truncation to [0,1]");
  TypeDistribution d;
  d.impl_ = TruncNormImpl{mean, sd, z0, z1, mass};
  d.family_ = Family::TruncNormal;
  d.params_ = {mean, sd};
  d.name_ = fmt("truncnorm(%g,%g)", mean, sd);
  return d;
}

TypeDistribution TypeDistribution::tabulated(
    const std::vector<std::array<double, 2>>& knots) {
  const std::size_t n = knots.size();
  if (n < 2) throw ConfigError("tabulated: need at least 2 knots");
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = knots[i][0];
    y[i] = knots[i][1];
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw ConfigError("tabulated: knots must be finite");
    if (y[i] < 0.0) throw ConfigError("tabulated: density knots must be >= 0");
    if (i > 0 && !(x[i] > x[i - 1]))
      throw ConfigError("tabulated: knot positions must be strictly increasing");
  }
  if (std::fabs(x.front()) > 1e-12 || std::fabs(x.back() - 1.0) > 1e-12)
    throw ConfigError("tabulated: knots must span [0,1]");
  x.front() = 0.0;
  x.back() = 1.0;

  TabImpl t;
  t.x = std::move(x);
  t.y = std::move(y);
  t.m = pchip_slopes(t.x, t.y);

  auto rebuild_pieces = [&t, n]() {
    t.c1.assign(n - 1, 0.0);
    t.c2.assign(n - 1, 0.0);
    t.c3.assign(n - 1, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = t.x[i + 1] - t.x[i];
      const double d = (t.y[i + 1] - t.y[i]) / h;
      t.c1[i] = t.m[i];
      t.c2[i] = (3.0 * d - 2.0 * t.m[i] - t.m[i + 1]) / h;
      t.c3[i] = (t.m[i] + t.m[i + 1] - 2.0 * d) / (h * h);
    }
  };
  auto piece_mass = [&t](std::size_t i) {
    const double h = t.x[i + 1] - t.x[i];
    return h * (t.y[i] + ((t.c1[i] + (t.c2[i] + t.c3[i] * h * 0.75) * h * (2.0 / 3.0)) * h * 0.5));
  };

  rebuild_pieces();
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) mass += piece_mass(i);
  if (!(mass > 1e-12)) throw ConfigError("tabulated: density has no mass");
  for (std::size_t i = 0; i < n; ++i) {
    t.y[i] /= mass;
    t.m[i] /= mass;
  }
  rebuild_pieces();

  // Exact piecewise integrals give F (prefix) and S (suffix) at knots; the
  // suffix form keeps S accurate on the upper tail.
  t.cdf_at.assign(n, 0.0);
  t.surv_at.assign(n, 0.0);
  std::vector<double> pm(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) pm[i] = piece_mass(i);
  for (std::size_t i = 1; i < n; ++i) t.cdf_at[i] = t.cdf_at[i - 1] + pm[i - 1];
  for (std::size_t i = n - 1; i-- > 0;) t.surv_at[i] = t.surv_at[i + 1] + pm[i];
  t.cdf_at.back() = 1.0;
  t.surv_at.front() = 1.0;

  // The interpolant of nonnegative knots can only vanish, not go negative;
  // reject densities that vanish strictly inside the support.
  for (int i = 1; i < 2048; ++i) {
    const double v = static_cast<double>(i) / 2048.0;
    std::size_t k = static_cast<std::size_t>(
        std::upper_bound(t.x.begin(), t.x.end(), v) - t.x.begin());
    k = std::min(std::max<std::size_t>(k, 1), n - 1) - 1;
    const double s = v - t.x[k];
    const double fv = t.y[k] + s * (t.c1[k] + s * (t.c2[k] + s * t.c3[k]));
    if (!(fv > 0.0))
      throw ConfigError("tabulated: interpolated density must be positive inside (0,1)");
  }

  TypeDistribution d;
  d.family_ = Family::Tabulated;
  d.knots_.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.knots_[i] = {t.x[i], t.y[i]};
  d.name_ = fmt("tabulated(n=%g)", static_cast<double>(n), 0.0);
  d.impl_ = std::move(t);
  return d;
}

Eval TypeDistribution::eval(double v) const {
  if (std::isnan(v) || v < 0.0 || v > 1.0)
    throw DomainError(fmt("eval: v=%g outside [0,1]", v, 0.0));
  v = clip_unit(v);

  if (std::holds_alternative<UniformImpl>(impl_)) {
    return {v, 1.0 - v, 1.0, 0.0, 0.0};
  }

  if (const auto* bi = std::get_if<BetaImpl>(&impl_)) {
    const double a = bi->a, b = bi->b;
    const double F = inc_beta_reg(a, b, v);
    const double S = inc_beta_reg(b, a, 1.0 - v);
    const double f =
        std::exp((a - 1.0) * std::log(v) + (b - 1.0) * std::log1p(-v) - log_beta(a, b));
    const double g = (a - 1.0) / v - (b - 1.0) / (1.0 - v);
    const double gp = -(a - 1.0) / (v * v) - (b - 1.0) / ((1.0 - v) * (1.0 - v));
    return {F, S, f, f * g, f * (g * g + gp)};
  }

  if (const auto* tn = std::get_if<TruncNormImpl>(&impl_)) {
    const double z = (v - tn->mean) / tn->sd;
    const double F = norm_cdf_diff(tn->z0, z) / tn->mass;
    const double S = norm_cdf_diff(z, tn->z1) / tn->mass;
    if (!(F >= 0.0) || !(S >= 0.0) || (!(F > 0.0) && !(S > 0.0)))
      throw NumericalError("truncnorm: tail evaluation lost all precision");
    const double f = norm_pdf(z) / (tn->sd * tn->mass);
    const double f1 = -z / tn->sd * f;
    const double f2 = (z * z - 1.0) / (tn->sd * tn->sd) * f;
    return {F, S, f, f1, f2};
  }

  const auto& t = std::get<TabImpl>(impl_);
  const std::size_t n = t.x.size();
  std::size_t k = static_cast<std::size_t>(
      std::upper_bound(t.x.begin(), t.x.end(), v) - t.x.begin());
  k = std::min(std::max<std::size_t>(k, 1), n - 1) - 1;
  const double s = v - t.x[k];
  const double h = t.x[k + 1] - t.x[k];
  const double f = t.y[k] + s * (t.c1[k] + s * (t.c2[k] + s * t.c3[k]));
  const double f1 = t.c1[k] + s * (2.0 * t.c2[k] + 3.0 * s * t.c3[k]);
  const double f2 = 2.0 * t.c2[k] + 6.0 * s * t.c3[k];
  const double partial =
      s * (t.y[k] + s * (t.c1[k] / 2.0 + s * (t.c2[k] / 3.0 + s * t.c3[k] / 4.0)));
  // Tail of the current piece in factored form: (x[k+1]-v) times a positive
  // bracket, so S keeps relative accuracy as v -> 1.
  const double u = t.x[k + 1] - v;
  const double tail_piece =
      u * (t.y[k] + t.c1[k] * (h + s) / 2.0 + t.c2[k] * (h * h + h * s + s * s) / 3.0 +
           t.c3[k] * (h + s) * (h * h + s * s) / 4.0);
  double F = t.cdf_at[k] + partial;
  double S = t.surv_at[k + 1] + tail_piece;
  F = std::min(std::max(F, 0.0), 1.0);
  S = std::min(std::max(S, 0.0), 1.0);
  return {F, S, f, f1, f2};
}

HazardProfile hazard_profile(const TypeDistribution& d, double v) {
  const Eval e = d.eval(v);
  if (e.f < 1e-300)
    throw NumericalError("hazard_profile: density too small; inverse hazard rate overflows");
  const double vc = clip_unit(v);
  const double r = e.S / e.f;
  const double r1 = -1.0 - e.S * e.f1 / (e.f * e.f);
  const double r2 = e.f1 / e.f - e.S * e.f2 / (e.f * e.f) +
                    2.0 * e.S * e.f1 * e.f1 / (e.f * e.f * e.f);
  return {vc, r, r1, r2, vc - r, 1.0 - r1};
}

RegularityReport check_weak_regularity(const TypeDistribution& d, int grid_size,
                                       ExecPolicy policy) {
  if (grid_size < 100) throw ConfigError("check_weak_regularity: grid_size must be >= 100");
  const std::size_t n = static_cast<std::size_t>(grid_size);
  std::vector<unsigned char> bad(n, 0);
  parallel_for(policy, n, [&](std::size_t i) {
    const double v = static_cast<double>(i + 1) / (static_cast<double>(n) + 1.0);
    const HazardProfile h = hazard_profile(d, v);
    if (h.psi > 0.0 && !(h.psi1 > 0.0)) bad[i] = 1;
  });
  RegularityReport rep{true, {}};
  for (std::size_t i = 0; i < n; ++i) {
    if (bad[i]) {
      rep.holds = false;
      rep.witnesses.push_back(static_cast<double>(i + 1) / (static_cast<double>(n) + 1.0));
    }
  }
  return rep;
}

TailAdvisory tail_curvature_advisory(const TypeDistribution& d) {
  TailAdvisory adv{true, {}};
  double prev = 0.0;
  for (int k = 2; k <= 6; ++k) {
    const double v = 1.0 - std::pow(10.0, -k);
    const double r2 = hazard_profile(d, v).r2;
    adv.samples.emplace_back(v, r2);
    if (k > 2 && std::fabs(r2) > 10.0 * std::max(std::fabs(prev), 1e-12))
      adv.bounded = false;
    prev = r2;
  }
  return adv;
}

}  // namespace lemonlens
