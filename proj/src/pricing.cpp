#include "lemonlens/pricing.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "lemonlens/error.hpp"

namespace lemonlens {

MarketScenario::MarketScenario(double q_lo_, double q_hi_, double cost_,
                               PosteriorMeanDistribution prior_,
                               TypeDistribution dist_)
    : q_lo(q_lo_), q_hi(q_hi_), cost(cost_), prior(std::move(prior_)),
      dist(std::move(dist_)) {
  if (!std::isfinite(q_lo) || !std::isfinite(q_hi) || !std::isfinite(cost))
    throw ConfigError("scenario: q_lo, q_hi, cost must be finite");
  if (!(0.0 < q_lo) || !(q_lo < q_hi))
    throw ConfigError("scenario: need 0 < q_lo < q_hi");
  if (!(0.0 < cost) || !(cost < q_lo))
    throw ConfigError("scenario: need 0 < cost < q_lo");
  for (const Atom& a : prior.atoms()) {
    if (a.q < q_lo - 1e-12 || a.q > q_hi + 1e-12)
      throw ConfigError("scenario: prior atom outside [q_lo, q_hi]");
  }
}

namespace {

double psi_at(const TypeDistribution& d, double v) {
  return hazard_profile(d, v).psi;
}

// First-order condition psi(v) = target has a unique root on {psi > 0} under
// weak regularity; bracket it by scanning, then bisect, then Newton-polish.
double solve_pbar(const TypeDistribution& d, double target, int* iters_out) {
  const double lo_edge = kEdgeClip;
  const double hi_edge = 1.0 - kEdgeClip;
  double a = lo_edge, b = hi_edge;
  bool bracketed = false;
  for (int n : {64, 4096}) {
    double prev_v = lo_edge;
    if (psi_at(d, prev_v) - target > 0.0) {
      // psi already above target at the left clip edge: root clipped out.
      a = b = lo_edge;
      bracketed = true;
      break;
    }
    for (int i = 1; i <= n; ++i) {
      const double v = lo_edge + (hi_edge - lo_edge) * i / n;
      const double g = psi_at(d, v) - target;
      if (g >= 0.0) {
        a = prev_v;
        b = v;
        bracketed = true;
        break;
      }
      prev_v = v;
    }
    if (bracketed) break;
  }
  if (!bracketed)
    throw RegularityError(
        "solve_price: no bracket for psi(v)=c/q; virtual valuation never reaches target");

  int iters = 0;
  constexpr int kMaxIters = 200;
  // Bisect to a narrow bracket first...
  while (b - a > 1e-6 && iters < kMaxIters) {
    const double mid = 0.5 * (a + b);
    const double g = psi_at(d, mid) - target;
    ++iters;
    if (g >= 0.0) b = mid; else a = mid;
  }
  // ...then Newton with psi' = 1 - r', falling back to bisection whenever a
  // step leaves the bracket.
  double v = 0.5 * (a + b);
  while (iters < kMaxIters) {
    const HazardProfile h = hazard_profile(d, v);
    const double g = h.psi - target;
    ++iters;
    if (g >= 0.0) b = std::min(b, v); else a = std::max(a, v);
    if (std::fabs(g) < 1e-15 || b - a < 1e-16) break;
    double next = (h.psi1 > 0.0) ? v - g / h.psi1 : 0.5 * (a + b);
    if (!(next > a) || !(next < b)) next = 0.5 * (a + b);
    if (next == v) break;
    v = next;
  }
  if (iters >= kMaxIters)
    throw NumericalError("solve_price: root iteration exceeded 200 steps");
  if (iters_out) *iters_out = iters;
  return v;
}

}  // namespace

PricePoint solve_price(const MarketScenario& s, double q) {
  if (std::isnan(q) || q < s.q_lo - 1e-12 || q > s.q_hi + 1e-12) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "solve_price: q=%g outside [q_lo,q_hi]", q);
    throw DomainError(buf);
  }
  const double target = s.cost / q;
  const double pbar = solve_pbar(s.dist, target, nullptr);
  const HazardProfile h = hazard_profile(s.dist, pbar);
  const Eval e = s.dist.eval(pbar);
  const double c = s.cost;
  const double denom = 1.0 - h.r1;  // = psi' > 0 where psi > 0
  PricePoint pt;
  pt.q = q;
  pt.pbar = pbar;
  pt.p = q * pbar;
  pt.pbar1 = -c / (q * q * denom);
  pt.pbar2 = h.r2 * c * c / (q * q * q * q * denom * denom * denom) +
             2.0 * c / (q * q * q * denom);
  pt.p2 = h.r2 * c * c / (q * q * q * denom * denom * denom);
  pt.revenue = (pt.p - c) * e.S;
  return pt;
}

std::vector<PricePoint> price_schedule(const MarketScenario& s, int grid,
                                       ExecPolicy policy) {
  if (grid < 1) throw ConfigError("price_schedule: grid must be >= 1");
  const std::size_t n = static_cast<std::size_t>(grid) + 1;
  std::vector<PricePoint> out(n);
  parallel_for(policy, n, [&](std::size_t i) {
    const double t = static_cast<double>(i) / static_cast<double>(grid);
    const double q = s.q_lo + (s.q_hi - s.q_lo) * t;
    try {
      out[i] = solve_price(s, q);
    } catch (const Error& err) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "price_schedule at q=%.17g: ", q);
      throw NumericalError(std::string(buf) + err.what());
    }
  });
  return out;
}

double revenue(const MarketScenario& s, double q) {
  return solve_price(s, q).revenue;
}

}  // namespace lemonlens
