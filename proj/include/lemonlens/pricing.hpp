#pragma once

#include <vector>

#include "lemonlens/dist.hpp"
#include "lemonlens/parallel.hpp"
#include "lemonlens/posterior.hpp"

namespace lemonlens {

// A market: qualities in [q_lo,q_hi], unit cost, a prior over posterior-mean
// qualities, and the buyer-type distribution. Immutable after construction.
// Requires 0 < q_lo < q_hi, 0 < cost < q_lo, prior support inside [q_lo,q_hi].
struct MarketScenario {
  double q_lo;
  double q_hi;
  double cost;
  PosteriorMeanDistribution prior;
  TypeDistribution dist;

  MarketScenario(double q_lo_, double q_hi_, double cost_,
                 PosteriorMeanDistribution prior_, TypeDistribution dist_);
};

struct PricePoint {
  double q;
  double p;        // posted price
  double pbar;     // p/q, the unique root of psi(v) = cost/q
  double pbar1;    // d pbar / dq  = -c / (q^2 (1-r'))
  double pbar2;    // d2 pbar/dq2  = r'' c^2 / (q^4 (1-r')^3) + 2c / (q^3 (1-r'))
  double p2;       // d2 p / dq2   = r'' c^2 / (q^3 (1-r')^3)
  double revenue;  // (p - c) (1 - F(pbar))
};

// Solves the seller's first-order condition psi(v) = cost/q by bracketed
// bisection plus Newton polish (|psi - c/q| driven to ~1e-14, comfortably
// under the 1e-10 contract). q must lie in [q_lo,q_hi] (no extrapolation).
// Throws RegularityError if no bracket exists, NumericalError if the
// iteration budget (200) is exhausted.
PricePoint solve_price(const MarketScenario& s, double q);

// PricePoints at grid+1 evenly spaced qualities across [q_lo,q_hi].
// grid >= 1 (grid=1 gives the two endpoints). pbar is strictly decreasing
// along the schedule. Errors from solve_price are rethrown with the
// offending q attached.
std::vector<PricePoint> price_schedule(const MarketScenario& s, int grid,
                                       ExecPolicy policy = ExecPolicy::Parallel);

// (p(q)-c) (1-F(p(q)/q)); strictly increasing and strictly convex in q.
double revenue(const MarketScenario& s, double q);

}  // namespace lemonlens
