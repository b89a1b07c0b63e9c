#pragma once

#include <string>
#include <vector>

#include "lemonlens/parallel.hpp"
#include "lemonlens/pricing.hpp"

namespace lemonlens {

struct CurvaturePoint {
  double q;
  double cs;         // buyer surplus at quality q
  double ts;         // total surplus at quality q
  double cs2;        // d2 CS / dq2, closed form
  double ts2;        // d2 TS / dq2, closed form
  double p2;         // d2 p  / dq2, closed form
  double buyer_lhs;  // r r'' + r'      evaluated at v = pbar(q)
  double total_rhs;  // 1 + (1 - r')^2  evaluated at v = pbar(q)
};

enum class PriceDirection { Decreasing, Increasing, Mixed, Linear };

const char* to_string(PriceDirection d);

struct ConditionViolation {
  double v;
  double margin;          // positive amount by which the condition fails
  std::string condition;  // "buyer" or "total"
};

// Verdicts for the two curvature conditions, scanned over the open interval
// of quality-normalized prices (pbar(q_hi), pbar(q_lo)).
//   buyer condition: r r'' + r' <= 1            (buyer surplus concave in q)
//   total condition: r r'' + r' <= 1 + (1-r')^2 (total surplus concave in q)
// price_direction reports the sign of r'' on the interval: convex r means the
// expected price rises with information, concave means it falls, identically
// zero (uniform) means it is constant ("linear").
struct ConditionReport {
  double interval_lo;  // pbar(q_hi)
  double interval_hi;  // pbar(q_lo)
  bool buyer_holds;
  bool total_holds;
  PriceDirection price_direction;
  std::vector<ConditionViolation> violations;
};

struct KResult {
  double k;           // +infinity when no violation was found
  double v_dagger;    // sup of the violation set; NaN when k is infinite
  long long resolution;
  bool infinite_up_to_resolution;
};

// Buyer surplus at quality q: q - p - q * Integral_{pbar}^{1} F(v) dv
// (integration-by-parts form), adaptive quadrature to quad_tol.
double consumer_surplus(const MarketScenario& s, double q, double quad_tol = 1e-9);

// Total surplus at quality q: Integral_{pbar}^{1} (v q - c) f(v) dv by direct
// quadrature, so ts == cs + revenue is a genuine three-way cross-check.
double total_surplus(const MarketScenario& s, double q, double quad_tol = 1e-9);

// Closed-form second derivatives at an interior quality q in (q_lo, q_hi):
//   cs2 = f c^2 / (q^3 (1-r')^2) * (1 - r r'' / (1-r'))
//   ts2 = f c^2 / (q^3 (1-r')^2) * (2 - r' - r r'' / (1-r'))
//   p2  = r'' c^2 / (q^3 (1-r')^3)
// all evaluated at v = pbar(q).
CurvaturePoint curvature(const MarketScenario& s, double q, double quad_tol = 1e-9);

// Scans grid-1 interior points of (pbar(q_hi), pbar(q_lo)). grid >= 100.
ConditionReport check_conditions(const MarketScenario& s, int grid,
                                 ExecPolicy policy = ExecPolicy::Parallel);

// Largest alpha such that the buyer condition holds wherever psi >= 1/alpha:
// scans `resolution` interior points for the violation set
// {v : psi(v) > 0 and r r'' + r' > 1}; if empty, reports
// infinite_up_to_resolution; otherwise bisects the boundary of the last
// violating grid cell to 1e-8 and returns k = 1 / psi(v_dagger).
// resolution >= 1e4. Throws RegularityError if psi(v_dagger) lands
// outside (0,1).
KResult compute_k(const TypeDistribution& d, long long resolution = 100000,
                  ExecPolicy policy = ExecPolicy::Parallel);

// Sufficient condition for the buyer to benefit from information:
// q_hi <= k * cost (vacuously true when k is infinite).
bool sufficient_check(const MarketScenario& s, const KResult& k);
bool sufficient_check(const MarketScenario& s);  // computes k at default resolution

}  // namespace lemonlens
