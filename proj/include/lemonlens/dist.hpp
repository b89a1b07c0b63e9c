#pragma once

#include <array>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lemonlens/parallel.hpp"

namespace lemonlens {

// Evaluations clip v into [kEdgeClip, 1-kEdgeClip]; the model lives on the
// open interval and this keeps r = S/f away from 0/0 at the endpoints.
inline constexpr double kEdgeClip = 1e-9;

// Pointwise distribution data. S = 1-F is computed directly on the upper
// tail (never as 1-F), which matters for survival values near v=1.
struct Eval {
  double F;
  double S;
  double f;
  double f1;  // f'
  double f2;  // f''
};

struct HazardProfile {
  double v;
  double r;     // (1-F)/f
  double r1;    // r'
  double r2;    // r''
  double psi;   // v - r
  double psi1;  // 1 - r1
};

enum class Family { Uniform, Beta, TruncNormal, Tabulated };

class TypeDistribution {
 public:
  static TypeDistribution uniform();
  static TypeDistribution beta(double alpha, double beta);
  // Normal(mean, sd) conditioned on [0,1]; normalization cached.
  static TypeDistribution truncnorm(double mean, double sd);
  // Density knots (v_i, f_i) with v_0=0, v_last=1, strictly increasing v.
  // Interpolated by a monotone (Fritsch-Carlson) cubic; mass normalized to 1.
  static TypeDistribution tabulated(const std::vector<std::array<double, 2>>& knots);

  // Throws DomainError if v outside [0,1] (before clipping).
  Eval eval(double v) const;

  Family family() const { return family_; }
  // Beta: {alpha,beta}; TruncNormal: {mean,sd}; others empty.
  const std::vector<double>& params() const { return params_; }
  // Tabulated only: knots after normalization.
  const std::vector<std::array<double, 2>>& knots() const { return knots_; }
  const std::string& name() const { return name_; }

 private:
  TypeDistribution() = default;

  struct UniformImpl {};
  struct BetaImpl {
    double a, b;
  };
  struct TruncNormImpl {
    double mean, sd, z0, z1, mass;  // mass = Phi(z1)-Phi(z0)
  };
  struct TabImpl {
    std::vector<double> x;                  // knot positions
    std::vector<double> y;                  // normalized densities at knots
    std::vector<double> m;                  // interpolant slopes at knots
    std::vector<double> c1, c2, c3;         // piece cubic coeffs (c0=y[i])
    std::vector<double> cdf_at, surv_at;    // F and S at knots (exact sums)
  };

  std::variant<UniformImpl, BetaImpl, TruncNormImpl, TabImpl> impl_;
  Family family_ = Family::Uniform;
  std::vector<double> params_;
  std::vector<std::array<double, 2>> knots_;
  std::string name_;
};

// r, r', r'' and the virtual valuation at v. r1 = -1 - S*f'/f^2 and r2 is its
// derivative, both from the pointwise Eval. Throws NumericalError if the
// density is too small to divide by.
HazardProfile hazard_profile(const TypeDistribution& d, double v);

struct RegularityReport {
  bool holds;
  std::vector<double> witnesses;  // grid points with psi>0 but psi'<=0
};

// Scans an interior grid; holds iff psi'>0 wherever psi>0 (the unique-price
// condition). grid_size >= 100.
RegularityReport check_weak_regularity(const TypeDistribution& d, int grid_size,
                                       ExecPolicy policy = ExecPolicy::Parallel);

struct TailAdvisory {
  bool bounded;                                  // advisory only, not an error
  std::vector<std::pair<double, double>> samples;  // (v, r2(v)) at v=1-10^-k
};

// Heuristic probe of r'' growth as v->1 (samples at 1-10^-k, k=2..6);
// flags if |r2| grows by more than 10x per step. Boundedness near a limit
// is not decidable from samples, hence advisory.
TailAdvisory tail_curvature_advisory(const TypeDistribution& d);

}  // namespace lemonlens
