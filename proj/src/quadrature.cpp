#include "lemonlens/quadrature.hpp"

#include <cmath>

#include "lemonlens/error.hpp"

namespace lemonlens {

namespace {

// 15-point Kronrod abscissae on [0,1] side (symmetric) and weights, plus the
// embedded 7-point Gauss weights. Classic QUADPACK dqk15 constants.
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct Panel {
  double kronrod;
  double err;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  fv[7] = f(c);
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  double resk = kWgk[7] * fv[7];
  double resg = kWg[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    resk += kWgk[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) resg += kWg[i / 2] * (fv[i] + fv[14 - i]);
  }
  return {resk * h, std::fabs((resk - resg) * h)};
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol, int depth) {
  const Panel p = gk15(f, a, b);
  if (p.err <= tol || p.err <= 1e-16 * std::fabs(p.kronrod)) return p.kronrod;
  if (depth <= 0) throw QuadratureError("adaptive quadrature depth exhausted");
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * tol, depth - 1) +
         adapt(f, c, b, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
  if (std::isnan(a) || std::isnan(b)) throw DomainError("integrate: NaN bound");
  if (a == b) return 0.0;
  if (!(abs_tol > 0.0)) throw DomainError("integrate: tolerance must be positive");
  const double sign = (a < b) ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  return sign * adapt(f, lo, hi, abs_tol, max_depth);
}

}  // namespace lemonlens
