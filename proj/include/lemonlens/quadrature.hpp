#pragma once

#include <functional>

namespace lemonlens {

// Adaptive Gauss-Kronrod (7,15) integration of f over [a,b] to an absolute
// tolerance. Panels whose Kronrod/Gauss discrepancy exceeds their share of
// the tolerance are bisected. Throws QuadratureError if the recursion depth
// budget is exhausted before the tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-9, int max_depth = 60);

}  // namespace lemonlens
