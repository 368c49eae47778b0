#ifndef BLCERT_QUADRATURE_HPP
#define BLCERT_QUADRATURE_HPP

#include <functional>

namespace blcert {

/// Adaptive composite Gauss-Legendre quadrature of f on [a, b].
///
/// Subintervals are bisected until the 15-point estimate of each piece
/// agrees with the sum of the estimates of its halves to rel_tol.
/// Throws QuadratureFailure if the recursion depth limit is reached
/// before the tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-9);

/// Trapezoid rule on the sample points (t_i, v_i); times must be
/// nondecreasing. Returns 0 for fewer than two samples.
double trapezoid(const double* times, const double* values, int n);

}  // namespace blcert

#endif
