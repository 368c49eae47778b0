#include "blcert/quadrature.hpp"

#include <cmath>
#include <cstdlib>

#include "blcert/errors.hpp"

namespace blcert {

namespace {

// 15-point Gauss-Legendre nodes (positive half) and weights on [-1, 1].
constexpr double kNodes[8] = {
    0.0,
    0.2011940939974345223006283,
    0.3941513470775633698972074,
    0.5709721726085388475372267,
    0.7244177313601700474161861,
    0.8482065834104272162006483,
    0.9372733924007059043077589,
    0.9879925180204854284895657,
};
constexpr double kWeights[8] = {
    0.2025782419255612728806202,
    0.1984314853271115764561183,
    0.1861610000155622110268006,
    0.1662692058169939335532009,
    0.1395706779261543144478048,
    0.1071592204671719350118695,
    0.0703660474881081247092674,
    0.0307532419961172683546284,
};

double gauss15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  double acc = kWeights[0] * f(c);
  for (int i = 1; i < 8; ++i) {
    const double dx = r * kNodes[i];
    acc += kWeights[i] * (f(c - dx) + f(c + dx));
  }
  return acc * r;
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double whole, double tol, double scale, int depth) {
  if (depth > 48) {
    throw QuadratureFailure("quadrature did not converge on [" +
                            std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  const double m = 0.5 * (a + b);
  const double left = gauss15(f, a, m);
  const double right = gauss15(f, m, b);
  const double halves = left + right;
  if (std::abs(whole - halves) <= tol * std::max(scale, std::abs(halves))) {
    return halves;
  }
  return adapt(f, a, m, left, tol, scale, depth + 1) +
         adapt(f, m, b, right, tol, scale, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  if (a == b) return 0.0;
  const double whole = gauss15(f, a, b);
  // The scale guards the relative test on pieces that integrate to ~0
  // inside an otherwise nonzero integral.
  const double scale = std::max(std::abs(whole), 1e-300);
  return adapt(f, a, b, whole, rel_tol, 1e-6 * scale, 0);
}

double trapezoid(const double* times, const double* values, int n) {
  double acc = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    acc += 0.5 * (values[i] + values[i + 1]) * (times[i + 1] - times[i]);
  }
  return acc;
}

}  // namespace blcert
