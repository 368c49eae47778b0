#ifndef BLCERT_MODEL_HPP
#define BLCERT_MODEL_HPP

#include <Eigen/Core>
#include <functional>
#include <string>

#include "blcert/grid.hpp"

namespace blcert {

using ScalarFn =
    std::function<double(double t, const Eigen::VectorXd& x, double u)>;
using VectorFn =
    std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& x, double u)>;
using MatrixFn =
    std::function<Eigen::MatrixXd(double t, const Eigen::VectorXd& x, double u)>;

/// Flux f(t,x,u) in R^n together with the derivatives the estimates
/// consume. Any derivative not supplied analytically is replaced by a
/// centered finite difference with step 1e-5 (1 + |argument|).
struct FluxField {
  int dim = 1;
  VectorFn value;     // f
  VectorFn du;        // d_u f
  MatrixFn grad_du;   // (i,j) = d_{x_j} (d_u f_i)
  ScalarFn div;       // div_x f
  VectorFn grad_div;  // grad_x div_x f
};

struct FluxParts {
  VectorFn du;
  MatrixFn grad_du;
  ScalarFn div;
  VectorFn grad_div;
};

FluxField make_flux(int dim, VectorFn f, FluxParts parts = {});
FluxField zero_flux(int dim);

struct SourceField {
  ScalarFn value;  // F
  ScalarFn du;     // d_u F
  VectorFn grad;   // grad_x F
};

struct SourceParts {
  ScalarFn du;
  VectorFn grad;
};

SourceField make_source(int dim, ScalarFn F, SourceParts parts = {});
SourceField zero_source(int dim);

struct ProblemSpec {
  std::string name;
  int dim = 1;
  FluxField flux;
  SourceField source;
  std::function<double(const Eigen::VectorXd&)> u0;
};

/// The effective forcing (t,x,u) -> F(t,x,u) - div_x f(t,x,u).
ScalarFn true_source(const ProblemSpec& spec);

/// Space-time-state sampling region. Sup-norms are maxima over the
/// inclusive lattice (endpoints included, so enlarging a box while
/// keeping the lattice nested never loses samples); space and time
/// integrals are midpoint Riemann sums with nx / nt subdivisions.
struct SamplingBox {
  double t0 = 0.0, t1 = 1.0;
  Eigen::ArrayXd x_lo, x_hi;
  double u_min = -1.0, u_max = 1.0;
  int nt = 17;
  int nx = 65;  // per axis
  int nu = 9;
};

SamplingBox box_for_grid(const UniformGrid& grid, double t1, double u_min,
                         double u_max);

struct HypothesisReport {
  double sup_du_f = 0.0;        // sup ||d_u f||_2
  double sup_grad_du_f = 0.0;   // sup ||grad d_u f||_F
  double sup_du_F = 0.0;        // sup |d_u F|
  double sup_du_FG = 0.0;       // filled by difference audits
  double int_grad_true_source = 0.0;  // int int ||grad(F - div f)||
  double int_true_source = 0.0;       // int int |F - div f|
  SamplingBox box;
};

/// Sampled estimates of every norm and integral the envelope theorems
/// consume. Throws NonFiniteSample on non-finite evaluations.
HypothesisReport audit_hypotheses(const ProblemSpec& spec,
                                  const SamplingBox& box);

/// g(t) = int_box sup_u ||grad(F - div f)(t,x,.)||_2 dx.
std::function<double(double)> grad_true_source_integrand(
    const ProblemSpec& spec, const SamplingBox& box);

/// t -> int_box sup_u |(F - div f)(t,x,.)| dx.
std::function<double(double)> true_source_integrand(const ProblemSpec& spec,
                                                    const SamplingBox& box);

/// Derived quantities of the pair (f-g, F-G) feeding the stability
/// estimate. cone_integrand(t, T) integrates the sup over u of
/// |((F-G) - div(f-g))(t,x,.)| over ||x-x0|| <= R + M (T-t).
struct DifferenceAudit {
  double sup_du_fg = 0.0;  // sup ||d_u (f - g)||_2
  double sup_du_FG = 0.0;  // sup |d_u (F - G)|
  std::function<double(double t, double T)> cone_integrand;
  std::function<double(double T)> cone_integral;
};

DifferenceAudit difference_spec(const ProblemSpec& a, const ProblemSpec& b,
                                const SamplingBox& box,
                                const Eigen::VectorXd& x0, double R, double M);

}  // namespace blcert

#endif
