#ifndef BLCERT_BOUNDS_HPP
#define BLCERT_BOUNDS_HPP

#include <Eigen/Core>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace blcert {

/// Nonnegative curve sampled at nondecreasing times; envelope integrals
/// are composite trapezoid sums on these samples (linearly interpolated
/// where an integration endpoint falls between samples).
struct SampledCurve {
  Eigen::ArrayXd times;
  Eigen::ArrayXd values;

  static SampledCurve constant(double v, double T);
  static SampledCurve sample(const std::function<double(double)>& f, double T,
                             int n);
  double value_at(double t) const;
};

/// (e^{a tau} - e^{b tau}) / (a - b); the removable singularity at a = b
/// is replaced by the limit tau e^{a tau} when
/// |a - b| < 1e-10 max(a, b, 1).
double exp_divided_difference(double a, double b, double tau);

/// The kernel Phi(tau) = (e^{kappa0 tau} - e^{kappa tau})/(kappa0 - kappa)
/// of the stability estimate.
double phi(double kappa0, double kappa, double tau);

/// Total-variation envelope
///   tv0 e^{kappa0 T} + n W_n int_0^T e^{kappa0 (T-t)} g(t) dt.
double tv_envelope(int dim, double tv0, double kappa0, const SampledCurve& g,
                   double T);

/// Closed-form variant with sup_t g in place of the time quadrature;
/// never below tv_envelope on the same inputs.
double tv_envelope_weak(int dim, double tv0, double kappa0, double sup_g,
                        double T);

struct StabilityInputs {
  double l1_0 = 0.0;  // measured on the inflated ball ||x-x0|| <= R + M T
  double tv0 = 0.0;
  double kappa0 = 0.0;
  double kappa = 0.0;
  double M = 0.0;  // ball-inflation speed, recorded for traceability
  double sup_du_fg = 0.0;
};

/// L1 stability envelope:
///   e^{kappa T} l1_0 + Phi(T) tv0 |d_u(f-g)|
///   + n W_n |d_u(f-g)| int_0^T Phi(T-t) g(t) dt
///   + int_0^T e^{kappa (T-t)} c(t) dt.
double stability_envelope(int dim, const StabilityInputs& in,
                          const SampledCurve& g, const SampledCurve& c,
                          double T);

/// Coarser closed form for conservation laws (no sources, where
/// kappa <= kappa0):
///   e^{kappa T} l1_0 + T e^{kappa0 T} tv0 |d_u(f-g)|
///   + n W_n T^2 e^{kappa0 T} sup_t g |d_u(f-g)| + T e^{kappa0 T} sup_t c.
/// Dominates stability_envelope on matching inputs.
double stability_envelope_conservation(int dim, const StabilityInputs& in,
                                       double sup_g, double sup_c, double T);

struct SymmetricInputs {
  StabilityInputs fwd;
  double tv0_rev = 0.0;
  double kappa0_rev = 0.0;
  double kappa_rev = 0.0;
};

/// Role-exchanged variant: growth factor from min(kappa, kappa~), the
/// a/b accumulations taken as the max over the two orderings, the
/// cone term shared.
double stability_envelope_symmetric(int dim, const SymmetricInputs& in,
                                    const SampledCurve& g_fwd,
                                    const SampledCurve& g_rev,
                                    const SampledCurve& c, double T);

/// TV envelope with the convolution mass folded into the rate:
///   e^{(kappa0 + n W_n k) T} tv0
///   + n W_n int_0^T e^{(kappa0 + n W_n k)(T-t)} g(t) dt.
double radiating_tv_envelope(int dim, double tv0, double kappa0, double k,
                             const SampledCurve& g, double T);

/// e^{(kappa + k) T} l1_0, valid when F(t,x,0) - div f(t,x,0) = 0.
double radiating_l1_bound(double l1_0, double kappa, double k, double T);

/// l1_0 (e^{kT} - e^{k~T})/(k - k~) ||K - K~||_{Linf(L1)}.
double kernel_stability_bound(double l1_0, double k, double k_tilde,
                              double dK_l1, double T);

/// Certified bound curve with the constants that produced it.
struct EnvelopeSeries {
  std::string label;
  std::string branch;  // generic | kappa_equal | reduction id
  std::vector<double> times;
  std::vector<double> measured;
  std::vector<double> envelope;
  std::map<std::string, double> constants_used;
};

}  // namespace blcert

#endif
