#include "blcert/bounds.hpp"

#include <cmath>

#include "blcert/constants.hpp"
#include "blcert/errors.hpp"

namespace blcert {

SampledCurve SampledCurve::constant(double v, double T) {
  SampledCurve c;
  c.times.resize(2);
  c.values.resize(2);
  c.times << 0.0, T;
  c.values << v, v;
  return c;
}

SampledCurve SampledCurve::sample(const std::function<double(double)>& f,
                                  double T, int n) {
  SampledCurve c;
  c.times.resize(n);
  c.values.resize(n);
  for (int i = 0; i < n; ++i) {
    c.times[i] = T * static_cast<double>(i) / (n - 1);
    c.values[i] = f(c.times[i]);
  }
  return c;
}

double SampledCurve::value_at(double t) const {
  const int n = static_cast<int>(times.size());
  if (n == 0) return 0.0;
  if (t <= times[0]) return values[0];
  if (t >= times[n - 1]) return values[n - 1];
  for (int i = 0; i + 1 < n; ++i) {
    if (t <= times[i + 1]) {
      const double span = times[i + 1] - times[i];
      if (span <= 0.0) return values[i + 1];
      const double w = (t - times[i]) / span;
      return (1.0 - w) * values[i] + w * values[i + 1];
    }
  }
  return values[n - 1];
}

namespace {

void require_nonneg(double v, const char* what) {
  if (v < 0.0) throw NegativeInput(std::string(what) + " must be >= 0");
}

void require_curve(const SampledCurve& c, const char* what) {
  if ((c.values < 0.0).any()) {
    throw NegativeInput(std::string(what) + " has negative samples");
  }
}

// int_0^T w(T - t) c(t) dt by composite trapezoid on the sample knots
// of c restricted to [0, T], with 0 and T inserted.
double weighted_trapezoid(const SampledCurve& c, double T,
                          const std::function<double(double)>& w) {
  if (T <= 0.0) return 0.0;
  std::vector<double> knots;
  knots.push_back(0.0);
  for (int i = 0; i < c.times.size(); ++i) {
    const double t = c.times[i];
    if (t > 0.0 && t < T) knots.push_back(t);
  }
  knots.push_back(T);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i], b = knots[i + 1];
    const double fa = w(T - a) * c.value_at(a);
    const double fb = w(T - b) * c.value_at(b);
    acc += 0.5 * (fa + fb) * (b - a);
  }
  return acc;
}

}  // namespace

double exp_divided_difference(double a, double b, double tau) {
  if (std::abs(a - b) < 1e-10 * std::max({a, b, 1.0})) {
    return tau * std::exp(a * tau);
  }
  return (std::exp(a * tau) - std::exp(b * tau)) / (a - b);
}

double phi(double kappa0, double kappa, double tau) {
  return exp_divided_difference(kappa0, kappa, tau);
}

double tv_envelope(int dim, double tv0, double kappa0, const SampledCurve& g,
                   double T) {
  require_nonneg(tv0, "tv0");
  require_nonneg(kappa0, "kappa0");
  require_nonneg(T, "T");
  require_curve(g, "g");
  const double nwn = dim * wallis(dim);
  const double integral = weighted_trapezoid(
      g, T, [kappa0](double tau) { return std::exp(kappa0 * tau); });
  return tv0 * std::exp(kappa0 * T) + nwn * integral;
}

double tv_envelope_weak(int dim, double tv0, double kappa0, double sup_g,
                        double T) {
  require_nonneg(tv0, "tv0");
  require_nonneg(kappa0, "kappa0");
  require_nonneg(sup_g, "sup_g");
  require_nonneg(T, "T");
  const double nwn = dim * wallis(dim);
  // (e^{kappa0 T} - 1)/kappa0 -> T as kappa0 -> 0.
  const double accum = exp_divided_difference(kappa0, 0.0, T);
  return tv0 * std::exp(kappa0 * T) + nwn * accum * sup_g;
}

double stability_envelope(int dim, const StabilityInputs& in,
                          const SampledCurve& g, const SampledCurve& c,
                          double T) {
  require_nonneg(in.l1_0, "l1_0");
  require_nonneg(in.tv0, "tv0");
  require_nonneg(in.kappa0, "kappa0");
  require_nonneg(in.kappa, "kappa");
  require_nonneg(in.sup_du_fg, "sup_du_fg");
  require_nonneg(T, "T");
  require_curve(g, "g");
  require_curve(c, "c");
  const double nwn = dim * wallis(dim);
  const double k0 = in.kappa0, k = in.kappa;
  double bound = std::exp(k * T) * in.l1_0;
  bound += phi(k0, k, T) * in.tv0 * in.sup_du_fg;
  bound += nwn * in.sup_du_fg *
           weighted_trapezoid(g, T, [k0, k](double tau) {
             return phi(k0, k, tau);
           });
  bound += weighted_trapezoid(
      c, T, [k](double tau) { return std::exp(k * tau); });
  return bound;
}

double stability_envelope_conservation(int dim, const StabilityInputs& in,
                                       double sup_g, double sup_c, double T) {
  require_nonneg(in.l1_0, "l1_0");
  require_nonneg(in.tv0, "tv0");
  require_nonneg(in.kappa0, "kappa0");
  require_nonneg(in.kappa, "kappa");
  require_nonneg(in.sup_du_fg, "sup_du_fg");
  require_nonneg(sup_g, "sup_g");
  require_nonneg(sup_c, "sup_c");
  require_nonneg(T, "T");
  const double nwn = dim * wallis(dim);
  const double grow = std::exp(in.kappa0 * T);
  return std::exp(in.kappa * T) * in.l1_0 +
         T * grow * in.tv0 * in.sup_du_fg +
         nwn * T * T * grow * sup_g * in.sup_du_fg + T * grow * sup_c;
}

double stability_envelope_symmetric(int dim, const SymmetricInputs& in,
                                    const SampledCurve& g_fwd,
                                    const SampledCurve& g_rev,
                                    const SampledCurve& c, double T) {
  require_nonneg(in.tv0_rev, "tv0_rev");
  require_nonneg(in.kappa0_rev, "kappa0_rev");
  require_nonneg(in.kappa_rev, "kappa_rev");
  require_curve(g_rev, "g_rev");
  const double nwn = dim * wallis(dim);
  const double km = std::min(in.fwd.kappa, in.kappa_rev);
  const double a = in.fwd.sup_du_fg;

  auto accumulation = [&](double kappa0, double tv0, const SampledCurve& g) {
    double acc = phi(kappa0, km, T) * tv0 * a;
    acc += nwn * a * weighted_trapezoid(g, T, [kappa0, km](double tau) {
             return phi(kappa0, km, tau);
           });
    return acc;
  };

  double bound = std::exp(km * T) * in.fwd.l1_0;
  bound += std::max(accumulation(in.fwd.kappa0, in.fwd.tv0, g_fwd),
                    accumulation(in.kappa0_rev, in.tv0_rev, g_rev));
  bound += weighted_trapezoid(
      c, T, [km](double tau) { return std::exp(km * tau); });
  return bound;
}

double radiating_tv_envelope(int dim, double tv0, double kappa0, double k,
                             const SampledCurve& g, double T) {
  require_nonneg(tv0, "tv0");
  require_nonneg(kappa0, "kappa0");
  require_nonneg(k, "k");
  require_nonneg(T, "T");
  require_curve(g, "g");
  const double nwn = dim * wallis(dim);
  const double rate = kappa0 + nwn * k;
  const double integral = weighted_trapezoid(
      g, T, [rate](double tau) { return std::exp(rate * tau); });
  return tv0 * std::exp(rate * T) + nwn * integral;
}

double radiating_l1_bound(double l1_0, double kappa, double k, double T) {
  require_nonneg(l1_0, "l1_0");
  require_nonneg(kappa, "kappa");
  require_nonneg(k, "k");
  require_nonneg(T, "T");
  return std::exp((kappa + k) * T) * l1_0;
}

double kernel_stability_bound(double l1_0, double k, double k_tilde,
                              double dK_l1, double T) {
  require_nonneg(l1_0, "l1_0");
  require_nonneg(k, "k");
  require_nonneg(k_tilde, "k_tilde");
  require_nonneg(dK_l1, "dK_l1");
  require_nonneg(T, "T");
  return l1_0 * exp_divided_difference(k, k_tilde, T) * dK_l1;
}

}  // namespace blcert
