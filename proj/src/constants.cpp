#include "blcert/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "blcert/errors.hpp"
#include "blcert/quadrature.hpp"

namespace blcert {

double wallis(int n) {
  if (n < 0) throw std::invalid_argument("wallis: n must be >= 0");
  double w = (n % 2 == 0) ? std::numbers::pi / 2.0 : 1.0;
  for (int k = (n % 2 == 0) ? 2 : 3; k <= n; k += 2) {
    w *= static_cast<double>(k - 1) / static_cast<double>(k);
  }
  return w;
}

double ball_volume(int n) {
  if (n < 0) throw std::invalid_argument("ball_volume: n must be >= 0");
  if (n == 0) return 1.0;
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

MollifierSpec plateau_mollifier(double flat_radius) {
  if (!(flat_radius > 0.0 && flat_radius < 1.0)) {
    throw std::invalid_argument("plateau_mollifier: flat_radius in (0,1)");
  }
  const double rf = flat_radius;
  const double width = 1.0 - rf;
  auto profile = [rf, width](double r) {
    if (r <= rf) return 1.0;
    if (r >= 1.0) return 0.0;
    const double s = (r - rf) / width;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
  };
  auto deriv = [rf, width](double r) {
    if (r <= rf || r >= 1.0) return 0.0;
    const double s = (r - rf) / width;
    const double one_ms2 = 1.0 - s * s;
    return std::exp(1.0 - 1.0 / one_ms2) * (-2.0 * s / (one_ms2 * one_ms2)) /
           width;
  };
  return MollifierSpec{profile, deriv, flat_radius};
}

namespace {

// int_0^1 r^p rho(r) dr for the raw profile.
double radial_moment(const MollifierSpec& m, int p, double tol = 1e-11) {
  return integrate([&](double r) { return std::pow(r, p) * m.profile(r); },
                   0.0, 1.0, tol);
}

// int_{S^{n-1}} |sigma_1| dsigma, by quadrature of the polar-angle
// integral for n >= 2; equals 2 for n = 1 (the two-point sphere).
double abs_first_coordinate_on_sphere(int n) {
  if (n == 1) return 2.0;
  const double sphere_area = (n - 1) * ball_volume(n - 1);  // |S^{n-2}|
  const double polar = integrate(
      [n](double th) {
        return std::abs(std::cos(th)) * std::pow(std::sin(th), n - 2);
      },
      0.0, std::numbers::pi, 1e-11);
  return sphere_area * polar;
}

double normalization(int n, const MollifierSpec& m) {
  const double raw = radial_moment(m, n - 1);
  if (!(raw > 0.0)) throw QuadratureFailure("mollifier profile has no mass");
  return 1.0 / (n * ball_volume(n) * raw);
}

}  // namespace

MollifierConstants mollifier_constants(int n, const MollifierSpec& m) {
  if (n < 1) throw std::invalid_argument("mollifier_constants: n >= 1");
  const double scale = normalization(n, m);
  const double q = scale * radial_moment(m, n);  // int r^n mu1 dr
  MollifierConstants out;
  out.normalization = scale;
  out.c1 = abs_first_coordinate_on_sphere(n) * q;
  out.m1 = n * ball_volume(n) * q;
  return out;
}

double MollifierIdentityReport::max() const {
  return std::max({unit_mass, moment_ratio, gradient_moment, radial_gradient,
                   second_moment});
}

MollifierIdentityReport mollifier_identities(int n, const MollifierSpec& m,
                                             double lambda) {
  if (n < 1) throw std::invalid_argument("mollifier_identities: n >= 1");
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("mollifier_identities: lambda > 0");
  }
  const double scale = normalization(n, m);
  const double nwn = n * ball_volume(n);
  auto mu1 = [&](double r) { return scale * m.profile(r); };
  auto mu1p = [&](double r) { return scale * m.profile_deriv(r); };

  MollifierIdentityReport rep;

  // Unit mass of mu(x) = mu1(||x||/lambda)/lambda^n; substituting
  // r = lambda s reduces to the lambda-free radial integral.
  const double mass =
      nwn * integrate([&](double s) { return std::pow(s, n - 1) * mu1(s); },
                      0.0, 1.0, 1e-11);
  rep.unit_mass = std::abs(mass - 1.0);

  const MollifierConstants mc = mollifier_constants(n, m);
  rep.moment_ratio = std::abs(
      mc.c1 - (2.0 / n) * (ball_volume(n - 1) / ball_volume(n)) * mc.m1);

  // ||grad mu(x)|| = |mu1'(||x||/lambda)| / lambda^{n+1}; the ||x||
  // moment is again lambda-free after substitution. The two forms agree
  // only because mu1' <= 0, so they are quadratured separately.
  const double grad_moment = nwn * integrate(
      [&](double s) { return std::pow(s, n) * std::abs(mu1p(s)); }, 0.0, 1.0,
      1e-11);
  const double radial_form =
      -nwn * integrate([&](double s) { return std::pow(s, n) * mu1p(s); }, 0.0,
                       1.0, 1e-11);
  rep.gradient_moment = std::abs(grad_moment - n);
  rep.radial_gradient = std::abs(radial_form - n);

  const double second =
      nwn * integrate([&](double s) { return std::pow(s, n + 1) * mu1p(s); },
                      0.0, 1.0, 1e-11);
  rep.second_moment = std::abs(second + (n + 1) * mc.m1);
  return rep;
}

double kappa0(int n, double norm_grad_du_f, double norm_du_F) {
  if (norm_grad_du_f < 0.0 || norm_du_F < 0.0) {
    throw NegativeInput("kappa0: norms must be nonnegative");
  }
  return n * wallis(n) * ((2.0 * n + 1.0) * norm_grad_du_f + norm_du_F);
}

double kappa(int n, double norm_grad_du_f, double norm_du_F,
             double norm_du_FG) {
  if (norm_grad_du_f < 0.0 || norm_du_F < 0.0 || norm_du_FG < 0.0) {
    throw NegativeInput("kappa: norms must be nonnegative");
  }
  return 2.0 * n * norm_grad_du_f + norm_du_F + norm_du_FG;
}

}  // namespace blcert
