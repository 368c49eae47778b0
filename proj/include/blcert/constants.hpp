#ifndef BLCERT_CONSTANTS_HPP
#define BLCERT_CONSTANTS_HPP

#include <functional>

namespace blcert {

/// Wallis integral W_n = \int_0^{pi/2} cos(theta)^n dtheta, by the
/// closed-form recurrence W_n = (n-1)/n * W_{n-2}, W_0 = pi/2, W_1 = 1.
double wallis(int n);

/// Volume of the unit ball in R^n, with the convention omega_0 = 1.
/// Satisfies omega_n = 2 W_n omega_{n-1}.
double ball_volume(int n);

/// Radial mollifier profile on [0, 1): nonnegative, nonincreasing,
/// constant on [0, flat_radius] (so every derivative vanishes at 0),
/// zero outside [0, 1). The profile is unnormalized; the dimensional
/// normalization int_0^inf r^{n-1} mu1(r) dr = 1/(n omega_n) is applied
/// by the routines below.
struct MollifierSpec {
  std::function<double(double)> profile;        // rho(r) >= 0
  std::function<double(double)> profile_deriv;  // rho'(r) <= 0
  double flat_radius = 0.5;
};

/// Plateau profile: 1 on [0, flat_radius], then exp(1 - 1/(1 - s^2))
/// with s = (r - flat_radius)/(1 - flat_radius), zero beyond r = 1.
MollifierSpec plateau_mollifier(double flat_radius = 0.5);

struct MollifierConstants {
  double c1;             // int_{R^n} |x_1| mu1(||x||) dx
  double m1;             // int_{R^n} ||x|| mu1(||x||) dx
  double normalization;  // scale applied to the raw profile
};

/// First moments of the normalized mollifier in dimension n, reduced to
/// 1-D radial quadratures (weights r^{n-1} and r^n). c1 carries the
/// angular factor int_{S^{n-1}} |sigma_1| dsigma, itself computed by
/// quadrature so that m1/c1 = n W_n is a genuine numerical cross-check.
MollifierConstants mollifier_constants(int n, const MollifierSpec& m);

/// Absolute residuals of the scaled-mollifier identities
/// (unit mass, first-moment ratio, gradient moments).
struct MollifierIdentityReport {
  double unit_mass;        // | int mu - 1 |,  mu(x) = mu1(||x||/l)/l^n
  double moment_ratio;     // | c1 - (2/n)(w_{n-1}/w_n) m1 |
  double gradient_moment;  // | int ||x|| ||grad mu|| dx - n |
  double radial_gradient;  // | -int ||x|| mu1'(||x||) dx - n |
  double second_moment;    // | int ||x||^2 mu1' + (n+1) m1 |
  double max() const;
};

MollifierIdentityReport mollifier_identities(int n, const MollifierSpec& m,
                                             double lambda);

/// Growth rate of the total-variation bound:
/// kappa0 = n W_n ((2n+1) ||grad du f|| + ||du F||).
double kappa0(int n, double norm_grad_du_f, double norm_du_F);

/// Growth rate of the L1 stability bound:
/// kappa = 2n ||grad du f|| + ||du F|| + ||du (F-G)||.
double kappa(int n, double norm_grad_du_f, double norm_du_F,
             double norm_du_FG);

}  // namespace blcert

#endif
