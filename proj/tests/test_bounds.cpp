#include <doctest.h>

#include <cmath>
#include <random>

#include "blcert/bounds.hpp"
#include "blcert/constants.hpp"
#include "blcert/errors.hpp"

using namespace blcert;

TEST_CASE("exp divided difference and its removable singularity") {
  CHECK(exp_divided_difference(1.0, 0.0, 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  for (double kappa : {0.0, 0.3, 2.0}) {
    for (double tau : {0.1, 1.0, 10.0}) {
      const double limit = tau * std::exp(kappa * tau);
      CHECK(phi(kappa, kappa, tau) == limit);
      for (double eps : {1e-8, -1e-8}) {
        const double p = phi(kappa + eps, kappa, tau);
        CHECK(std::abs(p - limit) < 1e-6 * limit);
      }
    }
  }
}

TEST_CASE("tv envelope reductions") {
  const SampledCurve zero = SampledCurve::constant(0.0, 1.0);
  // No growth, no forcing: the optimal TV bound.
  CHECK(tv_envelope(1, 2.0, 0.0, zero, 1.0) == doctest::Approx(2.0));
  CHECK(tv_envelope(3, 2.0, 0.0, zero, 5.0) == doctest::Approx(2.0));

  // Constant forcing with kappa0 = 0: tv0 + n W_n c T; in 1-D this is
  // the ordinary-differential-equation case tv0 + T TV(F - div f).
  const SampledCurve c = SampledCurve::constant(0.7, 2.0);
  CHECK(tv_envelope(1, 2.0, 0.0, c, 2.0) ==
        doctest::Approx(2.0 + 0.7 * 2.0).epsilon(1e-12));
  CHECK(tv_envelope(2, 1.0, 0.0, c, 2.0) ==
        doctest::Approx(1.0 + 2.0 * wallis(2) * 0.7 * 2.0).epsilon(1e-12));

  // Exponential growth with no forcing.
  CHECK(tv_envelope(1, 1.5, 0.8, zero, 2.0) ==
        doctest::Approx(1.5 * std::exp(1.6)).epsilon(1e-12));
}

TEST_CASE("weak closed form dominates the quadrature form") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> dist(0.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double tv0 = dist(rng);
    const double kappa0 = dist(rng);
    const double T = 0.2 + dist(rng);
    SampledCurve g = SampledCurve::sample(
        [&](double) { return 0.0; }, T, 9);
    double sup = 0.0;
    for (int i = 0; i < g.values.size(); ++i) {
      g.values[i] = dist(rng);
      sup = std::max(sup, g.values[i]);
    }
    const int dim = 1 + trial % 3;
    CHECK(tv_envelope_weak(dim, tv0, kappa0, sup, T) >=
          tv_envelope(dim, tv0, kappa0, g, T) - 1e-12);
  }
}

TEST_CASE("stability envelope reproduces the three reductions") {
  const SampledCurve zero = SampledCurve::constant(0.0, 4.0);

  // Conservation laws with x-independent flux: l1_0 + T tv0 |du(f-g)|.
  StabilityInputs in;
  in.l1_0 = 0.25;
  in.tv0 = 2.0;
  in.kappa0 = 0.0;
  in.kappa = 0.0;
  in.sup_du_fg = 0.05;
  CHECK(stability_envelope(1, in, zero, zero, 0.5) ==
        doctest::Approx(0.25 + 0.5 * 2.0 * 0.05).epsilon(1e-12));

  // u-independent fluxes and sources: l1_0 + int ||(F-G)-div(f-g)||_L1.
  StabilityInputs in2;
  in2.l1_0 = 0.1;
  const SampledCurve c = SampledCurve::constant(0.3, 4.0);
  CHECK(stability_envelope(1, in2, zero, c, 2.0) ==
        doctest::Approx(0.1 + 0.3 * 2.0).epsilon(1e-12));

  // Time-independent x-only data reduce to the same with constant c.
  CHECK(stability_envelope(2, in2, zero, c, 4.0) ==
        doctest::Approx(0.1 + 0.3 * 4.0).epsilon(1e-12));
}

TEST_CASE("kappa-equal branch matches the adjacent generic branch") {
  StabilityInputs in;
  in.l1_0 = 0.3;
  in.tv0 = 1.7;
  in.kappa = 0.9;
  in.sup_du_fg = 0.2;
  const SampledCurve g = SampledCurve::constant(0.4, 2.0);
  const SampledCurve c = SampledCurve::constant(0.1, 2.0);
  for (double T : {0.1, 1.0, 2.0}) {
    in.kappa0 = in.kappa;
    const double degenerate = stability_envelope(1, in, g, c, T);
    in.kappa0 = in.kappa + 1e-8;
    const double generic = stability_envelope(1, in, g, c, T);
    CHECK(std::abs(degenerate - generic) < 1e-6 * degenerate);
  }
}

TEST_CASE("symmetric stability bound") {
  const SampledCurve zero = SampledCurve::constant(0.0, 2.0);
  const SampledCurve g = SampledCurve::constant(0.5, 2.0);
  const SampledCurve c = SampledCurve::constant(0.2, 2.0);

  StabilityInputs in;
  in.l1_0 = 0.4;
  in.tv0 = 1.0;
  in.kappa0 = 0.3;
  in.kappa = 0.8;
  in.sup_du_fg = 0.1;

  SUBCASE("identical orderings collapse to the asymmetric bound") {
    SymmetricInputs sym;
    sym.fwd = in;
    sym.tv0_rev = in.tv0;
    sym.kappa0_rev = in.kappa0;
    sym.kappa_rev = in.kappa;
    const double a = stability_envelope(1, in, g, c, 1.5);
    const double s = stability_envelope_symmetric(1, sym, g, g, c, 1.5);
    CHECK(s == doctest::Approx(a).epsilon(1e-12));
  }

  SUBCASE("a smaller comparison variation can only help") {
    SymmetricInputs sym;
    sym.fwd = in;
    sym.tv0_rev = 1e-3;  // TV(v0) << TV(u0)
    sym.kappa0_rev = in.kappa0;
    sym.kappa_rev = in.kappa;
    const double a = stability_envelope(1, in, g, c, 1.5);
    const double s = stability_envelope_symmetric(1, sym, g, zero, c, 1.5);
    CHECK(s <= a + 1e-12);
  }

  SUBCASE("growth factor takes the smaller rate") {
    SymmetricInputs sym;
    sym.fwd = in;
    sym.fwd.tv0 = 0.0;
    sym.fwd.sup_du_fg = 0.0;
    sym.tv0_rev = 0.0;
    sym.kappa0_rev = in.kappa0;
    sym.kappa_rev = 0.25;  // < kappa
    const double s = stability_envelope_symmetric(1, sym, zero, zero, zero,
                                                  2.0);
    CHECK(s == doctest::Approx(0.4 * std::exp(0.25 * 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("conservation-law form dominates the sharp envelope") {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> dist(0.0, 1.2);
  for (int trial = 0; trial < 80; ++trial) {
    StabilityInputs in;
    in.l1_0 = dist(rng);
    in.tv0 = dist(rng);
    in.kappa0 = dist(rng);
    in.kappa = dist(rng) * in.kappa0;  // kappa <= kappa0 as for F = G = 0
    in.sup_du_fg = dist(rng);
    const double T = 0.1 + dist(rng);
    const double sup_g = dist(rng);
    const double sup_c = dist(rng);
    const SampledCurve g = SampledCurve::constant(sup_g, T);
    const SampledCurve c = SampledCurve::constant(sup_c, T);
    const int dim = 1 + trial % 3;
    CHECK(stability_envelope(dim, in, g, c, T) <=
          stability_envelope_conservation(dim, in, sup_g, sup_c, T) + 1e-12);
  }
}

TEST_CASE("radiating TV envelope") {
  const SampledCurve zero = SampledCurve::constant(0.0, 1.0);
  const SampledCurve g = SampledCurve::constant(0.3, 1.0);
  // k = 0 recovers the plain TV envelope.
  CHECK(radiating_tv_envelope(2, 1.2, 0.4, 0.0, g, 1.0) ==
        doctest::Approx(tv_envelope(2, 1.2, 0.4, g, 1.0)).epsilon(1e-12));
  // Pure exponential growth.
  CHECK(radiating_tv_envelope(1, 1.0, 0.0, 1.0, zero, 1.0) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(radiating_tv_envelope(2, 3.0, 0.5, 2.0, zero, 0.7) ==
        doctest::Approx(3.0 * std::exp((0.5 + 2.0 * wallis(2) * 2.0) * 0.7))
            .epsilon(1e-12));
}

TEST_CASE("radiating L1 bound") {
  CHECK(radiating_l1_bound(0.8, 1.3, 2.0, 0.0) == doctest::Approx(0.8));
  CHECK(radiating_l1_bound(1.0, 0.0, 1.0, 1.0) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(radiating_l1_bound(0.0, 2.0, 3.0, 5.0) == 0.0);
}

TEST_CASE("kernel stability bound") {
  CHECK(kernel_stability_bound(1.0, 1.0, 0.7, 0.0, 2.0) == 0.0);
  const double eps = 1e-3;
  CHECK(kernel_stability_bound(1.0, 1.0, 1.0, eps, 1.0) ==
        doctest::Approx(eps * std::exp(1.0)).epsilon(1e-12));
  CHECK(kernel_stability_bound(1.0, 1.0, 0.0, 0.5, 1.0) ==
        doctest::Approx(0.5 * (std::exp(1.0) - 1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(kernel_stability_bound(-1.0, 1.0, 1.0, 0.1, 1.0),
                  NegativeInput);
}

TEST_CASE("envelopes are monotone in every nonnegative input") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> dist(0.0, 1.5);
  for (int trial = 0; trial < 60; ++trial) {
    const int dim = 1 + trial % 2;
    StabilityInputs in;
    in.l1_0 = dist(rng);
    in.tv0 = dist(rng);
    in.kappa0 = dist(rng);
    in.kappa = dist(rng);
    in.sup_du_fg = dist(rng);
    const double T = 0.1 + dist(rng);
    const SampledCurve g = SampledCurve::constant(dist(rng), T);
    const SampledCurve c = SampledCurve::constant(dist(rng), T);
    const double base = stability_envelope(dim, in, g, c, T);

    StabilityInputs up = in;
    const double bump = 0.1 + 0.5 * dist(rng);
    switch (trial % 4) {
      case 0: up.l1_0 += bump; break;
      case 1: up.tv0 += bump; break;
      case 2: up.sup_du_fg += bump; break;
      default: break;
    }
    const double T_up = (trial % 4 == 3) ? T + bump : T;
    SampledCurve g_up = SampledCurve::constant(g.values[0], T_up);
    SampledCurve c_up = SampledCurve::constant(c.values[0], T_up);
    CHECK(stability_envelope(dim, up, g_up, c_up, T_up) >= base - 1e-12);

    const double tv_base = tv_envelope(dim, in.tv0, in.kappa0, g, T);
    CHECK(tv_envelope(dim, in.tv0 + bump, in.kappa0, g, T) >= tv_base);
    CHECK(tv_envelope(dim, in.tv0, in.kappa0, g_up, T_up) >= tv_base - 1e-12);
  }
}

TEST_CASE("negative inputs are rejected") {
  const SampledCurve zero = SampledCurve::constant(0.0, 1.0);
  CHECK_THROWS_AS(tv_envelope(1, -1.0, 0.0, zero, 1.0), NegativeInput);
  CHECK_THROWS_AS(tv_envelope(1, 1.0, -0.1, zero, 1.0), NegativeInput);
  SampledCurve bad = SampledCurve::constant(-0.5, 1.0);
  CHECK_THROWS_AS(tv_envelope(1, 1.0, 0.0, bad, 1.0), NegativeInput);
  StabilityInputs in;
  in.sup_du_fg = -1.0;
  CHECK_THROWS_AS(stability_envelope(1, in, zero, zero, 1.0), NegativeInput);
}

TEST_CASE("envelope series are nondecreasing in the horizon") {
  const SampledCurve g = SampledCurve::constant(0.3, 3.0);
  double prev = 0.0;
  for (double T = 0.0; T <= 3.0; T += 0.1) {
    const double v = tv_envelope(2, 1.0, 0.7, g, T);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}
