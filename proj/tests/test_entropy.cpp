#include <doctest.h>

#include <cmath>

#include "blcert/entropy.hpp"
#include "blcert/errors.hpp"
#include "blcert/problems.hpp"

using namespace blcert;

namespace {

Trajectory burgers_run(Index cells, double T, bool record_all = true) {
  const UniformGrid g = uniform_line(-2.0, 3.0, cells, Boundary::Periodic);
  ProblemSpec spec = make_problem(
      "burgers", {}, "box", {{"center", 0.0}, {"width", 1.0}, {"height", 1.0}},
      1);
  SolveOptions opt;
  opt.sup_du_f = 1.0;
  opt.record_all_steps = record_all;
  return solve(spec, g, T, opt);
}

}  // namespace

TEST_CASE("constant solutions have no residual") {
  const UniformGrid g = uniform_line(-1.0, 1.0, 64, Boundary::Periodic);
  ProblemSpec spec =
      make_problem("burgers", {}, "constant", {{"height", 0.4}}, 1);
  SolveOptions opt;
  opt.sup_du_f = 0.5;
  opt.record_all_steps = true;
  opt.max_dt = 0.05;
  const Trajectory traj = solve(spec, g, 0.5, opt);
  const EntropyReport rep =
      entropy_residual(traj, spec, {-1.0, 0.0, 0.4, 1.0});
  CHECK(rep.max_positive <= 1e-12);
}

TEST_CASE("monotone Burgers runs satisfy the cell inequality exactly") {
  ProblemSpec spec = make_problem(
      "burgers", {}, "box", {{"center", 0.0}, {"width", 1.0}, {"height", 1.0}},
      1);
  for (const Index cells : {200, 400}) {
    const Trajectory traj = burgers_run(cells, 0.3);
    const EntropyReport rep =
        entropy_residual(traj, spec, kruzkov_levels(traj));
    CHECK(rep.max_positive <= 1e-10);
  }
}

TEST_CASE("x-dependent flux keeps the inequality exact") {
  const UniformGrid g = uniform_line(-12.0, 12.0, 300, Boundary::Padded);
  ProblemSpec spec = make_problem("cosx_flux", {}, "zero", {}, 1);
  SolveOptions opt;
  opt.sup_du_f = 0.0;
  opt.max_dt = 0.05;
  opt.record_all_steps = true;
  const Trajectory traj = solve(spec, g, 1.0, opt);
  const EntropyReport rep = entropy_residual(traj, spec, kruzkov_levels(traj));
  CHECK(rep.max_positive <= 1e-10);
}

TEST_CASE("constants outside the state range reduce to conservation") {
  const Trajectory traj = burgers_run(250, 0.3);
  ProblemSpec spec = make_problem(
      "burgers", {}, "box", {{"center", 0.0}, {"width", 1.0}, {"height", 1.0}},
      1);
  // |u - k| is affine in u there, so only the conservation error remains.
  const EntropyReport rep = entropy_residual(traj, spec, {-3.0, 4.0});
  CHECK(rep.max_positive <= 1e-10);
}

TEST_CASE("two-dimensional runs satisfy the cell inequality") {
  Eigen::ArrayXd lo(2), hi(2);
  lo << -1.5, -1.5;
  hi << 1.5, 1.5;
  const UniformGrid g = uniform_box(lo, hi, {40, 40}, Boundary::Periodic);
  ProblemSpec spec = make_problem(
      "burgers", {}, "box", {{"center", 0.0}, {"width", 1.0}, {"height", 1.0}},
      2);
  SolveOptions opt;
  opt.sup_du_f = std::sqrt(2.0);
  opt.record_all_steps = true;
  const Trajectory traj = solve(spec, g, 0.1, opt);
  const EntropyReport rep = entropy_residual(traj, spec, kruzkov_levels(traj));
  CHECK(rep.max_positive <= 1e-10);
}

TEST_CASE("entropy-violating data are flagged") {
  // A steady expansion shock for Burgers: a weak solution that is not
  // the entropy solution. The certifier must reject it.
  const UniformGrid g = uniform_line(-1.0, 1.0, 100, Boundary::Periodic);
  ProblemSpec spec = make_problem("burgers", {}, "zero", {}, 1);
  GridFn u = sample_on_grid(g, [](const Eigen::VectorXd& x) {
    return (x[0] >= -0.5 && x[0] < 0.5) ? (x[0] < 0.0 ? -1.0 : 1.0) : 0.0;
  });
  Trajectory fake;
  fake.times = {0.0, 0.01};
  fake.states = {u, u};
  fake.dt_history = {0.01};
  const EntropyReport rep = entropy_residual(fake, spec, {0.0});
  CHECK(rep.max_positive > 0.1);
}

TEST_CASE("kruzkov levels span the state range with a margin") {
  const Trajectory traj = burgers_run(100, 0.1);
  const std::vector<double> ks = kruzkov_levels(traj, 9);
  REQUIRE(ks.size() == 9);
  CHECK(ks.front() < 0.0);
  CHECK(ks.back() > 1.0);
  CHECK(ks.front() == doctest::Approx(-0.05).epsilon(1e-6));
  CHECK(ks.back() == doctest::Approx(1.05).epsilon(1e-6));
}

TEST_CASE("sparse trajectories are rejected") {
  const Trajectory traj = burgers_run(100, 0.2, false);
  ProblemSpec spec = make_problem("burgers", {}, "zero", {}, 1);
  CHECK_THROWS_AS(entropy_residual(traj, spec, {0.5}), SchemeMismatch);

  Trajectory wrong = burgers_run(100, 0.1);
  wrong.scheme.flux_name = "roe";
  CHECK_THROWS_AS(entropy_residual(wrong, spec, {0.5}), SchemeMismatch);
}

TEST_CASE("initial trace") {
  const UniformGrid g = uniform_line(-2.0, 2.0, 200, Boundary::Periodic);
  ProblemSpec spec = make_problem("advection", {{"speed", 1.0}}, "gauss",
                                  {{"width", 0.5}}, 1);
  SolveOptions opt;
  opt.sup_du_f = 1.0;
  opt.record_all_steps = true;
  const Trajectory traj = solve(spec, g, 0.1, opt);
  const GridFn u0 = initial_state(spec, g);

  // At t = 0 the trace distance vanishes.
  Trajectory at_zero;
  at_zero.times = {0.0};
  at_zero.states = {u0};
  CHECK(initial_trace_check(at_zero, u0, 1.0) == 0.0);

  // After one step it is bounded by sup|du f| dt TV(u0) + O(h).
  const double dt = traj.dt_history.front();
  const double tv0 = total_variation(u0);
  Trajectory first;
  first.times = {0.0, traj.times[1]};
  first.states = {traj.states[0], traj.states[1]};
  const double trace = initial_trace_check(first, u0, 2.0);
  CHECK(trace <= 1.0 * dt * tv0 + 2.0 * g.cell_size()[0]);
  CHECK(trace > 0.0);
}

TEST_CASE("flux-free source trace is bounded by dt ||F|| |B|") {
  const UniformGrid g = uniform_line(-2.0, 2.0, 150, Boundary::Padded);
  ProblemSpec spec =
      make_problem("ode_source", {{"amp", 1.5}, {"width", 0.6}}, "zero", {}, 1);
  SolveOptions opt;
  opt.sup_du_f = 0.0;
  opt.max_dt = 0.01;
  opt.record_all_steps = true;
  const Trajectory traj = solve(spec, g, 0.05, opt);
  const GridFn u0 = initial_state(spec, g);
  const double dt = traj.dt_history.front();
  Trajectory first;
  first.times = {0.0, traj.times[1]};
  first.states = {traj.states[0], traj.states[1]};
  const double r = 1.0;
  CHECK(initial_trace_check(first, u0, r) <= dt * 1.5 * 2.0 * r + 1e-12);
}
