#include "blcert/solver.hpp"

#include <algorithm>
#include <cmath>

#include "blcert/errors.hpp"

namespace blcert {

std::size_t Trajectory::index_of(double t) const {
  std::size_t best = 0;
  double err = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double e = std::abs(times[i] - t);
    if (e < err) {
      err = e;
      best = i;
    }
  }
  return best;
}

double cfl_dt(const UniformGrid& grid, double sup_du_f, double cfl,
              double sup_du_F) {
  constexpr double eps_floor = 1e-14;
  const double h_min = grid.cell_size().minCoeff();
  const double advective =
      cfl * h_min / (grid.dim() * std::max(sup_du_f, eps_floor));
  const double stiffness = cfl / std::max(sup_du_F, eps_floor);
  return std::min(advective, stiffness);
}

double llf_flux(const FluxField& flux, int axis, double t,
                const Eigen::VectorXd& x_face, double a, double b,
                int alpha_samples) {
  const double fa = flux.value(t, x_face, a)[axis];
  const double fb = flux.value(t, x_face, b)[axis];
  double alpha = 0.0;
  const int n = std::max(alpha_samples, 1);
  for (int j = 0; j < n; ++j) {
    const double s =
        (n == 1) ? a : a + (b - a) * static_cast<double>(j) / (n - 1);
    alpha = std::max(alpha, std::abs(flux.du(t, x_face, s)[axis]));
  }
  return 0.5 * (fa + fb) - 0.5 * alpha * (b - a);
}

namespace {

// Same sampled wave speed the flux uses; tracked for the CFL check.
double face_alpha(const FluxField& flux, int axis, double t,
                  const Eigen::VectorXd& x_face, double a, double b, int n) {
  double alpha = 0.0;
  for (int j = 0; j < n; ++j) {
    const double s =
        (n == 1) ? a : a + (b - a) * static_cast<double>(j) / (n - 1);
    alpha = std::max(alpha, std::abs(flux.du(t, x_face, s)[axis]));
  }
  return alpha;
}

}  // namespace

GridFn step(const GridFn& state, double t, double dt, const ProblemSpec& spec,
            const GridFn* extra_source, const SchemeInfo& scheme) {
  const UniformGrid& g = state.grid();
  if (extra_source && extra_source->grid() != g) {
    throw GridMismatch("step: extra source grid differs");
  }
  const int samples = scheme.alpha_samples;
  Eigen::ArrayXd div_flux = Eigen::ArrayXd::Zero(g.size());
  double cfl_sum = 0.0;

  for (int d = 0; d < g.dim(); ++d) {
    const double h = g.cell_size()[d];
    const Index n = g.cells()[d];
    const Index s = g.stride(d);
    double alpha_max = 0.0;
    for (Index i = 0; i < g.size(); ++i) {
      const Index c = g.coord(i, d);
      // Right face of cell i.
      Eigen::VectorXd xf = g.center(i);
      xf[d] += 0.5 * h;
      const double a = state[i];
      const double b = state.neighbor(i, d, +1);
      const double H = llf_flux(spec.flux, d, t, xf, a, b, samples);
      alpha_max = std::max(alpha_max, face_alpha(spec.flux, d, t, xf, a, b,
                                                 samples));
      div_flux[i] += H / h;
      if (c + 1 < n) {
        div_flux[i + s] -= H / h;
      } else if (g.boundary() == Boundary::Periodic) {
        div_flux[i - s * (n - 1)] -= H / h;
      }
      // Left domain face of a padded grid.
      if (g.boundary() == Boundary::Padded && c == 0) {
        Eigen::VectorXd xlo = g.center(i);
        xlo[d] -= 0.5 * h;
        const double Hlo =
            llf_flux(spec.flux, d, t, xlo, state.pad_lo(d), a, samples);
        div_flux[i] -= Hlo / h;
        alpha_max = std::max(alpha_max, face_alpha(spec.flux, d, t, xlo,
                                                   state.pad_lo(d), a, samples));
      }
    }
    cfl_sum += alpha_max / h;
  }
  if (dt * cfl_sum > 1.0 + 1e-9) {
    throw CflViolation("step: dt * sum(alpha/h) = " +
                       std::to_string(dt * cfl_sum) + " exceeds 1");
  }

  GridFn next(state);
  next.values() = state.values() - dt * div_flux;
  // Explicit Euler source stage on the post-flux state.
  for (Index i = 0; i < g.size(); ++i) {
    double src = spec.source.value(t, g.center(i), next[i]);
    if (extra_source) src += (*extra_source)[i];
    next[i] += dt * src;
  }
  if (!next.all_finite()) throw NonFiniteState("step: non-finite state");
  return next;
}

GridFn initial_state(const ProblemSpec& spec, const UniformGrid& grid) {
  if (spec.dim != grid.dim()) {
    throw DimensionMismatch("initial_state: dimensions differ");
  }
  return sample_on_grid(grid, spec.u0);
}

SamplingBox default_state_box(const ProblemSpec& spec, const UniformGrid& grid,
                              double T) {
  const GridFn u0 = initial_state(spec, grid);
  double lo = u0.values().minCoeff();
  double hi = u0.values().maxCoeff();
  if (grid.boundary() == Boundary::Padded) {
    for (int d = 0; d < grid.dim(); ++d) {
      lo = std::min({lo, u0.pad_lo(d), u0.pad_hi(d)});
      hi = std::max({hi, u0.pad_lo(d), u0.pad_hi(d)});
    }
  }
  const double pad = 0.1 * std::max(hi - lo, 1.0);
  SamplingBox box = box_for_grid(grid, T, lo - pad, hi + pad);
  return box;
}

namespace {

void check_padding(const ProblemSpec& spec, const GridFn& u0, double T,
                   double sup_du_f) {
  const UniformGrid& g = u0.grid();
  const double need = sup_du_f * T;
  const ScalarFn ts = true_source(spec);
  for (int d = 0; d < g.dim(); ++d) {
    const double h = g.cell_size()[d];
    const Index n = g.cells()[d];
    // Length of the leading / trailing run of cells still equal to the
    // pad constant and free of forcing.
    Index lo_run = 0;
    Index hi_run = 0;
    auto quiet = [&](Index flat, double pad_value) {
      if (std::abs(u0[flat] - pad_value) > 1e-12) return false;
      const Eigen::VectorXd x = g.center(flat);
      for (double tau : {0.0, 0.5 * T, T}) {
        if (std::abs(ts(tau, x, pad_value)) > 1e-10) return false;
      }
      return true;
    };
    bool lo_open = true, hi_open = true;
    for (Index k = 0; k < n && (lo_open || hi_open); ++k) {
      if (lo_open) {
        bool ok = true;
        for (Index i = 0; i < g.size() && ok; ++i) {
          if (g.coord(i, d) == k) ok = quiet(i, u0.pad_lo(d));
        }
        if (ok) ++lo_run; else lo_open = false;
      }
      if (hi_open) {
        bool ok = true;
        for (Index i = 0; i < g.size() && ok; ++i) {
          if (g.coord(i, d) == n - 1 - k) ok = quiet(i, u0.pad_hi(d));
        }
        if (ok) ++hi_run; else hi_open = false;
      }
    }
    if (lo_run * h < need || hi_run * h < need) {
      throw InsufficientPadding(
          "solve: padded margin along axis " + std::to_string(d) +
          " is below sup|d_u f| T = " + std::to_string(need));
    }
  }
}

}  // namespace

Trajectory solve(const ProblemSpec& spec, const UniformGrid& grid, double T,
                 const SolveOptions& opt) {
  if (!(T > 0.0)) throw ConfigError("solve: horizon must be positive");
  double sup_du_f = opt.sup_du_f;
  double sup_du_F = opt.sup_du_F;
  if (sup_du_f < 0.0 || sup_du_F < 0.0) {
    const HypothesisReport rep =
        audit_hypotheses(spec, default_state_box(spec, grid, T));
    if (sup_du_f < 0.0) sup_du_f = rep.sup_du_f;
    if (sup_du_F < 0.0) sup_du_F = rep.sup_du_F;
  }

  GridFn u = initial_state(spec, grid);
  if (grid.boundary() == Boundary::Padded) {
    check_padding(spec, u, T, sup_du_f);
  }

  std::vector<double> events = opt.snapshot_times;
  events.push_back(T);
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end(),
                           [](double a, double b) {
                             return std::abs(a - b) < 1e-14;
                           }),
               events.end());

  const double base_dt = std::min(cfl_dt(grid, sup_du_f, opt.cfl, sup_du_F),
                                  opt.max_dt);

  Trajectory traj;
  traj.scheme.cfl = opt.cfl;
  traj.times.push_back(0.0);
  traj.states.push_back(u);

  double t = 0.0;
  std::size_t next_event = 0;
  while (next_event < events.size() && events[next_event] <= 1e-14) {
    ++next_event;
  }
  while (t < T - 1e-14) {
    double dt = base_dt;
    if (next_event < events.size()) {
      dt = std::min(dt, events[next_event] - t);
    }
    u = step(u, t, dt, spec, nullptr, traj.scheme);
    t += dt;
    traj.dt_history.push_back(dt);
    bool record = opt.record_all_steps;
    if (next_event < events.size() &&
        std::abs(t - events[next_event]) < 1e-12) {
      t = events[next_event];
      ++next_event;
      record = true;
    }
    if (record) {
      traj.times.push_back(t);
      traj.states.push_back(u);
    }
  }
  if (std::abs(traj.times.back() - T) > 1e-12) {
    traj.times.push_back(t);
    traj.states.push_back(u);
  }
  return traj;
}

}  // namespace blcert
