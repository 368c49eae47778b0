#include "blcert/entropy.hpp"

#include <cmath>

#include "blcert/errors.hpp"

namespace blcert {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

std::vector<double> kruzkov_levels(const Trajectory& traj, int count) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const GridFn& s : traj.states) {
    lo = std::min(lo, s.values().minCoeff());
    hi = std::max(hi, s.values().maxCoeff());
  }
  const double pad = 0.05 * std::max(hi - lo, 1e-6);
  lo -= pad;
  hi += pad;
  std::vector<double> ks(count);
  for (int i = 0; i < count; ++i) {
    ks[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  }
  return ks;
}

EntropyReport entropy_residual(const Trajectory& traj, const ProblemSpec& spec,
                               const std::vector<double>& k_values,
                               const KernelSpec* kernel) {
  if (traj.scheme.flux_name != "llf") {
    throw SchemeMismatch("entropy_residual: unknown numerical flux '" +
                         traj.scheme.flux_name + "'");
  }
  if (traj.states.size() != traj.dt_history.size() + 1) {
    throw SchemeMismatch(
        "entropy_residual: trajectory must record every step");
  }
  const UniformGrid& g = traj.front().grid();
  const int dim = g.dim();
  const int samples = traj.scheme.alpha_samples;
  const bool padded = g.boundary() == Boundary::Padded;

  std::unique_ptr<ConvolutionPlan> plan;
  if (kernel) plan = std::make_unique<ConvolutionPlan>(*kernel, g);

  EntropyReport report;
  Eigen::ArrayXd div_H(g.size());
  Eigen::ArrayXd div_Q(g.size());
  Eigen::ArrayXd div_fk(g.size());

  for (std::size_t n = 0; n + 1 < traj.states.size(); ++n) {
    const GridFn& u0 = traj.states[n];
    const GridFn& u1 = traj.states[n + 1];
    const double t = traj.times[n];
    const double dt = traj.dt_history[n];
    GridFn extra(g, 0.0);
    if (plan) extra = plan->apply(t, u0);

    // Post-flux intermediate, shared across the k sweep.
    div_H.setZero();
    for (int d = 0; d < dim; ++d) {
      const double h = g.cell_size()[d];
      const Index nc = g.cells()[d];
      const Index s = g.stride(d);
      for (Index i = 0; i < g.size(); ++i) {
        const Index c = g.coord(i, d);
        Eigen::VectorXd xf = g.center(i);
        xf[d] += 0.5 * h;
        const double a = u0[i];
        const double b = u0.neighbor(i, d, +1);
        const double H = llf_flux(spec.flux, d, t, xf, a, b, samples);
        div_H[i] += H / h;
        if (c + 1 < nc) {
          div_H[i + s] -= H / h;
        } else if (!padded) {
          div_H[i - s * (nc - 1)] -= H / h;
        }
        if (padded && c == 0) {
          Eigen::VectorXd xlo = g.center(i);
          xlo[d] -= 0.5 * h;
          div_H[i] -= llf_flux(spec.flux, d, t, xlo, u0.pad_lo(d), a,
                               samples) / h;
        }
      }
    }

    for (double k : k_values) {
      div_Q.setZero();
      div_fk.setZero();
      for (int d = 0; d < dim; ++d) {
        const double h = g.cell_size()[d];
        const Index nc = g.cells()[d];
        const Index s = g.stride(d);
        for (Index i = 0; i < g.size(); ++i) {
          const Index c = g.coord(i, d);
          Eigen::VectorXd xf = g.center(i);
          xf[d] += 0.5 * h;
          const double a = u0[i];
          const double b = u0.neighbor(i, d, +1);
          const double Q =
              llf_flux(spec.flux, d, t, xf, std::max(a, k), std::max(b, k),
                       samples) -
              llf_flux(spec.flux, d, t, xf, std::min(a, k), std::min(b, k),
                       samples);
          const double fk = spec.flux.value(t, xf, k)[d];
          div_Q[i] += Q / h;
          div_fk[i] += fk / h;
          if (c + 1 < nc) {
            div_Q[i + s] -= Q / h;
            div_fk[i + s] -= fk / h;
          } else if (!padded) {
            div_Q[i - s * (nc - 1)] -= Q / h;
            div_fk[i - s * (nc - 1)] -= fk / h;
          }
          if (padded && c == 0) {
            Eigen::VectorXd xlo = g.center(i);
            xlo[d] -= 0.5 * h;
            const double plo = u0.pad_lo(d);
            div_Q[i] -= (llf_flux(spec.flux, d, t, xlo, std::max(plo, k),
                                  std::max(a, k), samples) -
                         llf_flux(spec.flux, d, t, xlo, std::min(plo, k),
                                  std::min(a, k), samples)) /
                        h;
            div_fk[i] -= spec.flux.value(t, xlo, k)[d] / h;
          }
        }
      }

      double worst = 0.0;
      for (Index i = 0; i < g.size(); ++i) {
        if (padded) {
          bool boundary = false;
          for (int d = 0; d < dim; ++d) {
            const Index c = g.coord(i, d);
            boundary = boundary || c == 0 || c + 1 == g.cells()[d];
          }
          if (boundary) continue;
        }
        const double v = u0[i] - dt * div_H[i];
        const double src =
            spec.source.value(t, g.center(i), v) + extra[i];
        const double r = (std::abs(u1[i] - k) - std::abs(u0[i] - k)) / dt +
                         div_Q[i] + sgn(v - k) * div_fk[i] -
                         sgn(u1[i] - k) * src;
        worst = std::max(worst, r);
      }
      report.rows.push_back({k, t, worst});
      report.max_positive = std::max(report.max_positive, worst);
    }
  }
  return report;
}

double initial_trace_check(const Trajectory& traj, const GridFn& u0,
                           double r) {
  std::size_t idx = 0;
  while (idx < traj.times.size() && traj.times[idx] <= 0.0) ++idx;
  if (idx >= traj.states.size()) idx = traj.states.size() - 1;
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(u0.grid().dim());
  return l1_distance_ball(traj.states[idx], u0, origin, r);
}

}  // namespace blcert
