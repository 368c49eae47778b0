#include "blcert/nonlocal.hpp"

#include <unsupported/Eigen/FFT>
#include <cmath>
#include <numbers>

#include "blcert/constants.hpp"
#include "blcert/errors.hpp"

namespace blcert {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

KernelSpec gaussian_kernel(int dim, double sigma, double mass) {
  KernelSpec k;
  k.name = "gaussian";
  const double norm =
      mass / std::pow(2.0 * std::numbers::pi * sigma * sigma, 0.5 * dim);
  k.density = [norm, sigma](double, const Eigen::VectorXd& z) {
    return norm * std::exp(-0.5 * z.squaredNorm() / (sigma * sigma));
  };
  k.mass = mass;
  // |K| < 1e-12 max|K| beyond this radius.
  k.support_radius = sigma * std::sqrt(2.0 * std::log(1e12));
  return k;
}

KernelSpec exponential_kernel(int dim, double alpha, double mass) {
  KernelSpec k;
  k.name = "exponential";
  // int_{R^n} e^{-alpha ||z||} dz = n omega_n (n-1)! / alpha^n.
  const double integral =
      dim * ball_volume(dim) * factorial(dim - 1) / std::pow(alpha, dim);
  const double norm = mass / integral;
  k.density = [norm, alpha](double, const Eigen::VectorXd& z) {
    return norm * std::exp(-alpha * z.norm());
  };
  k.mass = mass;
  k.support_radius = std::log(1e12) / alpha;
  return k;
}

KernelSpec top_hat_kernel(int dim, double radius, double mass) {
  KernelSpec k;
  k.name = "top_hat";
  const double norm = mass / (ball_volume(dim) * std::pow(radius, dim));
  k.density = [norm, radius](double, const Eigen::VectorXd& z) {
    return z.norm() <= radius ? norm : 0.0;
  };
  k.mass = mass;
  k.support_radius = radius;
  return k;
}

ConvolutionPlan::ConvolutionPlan(KernelSpec kernel, const UniformGrid& grid)
    : kernel_(std::move(kernel)), grid_(grid) {
  if (!(kernel_.support_radius > 0.0)) {
    throw ConfigError("convolution: kernel support radius must be positive");
  }
  if (!kernel_.time_dependent) frozen_ = sample(0.0);
}

ConvolutionPlan::Stencil ConvolutionPlan::sample(double t) const {
  Stencil st;
  const int dim = grid_.dim();
  std::vector<Index> reach(dim);
  for (int d = 0; d < dim; ++d) {
    reach[d] = static_cast<Index>(
        std::ceil(kernel_.support_radius / grid_.cell_size()[d]));
  }
  std::vector<Index> off(dim, 0);
  Eigen::VectorXd z(dim);
  double abs_sum = 0.0;
  const std::function<void(int)> enumerate = [&](int d) {
    if (d == dim) {
      for (int e = 0; e < dim; ++e) z[e] = off[e] * grid_.cell_size()[e];
      if (z.norm() > kernel_.support_radius) return;
      const double w = kernel_.density(t, z) * grid_.volume();
      if (w != 0.0) {
        st.offsets.push_back(off);
        st.weights.push_back(w);
        abs_sum += std::abs(w);
      }
      return;
    }
    for (off[d] = -reach[d]; off[d] <= reach[d]; ++off[d]) enumerate(d + 1);
    off[d] = 0;
  };
  enumerate(0);
  if (kernel_.renormalize && abs_sum > 0.0 && kernel_.mass > 0.0) {
    const double scale = kernel_.mass / abs_sum;
    for (double& w : st.weights) w *= scale;
  }
  return st;
}

double ConvolutionPlan::discrete_mass(double t) const {
  const Stencil& st = kernel_.time_dependent ? sample(t) : frozen_;
  double acc = 0.0;
  for (double w : st.weights) acc += std::abs(w);
  return acc;
}

bool ConvolutionPlan::uses_fft() const {
  return grid_.dim() == 1 && grid_.boundary() == Boundary::Periodic &&
         grid_.size() >= fft_threshold;
}

GridFn ConvolutionPlan::apply(double t, const GridFn& u) const {
  return uses_fft() ? apply_fft(t, u) : apply_direct(t, u);
}

GridFn ConvolutionPlan::apply_direct(double t, const GridFn& u) const {
  if (u.grid() != grid_) throw GridMismatch("convolve: grid differs");
  const Stencil st = kernel_.time_dependent ? sample(t) : frozen_;
  GridFn out(grid_, 0.0);
  for (Index i = 0; i < grid_.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < st.offsets.size(); ++j) {
      acc += st.weights[j] * value_at_offset(u, i, st.offsets[j]);
    }
    out[i] = acc;
  }
  return out;
}

GridFn ConvolutionPlan::apply_fft(double t, const GridFn& u) const {
  if (u.grid() != grid_) throw GridMismatch("convolve: grid differs");
  if (grid_.dim() != 1 || grid_.boundary() != Boundary::Periodic) {
    throw ConfigError("convolve: FFT path needs a 1-D periodic grid");
  }
  const Stencil st = kernel_.time_dependent ? sample(t) : frozen_;
  const Index n = grid_.size();
  // Circular layout; offsets beyond one period alias onto the wrap.
  std::vector<double> circ(n, 0.0);
  for (std::size_t j = 0; j < st.offsets.size(); ++j) {
    const Index idx = ((st.offsets[j][0] % n) + n) % n;
    circ[idx] += st.weights[j];
  }
  std::vector<double> uin(u.values().data(), u.values().data() + n);
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> fu, fk;
  fft.fwd(fu, uin);
  fft.fwd(fk, circ);
  for (Index i = 0; i < n; ++i) fu[i] *= fk[i];
  std::vector<double> conv;
  fft.inv(conv, fu);
  GridFn out(grid_, 0.0);
  for (Index i = 0; i < n; ++i) out[i] = conv[i];
  return out;
}

GridFn convolve(const KernelSpec& kernel, double t, const GridFn& u) {
  return ConvolutionPlan(kernel, u.grid()).apply(t, u);
}

double kernel_l1_distance(const KernelSpec& a, const KernelSpec& b,
                          const UniformGrid& grid,
                          const std::vector<double>& times) {
  KernelSpec diff;
  diff.name = "difference";
  const auto da = a.density;
  const auto db = b.density;
  diff.density = [da, db](double t, const Eigen::VectorXd& z) {
    return da(t, z) - db(t, z);
  };
  diff.support_radius = std::max(a.support_radius, b.support_radius);
  diff.renormalize = false;
  diff.time_dependent = a.time_dependent || b.time_dependent;
  // The renormalization of the operands is part of their definition, so
  // fold it into the difference samples.
  ConvolutionPlan pa(a, grid), pb(b, grid);
  double sup = 0.0;
  for (double t : times.empty() ? std::vector<double>{0.0} : times) {
    const GridFn delta = [&] {
      GridFn probe(grid, 0.0);
      // Difference of the sampled kernels as functions: compare their
      // action on a discrete delta, which reproduces the stencils.
      probe[0] = 1.0 / grid.volume();
      GridFn ka = pa.apply_direct(t, probe);
      ka.values() -= pb.apply_direct(t, probe).values();
      return ka;
    }();
    sup = std::max(sup, l1_norm(delta));
  }
  return sup;
}

double contraction_horizon(double kappa, double k, double target) {
  if (!(target > 0.0 && target < 1.0)) {
    throw ConfigError("contraction_horizon: target in (0,1)");
  }
  if (k <= 1e-300) return std::numeric_limits<double>::infinity();
  if (kappa < 1e-12) return target / k;
  return std::log1p(kappa * target / k) / kappa;
}

namespace {

std::vector<double> slab_time_lattice(double t0, double t1, double base_dt,
                                      const std::vector<double>& events) {
  std::vector<double> times{t0};
  double t = t0;
  std::size_t next = 0;
  while (next < events.size() && events[next] <= t0 + 1e-14) ++next;
  while (t < t1 - 1e-14) {
    double dt = std::min(base_dt, t1 - t);
    if (next < events.size() && events[next] < t1 - 1e-14) {
      dt = std::min(dt, events[next] - t);
    }
    t += dt;
    if (next < events.size() && std::abs(t - events[next]) < 1e-12) {
      t = events[next];
      ++next;
    }
    times.push_back(t);
  }
  times.back() = t1;
  return times;
}

}  // namespace

Trajectory picard_solve(const ProblemSpec& spec, const KernelSpec& kernel,
                        const UniformGrid& grid, double T,
                        const PicardOptions& opt, PicardStats* stats) {
  double sup_du_f = opt.sup_du_f;
  double sup_du_F = opt.sup_du_F;
  double sup_grad_du_f = opt.sup_grad_du_f;
  if (sup_du_f < 0.0 || sup_du_F < 0.0 || sup_grad_du_f < 0.0) {
    const HypothesisReport rep =
        audit_hypotheses(spec, default_state_box(spec, grid, T));
    if (sup_du_f < 0.0) sup_du_f = rep.sup_du_f;
    if (sup_du_F < 0.0) sup_du_F = rep.sup_du_F;
    if (sup_grad_du_f < 0.0) sup_grad_du_f = rep.sup_grad_du_f;
  }

  const ConvolutionPlan plan(kernel, grid);
  const double k = kernel.time_dependent
                       ? std::max(plan.discrete_mass(0.0),
                                  std::max(plan.discrete_mass(0.5 * T),
                                           plan.discrete_mass(T)))
                       : plan.discrete_mass(0.0);
  const double kap = kappa(spec.dim, sup_grad_du_f, sup_du_F, 0.0);
  const double slab =
      std::min(contraction_horizon(kap, k, opt.contraction_target), T);

  GridFn u0 = initial_state(spec, grid);
  double tol = opt.tol;
  if (tol <= 0.0) tol = std::max(1e-8 * l1_norm(u0), 1e-12);

  const double base_dt =
      std::min(cfl_dt(grid, sup_du_f, opt.cfl, sup_du_F + k), opt.max_dt);

  std::vector<double> events = opt.snapshot_times;
  events.push_back(T);
  std::sort(events.begin(), events.end());

  const int n_slabs = std::max(1, static_cast<int>(std::ceil(T / slab - 1e-12)));
  if (stats) {
    stats->slabs = n_slabs;
    stats->slab_horizon = slab;
    stats->kappa = kap;
    stats->kernel_mass = k;
    stats->iterate_distances.clear();
    stats->max_ratio = 0.0;
  }

  Trajectory traj;
  traj.scheme.cfl = opt.cfl;
  traj.times.push_back(0.0);
  traj.states.push_back(u0);

  GridFn u_start = u0;
  for (int sl = 0; sl < n_slabs; ++sl) {
    const double t0 = T * static_cast<double>(sl) / n_slabs;
    const double t1 = T * static_cast<double>(sl + 1) / n_slabs;
    const std::vector<double> times = slab_time_lattice(t0, t1, base_dt, events);
    const std::size_t m = times.size();

    // Warm start: run with the source frozen at the slab entry state.
    std::vector<GridFn> w(m, GridFn(grid));
    {
      const GridFn frozen = plan.apply(t0, u_start);
      w[0] = u_start;
      for (std::size_t j = 0; j + 1 < m; ++j) {
        w[j + 1] = step(w[j], times[j], times[j + 1] - times[j], spec, &frozen,
                        traj.scheme);
      }
    }

    std::vector<GridFn> u(m, GridFn(grid));
    std::vector<double> distances;
    int stall = 0;
    for (int it = 0; it < opt.max_iterates; ++it) {
      u[0] = u_start;
      for (std::size_t j = 0; j + 1 < m; ++j) {
        const GridFn extra = plan.apply(times[j], w[j]);
        u[j + 1] = step(u[j], times[j], times[j + 1] - times[j], spec, &extra,
                        traj.scheme);
      }
      double d = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        d = std::max(d, l1_distance(u[j], w[j]));
      }
      if (!distances.empty() && distances.back() > tol) {
        const double ratio = d / distances.back();
        if (stats) stats->max_ratio = std::max(stats->max_ratio, ratio);
        stall = (ratio >= 0.9) ? stall + 1 : 0;
        if (stall >= 3) {
          throw NoContraction("picard_solve: iterates are not contracting");
        }
      }
      distances.push_back(d);
      w = u;
      if (d < tol) break;
    }
    if (distances.empty() || distances.back() >= tol) {
      throw NoContraction("picard_solve: iterate budget exhausted");
    }
    if (stats) stats->iterate_distances.push_back(distances);

    for (std::size_t j = 1; j < m; ++j) {
      bool record = opt.record_all_steps;
      for (double e : events) {
        if (std::abs(times[j] - e) < 1e-12) record = true;
      }
      if (j + 1 == m && sl + 1 == n_slabs) record = true;
      if (record) {
        traj.times.push_back(times[j]);
        traj.states.push_back(w[j]);
      }
    }
    u_start = w.back();
  }
  if (opt.record_all_steps) {
    // Every step is recorded, so the step sizes are the time gaps.
    for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
      traj.dt_history.push_back(traj.times[i + 1] - traj.times[i]);
    }
  }
  return traj;
}

}  // namespace blcert
