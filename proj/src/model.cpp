#include "blcert/model.hpp"

#include <cmath>

#include "blcert/errors.hpp"

namespace blcert {

namespace {

double fd_step(double a) { return 1e-5 * (1.0 + std::abs(a)); }

Eigen::VectorXd shift_coord(const Eigen::VectorXd& x, int axis, double dx) {
  Eigen::VectorXd y = x;
  y[axis] += dx;
  return y;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NonFiniteSample(std::string(what));
}

}  // namespace

FluxField make_flux(int dim, VectorFn f, FluxParts parts) {
  FluxField out;
  out.dim = dim;
  out.value = f;
  out.du = parts.du ? parts.du
                    : VectorFn([f](double t, const Eigen::VectorXd& x,
                                   double u) -> Eigen::VectorXd {
                        const double h = fd_step(u);
                        return (f(t, x, u + h) - f(t, x, u - h)) / (2.0 * h);
                      });
  const VectorFn du = out.du;
  out.grad_du =
      parts.grad_du
          ? parts.grad_du
          : MatrixFn([du, dim](double t, const Eigen::VectorXd& x,
                               double u) -> Eigen::MatrixXd {
              Eigen::MatrixXd J(dim, dim);
              for (int j = 0; j < dim; ++j) {
                const double h = fd_step(x[j]);
                J.col(j) = (du(t, shift_coord(x, j, h), u) -
                            du(t, shift_coord(x, j, -h), u)) /
                           (2.0 * h);
              }
              return J;
            });
  out.div = parts.div ? parts.div
                      : ScalarFn([f, dim](double t, const Eigen::VectorXd& x,
                                          double u) -> double {
                          double acc = 0.0;
                          for (int j = 0; j < dim; ++j) {
                            const double h = fd_step(x[j]);
                            acc += (f(t, shift_coord(x, j, h), u)[j] -
                                    f(t, shift_coord(x, j, -h), u)[j]) /
                                   (2.0 * h);
                          }
                          return acc;
                        });
  const ScalarFn div = out.div;
  out.grad_div =
      parts.grad_div
          ? parts.grad_div
          : VectorFn([div, dim](double t, const Eigen::VectorXd& x,
                                double u) -> Eigen::VectorXd {
              Eigen::VectorXd g(dim);
              for (int j = 0; j < dim; ++j) {
                const double h = fd_step(x[j]);
                g[j] = (div(t, shift_coord(x, j, h), u) -
                        div(t, shift_coord(x, j, -h), u)) /
                       (2.0 * h);
              }
              return g;
            });
  return out;
}

FluxField zero_flux(int dim) {
  return make_flux(
      dim,
      [dim](double, const Eigen::VectorXd&, double) {
        return Eigen::VectorXd::Zero(dim).eval();
      },
      FluxParts{
          [dim](double, const Eigen::VectorXd&, double) {
            return Eigen::VectorXd::Zero(dim).eval();
          },
          [dim](double, const Eigen::VectorXd&, double) {
            return Eigen::MatrixXd::Zero(dim, dim).eval();
          },
          [](double, const Eigen::VectorXd&, double) { return 0.0; },
          [dim](double, const Eigen::VectorXd&, double) {
            return Eigen::VectorXd::Zero(dim).eval();
          },
      });
}

SourceField make_source(int dim, ScalarFn F, SourceParts parts) {
  SourceField out;
  out.value = F;
  out.du = parts.du ? parts.du
                    : ScalarFn([F](double t, const Eigen::VectorXd& x,
                                   double u) -> double {
                        const double h = fd_step(u);
                        return (F(t, x, u + h) - F(t, x, u - h)) / (2.0 * h);
                      });
  out.grad = parts.grad
                 ? parts.grad
                 : VectorFn([F, dim](double t, const Eigen::VectorXd& x,
                                     double u) -> Eigen::VectorXd {
                     Eigen::VectorXd g(dim);
                     for (int j = 0; j < dim; ++j) {
                       const double h = fd_step(x[j]);
                       g[j] = (F(t, shift_coord(x, j, h), u) -
                               F(t, shift_coord(x, j, -h), u)) /
                              (2.0 * h);
                     }
                     return g;
                   });
  return out;
}

SourceField zero_source(int dim) {
  return make_source(
      dim, [](double, const Eigen::VectorXd&, double) { return 0.0; },
      SourceParts{
          [](double, const Eigen::VectorXd&, double) { return 0.0; },
          [dim](double, const Eigen::VectorXd&, double) {
            return Eigen::VectorXd::Zero(dim).eval();
          },
      });
}

ScalarFn true_source(const ProblemSpec& spec) {
  const ScalarFn F = spec.source.value;
  const ScalarFn div = spec.flux.div;
  return [F, div](double t, const Eigen::VectorXd& x, double u) {
    return F(t, x, u) - div(t, x, u);
  };
}

SamplingBox box_for_grid(const UniformGrid& grid, double t1, double u_min,
                         double u_max) {
  SamplingBox box;
  box.t0 = 0.0;
  box.t1 = t1;
  box.x_lo = grid.origin();
  box.x_hi.resize(grid.dim());
  for (int d = 0; d < grid.dim(); ++d) {
    box.x_hi[d] = grid.origin()[d] + grid.domain_length(d);
  }
  box.u_min = u_min;
  box.u_max = u_max;
  return box;
}

namespace {

struct Lattice {
  // Inclusive sample coordinates per axis for sup-norms and midpoint
  // coordinates per axis for integrals.
  std::vector<double> t_sup, u_sup;
  std::vector<double> t_mid;
  std::vector<std::vector<double>> x_sup;  // per axis
  std::vector<std::vector<double>> x_mid;
  double dt_mid = 0.0;
  double dx_cell = 0.0;  // product of per-axis midpoint spacings
};

std::vector<double> inclusive(double a, double b, int n) {
  std::vector<double> out;
  if (n <= 1 || a == b) {
    out.push_back(0.5 * (a + b));
    return out;
  }
  for (int i = 0; i < n; ++i) {
    out.push_back(a + (b - a) * static_cast<double>(i) / (n - 1));
  }
  return out;
}

std::vector<double> midpoints(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(a + (b - a) * (i + 0.5) / n);
  }
  return out;
}

Lattice build_lattice(const SamplingBox& box, int dim) {
  Lattice lat;
  lat.t_sup = inclusive(box.t0, box.t1, box.nt);
  lat.u_sup = inclusive(box.u_min, box.u_max, box.nu);
  lat.t_mid = midpoints(box.t0, box.t1, box.nt);
  lat.dt_mid = (box.t1 - box.t0) / box.nt;
  lat.dx_cell = 1.0;
  for (int d = 0; d < dim; ++d) {
    lat.x_sup.push_back(inclusive(box.x_lo[d], box.x_hi[d], box.nx));
    lat.x_mid.push_back(midpoints(box.x_lo[d], box.x_hi[d], box.nx));
    lat.dx_cell *= (box.x_hi[d] - box.x_lo[d]) / box.nx;
  }
  return lat;
}

// Applies fn to every point of the per-axis coordinate family.
void for_each_point(const std::vector<std::vector<double>>& axes,
                    const std::function<void(const Eigen::VectorXd&)>& fn) {
  const int dim = static_cast<int>(axes.size());
  Eigen::VectorXd x(dim);
  std::vector<std::size_t> idx(dim, 0);
  while (true) {
    for (int d = 0; d < dim; ++d) x[d] = axes[d][idx[d]];
    fn(x);
    int d = dim - 1;
    while (d >= 0 && ++idx[d] == axes[d].size()) idx[d--] = 0;
    if (d < 0) break;
  }
}

}  // namespace

HypothesisReport audit_hypotheses(const ProblemSpec& spec,
                                  const SamplingBox& box) {
  if (box.x_lo.size() != spec.dim || box.x_hi.size() != spec.dim) {
    throw DimensionMismatch("audit_hypotheses: box dimension");
  }
  if (box.nx < 2 || box.nt < 2 || box.nu < 2) {
    throw ConfigError("audit_hypotheses: need >= 2 samples per axis");
  }
  const Lattice lat = build_lattice(box, spec.dim);
  HypothesisReport rep;
  rep.box = box;

  for (double t : lat.t_sup) {
    for_each_point(lat.x_sup, [&](const Eigen::VectorXd& x) {
      for (double u : lat.u_sup) {
        const double a = spec.flux.du(t, x, u).norm();
        const double b = spec.flux.grad_du(t, x, u).norm();
        const double c = std::abs(spec.source.du(t, x, u));
        require_finite(a, "audit: d_u f");
        require_finite(b, "audit: grad d_u f");
        require_finite(c, "audit: d_u F");
        rep.sup_du_f = std::max(rep.sup_du_f, a);
        rep.sup_grad_du_f = std::max(rep.sup_grad_du_f, b);
        rep.sup_du_F = std::max(rep.sup_du_F, c);
      }
    });
  }

  const auto g = grad_true_source_integrand(spec, box);
  const auto s = true_source_integrand(spec, box);
  for (double t : lat.t_mid) {
    rep.int_grad_true_source += g(t) * lat.dt_mid;
    rep.int_true_source += s(t) * lat.dt_mid;
  }
  return rep;
}

std::function<double(double)> grad_true_source_integrand(
    const ProblemSpec& spec, const SamplingBox& box) {
  const Lattice lat = build_lattice(box, spec.dim);
  const FluxField flux = spec.flux;
  const SourceField source = spec.source;
  return [lat, flux, source](double t) {
    double acc = 0.0;
    for_each_point(lat.x_mid, [&](const Eigen::VectorXd& x) {
      double sup = 0.0;
      for (double u : lat.u_sup) {
        const double v =
            (source.grad(t, x, u) - flux.grad_div(t, x, u)).norm();
        require_finite(v, "integrand: grad(F - div f)");
        sup = std::max(sup, v);
      }
      acc += sup;
    });
    return acc * lat.dx_cell;
  };
}

std::function<double(double)> true_source_integrand(const ProblemSpec& spec,
                                                    const SamplingBox& box) {
  const Lattice lat = build_lattice(box, spec.dim);
  const ScalarFn ts = true_source(spec);
  return [lat, ts](double t) {
    double acc = 0.0;
    for_each_point(lat.x_mid, [&](const Eigen::VectorXd& x) {
      double sup = 0.0;
      for (double u : lat.u_sup) {
        const double v = std::abs(ts(t, x, u));
        require_finite(v, "integrand: F - div f");
        sup = std::max(sup, v);
      }
      acc += sup;
    });
    return acc * lat.dx_cell;
  };
}

DifferenceAudit difference_spec(const ProblemSpec& a, const ProblemSpec& b,
                                const SamplingBox& box,
                                const Eigen::VectorXd& x0, double R,
                                double M) {
  if (a.dim != b.dim) throw DimensionMismatch("difference_spec: dimensions");
  const Lattice lat = build_lattice(box, a.dim);

  DifferenceAudit out;
  for (double t : lat.t_sup) {
    for_each_point(lat.x_sup, [&](const Eigen::VectorXd& x) {
      for (double u : lat.u_sup) {
        const double v = (a.flux.du(t, x, u) - b.flux.du(t, x, u)).norm();
        const double w = std::abs(a.source.du(t, x, u) - b.source.du(t, x, u));
        require_finite(v, "difference: d_u (f-g)");
        require_finite(w, "difference: d_u (F-G)");
        out.sup_du_fg = std::max(out.sup_du_fg, v);
        out.sup_du_FG = std::max(out.sup_du_FG, w);
      }
    });
  }

  const ScalarFn ts_a = true_source(a);
  const ScalarFn ts_b = true_source(b);
  auto cone = [lat, ts_a, ts_b, x0, R, M](double t, double T) {
    const double radius = R + M * (T - t);
    double acc = 0.0;
    for_each_point(lat.x_mid, [&](const Eigen::VectorXd& x) {
      if (!std::isinf(radius) && (x - x0).norm() > radius) return;
      double sup = 0.0;
      for (double u : lat.u_sup) {
        const double v = std::abs(ts_a(t, x, u) - ts_b(t, x, u));
        require_finite(v, "difference: (F-G) - div(f-g)");
        sup = std::max(sup, v);
      }
      acc += sup;
    });
    return acc * lat.dx_cell;
  };
  out.cone_integrand = cone;
  out.cone_integral = [cone, lat](double T) {
    // Midpoint rule on the same nt subdivision, truncated to [t0, T].
    const double t0 = lat.t_mid.empty() ? 0.0 : lat.t_mid.front() - 0.5 * lat.dt_mid;
    const int steps = std::max(1, static_cast<int>(lat.t_mid.size()));
    const double dt = (T - t0) / steps;
    double acc = 0.0;
    for (int i = 0; i < steps; ++i) acc += cone(t0 + (i + 0.5) * dt, T) * dt;
    return acc;
  };
  return out;
}

}  // namespace blcert
