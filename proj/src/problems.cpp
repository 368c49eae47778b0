#include "blcert/problems.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "blcert/errors.hpp"

namespace blcert {

namespace {

// Quintic smoothstep: 0 below 0, 1 above 1, C^2 at both ends.
double sstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
double sstep_d1(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return t * t * (30.0 + t * (-60.0 + 30.0 * t));
}
double sstep_d2(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return t * (60.0 + t * (-180.0 + 120.0 * t));
}

double get(const ParamMap& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

}  // namespace

double SmoothWindow::value(double x) const {
  return sstep((x - lo) / margin) * sstep((hi - x) / margin);
}

double SmoothWindow::d1(double x) const {
  const double a = (x - lo) / margin, b = (hi - x) / margin;
  return (sstep_d1(a) * sstep(b) - sstep(a) * sstep_d1(b)) / margin;
}

double SmoothWindow::d2(double x) const {
  const double a = (x - lo) / margin, b = (hi - x) / margin;
  return (sstep_d2(a) * sstep(b) - 2.0 * sstep_d1(a) * sstep_d1(b) +
          sstep(a) * sstep_d2(b)) /
         (margin * margin);
}

std::function<double(const Eigen::VectorXd&)> make_datum(
    const std::string& type, const ParamMap& params, int dim) {
  const double center = get(params, "center", 0.0);
  const double width = get(params, "width", 1.0);
  const double height = get(params, "height", 1.0);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(dim, center);
  if (type == "zero") {
    return [](const Eigen::VectorXd&) { return 0.0; };
  }
  if (type == "constant") {
    return [height](const Eigen::VectorXd&) { return height; };
  }
  if (type == "box") {
    return [c, width, height](const Eigen::VectorXd& x) {
      return ((x - c).lpNorm<Eigen::Infinity>() <= 0.5 * width) ? height : 0.0;
    };
  }
  if (type == "hat") {
    return [c, width, height](const Eigen::VectorXd& x) {
      return height * std::max(0.0, 1.0 - (x - c).norm() / width);
    };
  }
  if (type == "gauss") {
    return [c, width, height](const Eigen::VectorXd& x) {
      const double r = (x - c).norm() / width;
      return height * std::exp(-r * r);
    };
  }
  if (type == "bump") {
    // Compactly supported C^2 bump of the given half-width.
    return [c, width, height](const Eigen::VectorXd& x) {
      const double r = (x - c).norm() / width;
      return height * sstep(2.0 * (1.0 - r));
    };
  }
  if (type == "riemann") {
    const double left = get(params, "left", 1.0);
    const double right = get(params, "right", 0.0);
    return [center, left, right](const Eigen::VectorXd& x) {
      return x[0] < center ? left : right;
    };
  }
  if (type == "sine") {
    const double freq = get(params, "freq", 1.0);
    return [height, freq](const Eigen::VectorXd& x) {
      return height * std::sin(freq * x[0]);
    };
  }
  throw ConfigError("unknown datum type '" + type + "'");
}

namespace {

// Flux with identical components q(u) on every axis.
FluxField isotropic_flux(int dim, std::function<double(double)> q,
                         std::function<double(double)> dq) {
  FluxParts parts;
  parts.du = [dim, dq](double, const Eigen::VectorXd&, double u) {
    return Eigen::VectorXd::Constant(dim, dq(u)).eval();
  };
  parts.grad_du = [dim](double, const Eigen::VectorXd&, double) {
    return Eigen::MatrixXd::Zero(dim, dim).eval();
  };
  parts.div = [](double, const Eigen::VectorXd&, double) { return 0.0; };
  parts.grad_div = [dim](double, const Eigen::VectorXd&, double) {
    return Eigen::VectorXd::Zero(dim).eval();
  };
  return make_flux(
      dim,
      [dim, q](double, const Eigen::VectorXd&, double u) {
        return Eigen::VectorXd::Constant(dim, q(u)).eval();
      },
      parts);
}

ProblemSpec burgers_problem(int dim, double shift) {
  ProblemSpec spec;
  spec.dim = dim;
  spec.flux = isotropic_flux(
      dim, [shift](double u) { return 0.5 * u * u + shift * u; },
      [shift](double u) { return u + shift; });
  spec.source = zero_source(dim);
  return spec;
}

ProblemSpec advection_problem(int dim, double speed) {
  ProblemSpec spec;
  spec.dim = dim;
  spec.flux = isotropic_flux(dim, [speed](double u) { return speed * u; },
                             [speed](double) { return speed; });
  spec.source = zero_source(dim);
  return spec;
}

// f(x, u) = amp W(x) cos(x) on axis 0, independent of u: the solution
// is driven purely by -div f.
ProblemSpec cosx_problem(int dim, double amp, SmoothWindow win) {
  if (dim != 1) throw ConfigError("cosx_flux: 1-D only");
  ProblemSpec spec;
  spec.dim = 1;
  FluxParts parts;
  parts.du = [](double, const Eigen::VectorXd&, double) {
    return Eigen::VectorXd::Zero(1).eval();
  };
  parts.grad_du = [](double, const Eigen::VectorXd&, double) {
    return Eigen::MatrixXd::Zero(1, 1).eval();
  };
  parts.div = [amp, win](double, const Eigen::VectorXd& x, double) {
    return amp * (win.d1(x[0]) * std::cos(x[0]) - win.value(x[0]) *
                  std::sin(x[0]));
  };
  parts.grad_div = [amp, win](double, const Eigen::VectorXd& x, double) {
    Eigen::VectorXd g(1);
    g[0] = amp * (win.d2(x[0]) * std::cos(x[0]) -
                  2.0 * win.d1(x[0]) * std::sin(x[0]) -
                  win.value(x[0]) * std::cos(x[0]));
    return g;
  };
  spec.flux = make_flux(
      1,
      [amp, win](double, const Eigen::VectorXd& x, double) {
        Eigen::VectorXd f(1);
        f[0] = amp * win.value(x[0]) * std::cos(x[0]);
        return f;
      },
      parts);
  spec.source = zero_source(1);
  return spec;
}

ProblemSpec ode_source_problem(int dim, double amp, double center,
                               double width) {
  ProblemSpec spec;
  spec.dim = dim;
  spec.flux = zero_flux(dim);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(dim, center);
  SourceParts parts;
  parts.du = [](double, const Eigen::VectorXd&, double) { return 0.0; };
  parts.grad = [amp, c, width](double, const Eigen::VectorXd& x, double) {
    const Eigen::VectorXd d = x - c;
    const double v = amp * std::exp(-d.squaredNorm() / (width * width));
    return (-2.0 / (width * width) * v * d).eval();
  };
  spec.source = make_source(
      dim,
      [amp, c, width](double, const Eigen::VectorXd& x, double) {
        return amp * std::exp(-(x - c).squaredNorm() / (width * width));
      },
      parts);
  return spec;
}

// Windowed Burgers flux with linear relaxation; pairs with a
// convolution kernel for the nonlocal runs.
ProblemSpec radiating_problem(int dim, double amp, double decay,
                              SmoothWindow win) {
  if (dim != 1) throw ConfigError("radiating_gas: 1-D only");
  ProblemSpec spec;
  spec.dim = 1;
  FluxParts parts;
  parts.du = [amp, win](double, const Eigen::VectorXd& x, double u) {
    return Eigen::VectorXd::Constant(1, amp * win.value(x[0]) * u).eval();
  };
  parts.grad_du = [amp, win](double, const Eigen::VectorXd& x, double u) {
    return Eigen::MatrixXd::Constant(1, 1, amp * win.d1(x[0]) * u).eval();
  };
  parts.div = [amp, win](double, const Eigen::VectorXd& x, double u) {
    return 0.5 * amp * win.d1(x[0]) * u * u;
  };
  parts.grad_div = [amp, win](double, const Eigen::VectorXd& x, double u) {
    return Eigen::VectorXd::Constant(1, 0.5 * amp * win.d2(x[0]) * u * u)
        .eval();
  };
  spec.flux = make_flux(
      1,
      [amp, win](double, const Eigen::VectorXd& x, double u) {
        return Eigen::VectorXd::Constant(1, 0.5 * amp * win.value(x[0]) * u * u)
            .eval();
      },
      parts);
  SourceParts sparts;
  sparts.du = [decay](double, const Eigen::VectorXd&, double) {
    return -decay;
  };
  sparts.grad = [](double, const Eigen::VectorXd&, double) {
    return Eigen::VectorXd::Zero(1).eval();
  };
  spec.source = make_source(
      1,
      [decay](double, const Eigen::VectorXd&, double u) { return -decay * u; },
      sparts);
  return spec;
}

}  // namespace

ProblemSpec make_problem(const std::string& id, const ParamMap& params,
                         const std::string& datum_type,
                         const ParamMap& datum_params, int dim) {
  ProblemSpec spec;
  if (id == "burgers") {
    spec = burgers_problem(dim, 0.0);
  } else if (id == "shifted_burgers") {
    spec = burgers_problem(dim, get(params, "epsilon", 0.05));
  } else if (id == "advection") {
    spec = advection_problem(dim, get(params, "speed", 1.0));
  } else if (id == "cosx_flux") {
    spec = cosx_problem(dim, get(params, "amp", 1.0),
                        SmoothWindow{get(params, "win_lo", -8.0),
                                     get(params, "win_hi", 8.0),
                                     get(params, "win_margin", 2.0)});
  } else if (id == "ode_source") {
    spec = ode_source_problem(dim, get(params, "amp", 1.0),
                              get(params, "center", 0.0),
                              get(params, "width", 1.0));
  } else if (id == "radiating_gas") {
    spec = radiating_problem(dim, get(params, "amp", 1.0),
                             get(params, "decay", 1.0),
                             SmoothWindow{get(params, "win_lo", -2.0),
                                          get(params, "win_hi", 2.0),
                                          get(params, "win_margin", 1.0)});
  } else {
    throw ConfigError("unknown problem id '" + id + "'");
  }
  spec.name = id;
  spec.u0 = make_datum(datum_type, datum_params, dim);
  return spec;
}

KernelSpec make_kernel(const std::string& type, const ParamMap& params,
                       int dim, const std::string& file) {
  const double mass = get(params, "mass", 1.0);
  if (type == "gaussian") {
    return gaussian_kernel(dim, get(params, "sigma", 0.5), mass);
  }
  if (type == "exponential") {
    return exponential_kernel(dim, get(params, "alpha", 2.0), mass);
  }
  if (type == "top_hat") {
    return top_hat_kernel(dim, get(params, "radius", 0.5), mass);
  }
  if (type == "csv") {
    if (file.empty()) throw ConfigError("csv kernel needs file = <path>");
    return kernel_from_csv(file, dim);
  }
  throw ConfigError("unknown kernel type '" + type + "'");
}

KernelSpec kernel_from_csv(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read kernel file '" + path + "'");
  std::vector<Eigen::VectorXd> points;
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || std::isalpha(line[0])) continue;
    std::istringstream row(line);
    std::string item;
    std::vector<double> fields;
    while (std::getline(row, item, ',')) fields.push_back(std::stod(item));
    if (static_cast<int>(fields.size()) != dim + 1) {
      throw ConfigError("kernel csv: expected " + std::to_string(dim + 1) +
                        " columns");
    }
    points.push_back(
        Eigen::Map<Eigen::VectorXd>(fields.data(), dim).eval());
    values.push_back(fields[dim]);
  }
  if (points.size() < 2) throw ConfigError("kernel csv: too few rows");

  // Lattice spacing from the closest pair of distinct points; the mass
  // is the table's Riemann L1 sum.
  double spacing = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double d = (points[i] - points[i - 1]).norm();
    if (d > 0.0) spacing = std::min(spacing, d);
  }
  double radius = 0.0;
  double l1 = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    radius = std::max(radius, points[i].norm());
    l1 += std::abs(values[i]) * std::pow(spacing, dim);
  }

  KernelSpec k;
  k.name = "csv";
  k.density = [points, values,
               spacing](double, const Eigen::VectorXd& z) -> double {
    double best = std::numeric_limits<double>::infinity();
    double v = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double d = (points[i] - z).norm();
      if (d < best) {
        best = d;
        v = values[i];
      }
    }
    return best <= 0.75 * spacing ? v : 0.0;
  };
  k.mass = l1;
  k.support_radius = radius + spacing;
  k.renormalize = false;
  return k;
}

}  // namespace blcert
