#ifndef BLCERT_PROBLEMS_HPP
#define BLCERT_PROBLEMS_HPP

#include <map>
#include <string>

#include "blcert/model.hpp"
#include "blcert/nonlocal.hpp"

namespace blcert {

/// C^2 cutoff equal to 1 on [lo + margin, hi - margin] and 0 outside
/// [lo, hi], built from the quintic smoothstep.
struct SmoothWindow {
  double lo = -1.0;
  double hi = 1.0;
  double margin = 0.5;

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;
};

using ParamMap = std::map<std::string, double>;

/// Initial data by name: box, hat, gauss, riemann, sine, constant, zero.
/// Radial profiles use ||x - center 1|| (box the max-norm); riemann and
/// sine act on x_0.
std::function<double(const Eigen::VectorXd&)> make_datum(
    const std::string& type, const ParamMap& params, int dim);

/// Built-in problems: burgers, shifted_burgers, advection, cosx_flux,
/// ode_source, radiating_gas. All derivatives are analytic.
ProblemSpec make_problem(const std::string& id, const ParamMap& params,
                         const std::string& datum_type,
                         const ParamMap& datum_params, int dim);

/// Built-in kernels by name: gaussian (sigma), exponential (alpha),
/// top_hat (radius); all take an optional mass (default 1). Type "csv"
/// loads a gridded kernel from `file`.
KernelSpec make_kernel(const std::string& type, const ParamMap& params,
                       int dim, const std::string& file = "");

/// Kernel tabulated as CSV rows x0[,x1,...],value on a uniform offset
/// lattice; the density is the nearest tabulated sample and the mass is
/// the table's L1 sum. No renormalization is applied.
KernelSpec kernel_from_csv(const std::string& path, int dim);

}  // namespace blcert

#endif
