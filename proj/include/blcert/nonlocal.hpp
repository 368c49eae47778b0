#ifndef BLCERT_NONLOCAL_HPP
#define BLCERT_NONLOCAL_HPP

#include <memory>
#include <vector>

#include "blcert/grid.hpp"
#include "blcert/solver.hpp"

namespace blcert {

/// Time-dependent convolution kernel with its L1 mass
/// k = sup_t ||K(t)||_L1. Built-in kernels carry the analytic mass and
/// by default renormalize their grid samples so the discrete L1 norm
/// equals it exactly; custom kernels may keep the raw sampled mass.
struct KernelSpec {
  std::string name;
  std::function<double(double t, const Eigen::VectorXd& z)> density;
  double mass = 0.0;
  double support_radius = 0.0;  // density negligible beyond this radius
  bool time_dependent = false;
  bool renormalize = true;
};

KernelSpec gaussian_kernel(int dim, double sigma, double mass = 1.0);
KernelSpec exponential_kernel(int dim, double alpha, double mass = 1.0);
KernelSpec top_hat_kernel(int dim, double radius, double mass = 1.0);

/// Kernel sampled on a grid's offset lattice. Applies by direct
/// summation, or circularly via FFT on 1-D periodic grids of at least
/// `fft_threshold` cells (both paths agree to ~1e-10).
class ConvolutionPlan {
 public:
  ConvolutionPlan(KernelSpec kernel, const UniformGrid& grid);

  GridFn apply(double t, const GridFn& u) const;
  GridFn apply_direct(double t, const GridFn& u) const;
  GridFn apply_fft(double t, const GridFn& u) const;

  /// Discrete L1 norm of the sampled kernel at time t.
  double discrete_mass(double t) const;
  bool uses_fft() const;

  static constexpr Index fft_threshold = 128;

 private:
  struct Stencil {
    std::vector<std::vector<Index>> offsets;
    std::vector<double> weights;  // density * cell volume, renormalized
  };
  Stencil sample(double t) const;

  KernelSpec kernel_;
  UniformGrid grid_;
  Stencil frozen_;  // time-independent kernels are sampled once
};

/// K(t) *_x u by discrete convolution.
GridFn convolve(const KernelSpec& kernel, double t, const GridFn& u);

/// sup_t ||K - K~||_L1 of the sampled kernels on a grid (max over the
/// given times; a single 0.0 entry suits time-independent kernels).
double kernel_l1_distance(const KernelSpec& a, const KernelSpec& b,
                          const UniformGrid& grid,
                          const std::vector<double>& times);

/// Largest T with (e^{kappa T} - 1)/kappa * k <= target, i.e.
/// T = ln(1 + kappa target / k) / kappa, with the kappa -> 0 limit
/// target / k. Infinite for k = 0.
double contraction_horizon(double kappa, double k, double target);

struct PicardOptions {
  double cfl = 0.45;
  double tol = -1.0;  // <= 0: 1e-8 ||u0||_1 with floor 1e-12
  double contraction_target = 0.5;
  std::vector<double> snapshot_times;
  bool record_all_steps = false;
  double max_dt = std::numeric_limits<double>::infinity();
  // Audited sup-norms; negative means audit internally.
  double sup_du_f = -1.0;
  double sup_du_F = -1.0;
  double sup_grad_du_f = -1.0;
  int max_iterates = 200;
};

struct PicardStats {
  int slabs = 0;
  double slab_horizon = 0.0;
  double kappa = 0.0;
  double kernel_mass = 0.0;
  std::vector<std::vector<double>> iterate_distances;  // per slab
  /// Largest observed d_{m+1}/d_m over all slabs (ignoring converged
  /// tails below tolerance).
  double max_ratio = 0.0;
};

/// Fixed-point solution of the balance law with source F + K *_x u:
/// partitions [0, T] into contraction slabs and iterates the frozen-
/// source problem on each until successive iterates are tol-close in
/// sup_t L1. Throws NoContraction when iterate distances stop
/// contracting.
Trajectory picard_solve(const ProblemSpec& spec, const KernelSpec& kernel,
                        const UniformGrid& grid, double T,
                        const PicardOptions& opt = PicardOptions{},
                        PicardStats* stats = nullptr);

}  // namespace blcert

#endif
