#ifndef BLCERT_SOLVER_HPP
#define BLCERT_SOLVER_HPP

#include <limits>
#include <string>
#include <vector>

#include "blcert/grid.hpp"
#include "blcert/model.hpp"

namespace blcert {

/// Descriptor of the numerical flux a trajectory was produced with;
/// entropy certification rebuilds the same flux from it.
struct SchemeInfo {
  std::string flux_name = "llf";
  int alpha_samples = 5;
  double cfl = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<GridFn> states;
  std::vector<double> dt_history;
  SchemeInfo scheme;

  const GridFn& front() const { return states.front(); }
  const GridFn& back() const { return states.back(); }
  /// Snapshot index of the time closest to t.
  std::size_t index_of(double t) const;
};

/// Stable explicit step: cfl * h_min / (n * max(sup_du_f, eps)), further
/// capped by the source stiffness cfl / max(sup_du_F, eps).
double cfl_dt(const UniformGrid& grid, double sup_du_f, double cfl,
              double sup_du_F = 0.0);

/// Local Lax-Friedrichs interface flux along `axis`:
///   H(a,b) = (f_d(a) + f_d(b))/2 - alpha (b - a)/2,
/// alpha the max of |d_u f_d| sampled on the interface state interval.
double llf_flux(const FluxField& flux, int axis, double t,
                const Eigen::VectorXd& x_face, double a, double b,
                int alpha_samples);

/// One forward step: dimension-by-dimension LLF update of Div f followed
/// by an explicit Euler source stage F(t,x,.) + extra_source. Throws
/// CflViolation if dt exceeds what the sampled wave speeds allow and
/// NonFiniteState if the update leaves the finite range.
GridFn step(const GridFn& state, double t, double dt, const ProblemSpec& spec,
            const GridFn* extra_source = nullptr,
            const SchemeInfo& scheme = SchemeInfo{});

struct SolveOptions {
  double cfl = 0.45;
  std::vector<double> snapshot_times;  // recorded exactly; 0 and T implied
  double max_dt = std::numeric_limits<double>::infinity();
  bool record_all_steps = false;
  // Audited sup-norms; negative means "audit internally over the run box
  // with the datum-derived state interval".
  double sup_du_f = -1.0;
  double sup_du_F = -1.0;
};

/// Datum sampled on the grid, ghost pads included.
GridFn initial_state(const ProblemSpec& spec, const UniformGrid& grid);

/// Sampling box covering the run: [0,T] x domain x datum range widened
/// by 10% of its spread.
SamplingBox default_state_box(const ProblemSpec& spec, const UniformGrid& grid,
                              double T);

/// Advance to T recording snapshots. Padded-boundary runs are rejected
/// (InsufficientPadding) unless the datum's constant margin plus source
/// quiescence band exceeds sup_du_f * T.
Trajectory solve(const ProblemSpec& spec, const UniformGrid& grid, double T,
                 const SolveOptions& opt = SolveOptions{});

}  // namespace blcert

#endif
