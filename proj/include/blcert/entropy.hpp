#ifndef BLCERT_ENTROPY_HPP
#define BLCERT_ENTROPY_HPP

#include <optional>
#include <vector>

#include "blcert/nonlocal.hpp"
#include "blcert/solver.hpp"

namespace blcert {

struct EntropyResidualRow {
  double k;
  double t;
  double max_positive;  // over interior cells
};

struct EntropyReport {
  std::vector<EntropyResidualRow> rows;
  double max_positive = 0.0;
};

/// 9 equispaced Kruzkov constants spanning the trajectory's state range
/// widened by 5% on each side.
std::vector<double> kruzkov_levels(const Trajectory& traj, int count = 9);

/// Cell entropy-inequality residual of a per-step trajectory:
///
///   r = (|u1 - k| - |u0 - k|)/dt + sum_d dQ_d/h_d
///       + sign(v - k) divh f(.,k) - sign(u1 - k) (F(t,x,v) + extra)
///
/// with Q the Crandall-Majda entropy flux of the scheme's numerical
/// flux, v the post-flux intermediate state, divh the face-difference
/// divergence, and the signs taken at the updated states so that the
/// monotone scheme satisfies r <= 0 exactly (up to roundoff). The
/// positive part of r certifies entropy-inequality violations.
///
/// The trajectory must record every step (SchemeMismatch otherwise);
/// `kernel`, when given, reproduces the convolution source K *_x u^n.
EntropyReport entropy_residual(const Trajectory& traj, const ProblemSpec& spec,
                               const std::vector<double>& k_values,
                               const KernelSpec* kernel = nullptr);

/// L1 distance between the first positive-time snapshot and the datum
/// on the ball B(0, r).
double initial_trace_check(const Trajectory& traj, const GridFn& u0, double r);

}  // namespace blcert

#endif
