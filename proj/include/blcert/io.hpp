#ifndef BLCERT_IO_HPP
#define BLCERT_IO_HPP

#include <string>

#include "blcert/bounds.hpp"
#include "blcert/entropy.hpp"
#include "blcert/grid.hpp"
#include "blcert/solver.hpp"

namespace blcert {

/// Shortest round-trip decimal form; identical inputs give identical
/// bytes, which the determinism checks rely on.
std::string fmt(double v);

/// index, center coordinates, value per cell.
void write_gridfn_csv(const std::string& path, const GridFn& u);

/// t, index, center coordinates, value per snapshot cell.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// t, measured, envelope, margin.
void write_series_csv(const std::string& path, const EnvelopeSeries& s);

/// k, t, max positive residual.
void write_entropy_csv(const std::string& path, const EntropyReport& r);

}  // namespace blcert

#endif
