#include "blcert/io.hpp"

#include <cstdio>
#include <fstream>

#include "blcert/errors.hpp"

namespace blcert {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

}  // namespace

void write_gridfn_csv(const std::string& path, const GridFn& u) {
  std::ofstream out = open_out(path);
  out << "index";
  for (int d = 0; d < u.grid().dim(); ++d) out << ",x" << d;
  out << ",value\n";
  for (Index i = 0; i < u.size(); ++i) {
    out << i;
    for (int d = 0; d < u.grid().dim(); ++d) {
      out << ',' << fmt(u.grid().center(i, d));
    }
    out << ',' << fmt(u[i]) << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out = open_out(path);
  out << "t,index";
  const int dim = traj.front().grid().dim();
  for (int d = 0; d < dim; ++d) out << ",x" << d;
  out << ",value\n";
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const GridFn& u = traj.states[s];
    for (Index i = 0; i < u.size(); ++i) {
      out << fmt(traj.times[s]) << ',' << i;
      for (int d = 0; d < dim; ++d) out << ',' << fmt(u.grid().center(i, d));
      out << ',' << fmt(u[i]) << '\n';
    }
  }
}

void write_series_csv(const std::string& path, const EnvelopeSeries& s) {
  std::ofstream out = open_out(path);
  out << "t,measured,envelope,margin\n";
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    out << fmt(s.times[i]) << ',' << fmt(s.measured[i]) << ','
        << fmt(s.envelope[i]) << ',' << fmt(s.envelope[i] - s.measured[i])
        << '\n';
  }
}

void write_entropy_csv(const std::string& path, const EntropyReport& r) {
  std::ofstream out = open_out(path);
  out << "k,t,max_positive_residual\n";
  for (const EntropyResidualRow& row : r.rows) {
    out << fmt(row.k) << ',' << fmt(row.t) << ',' << fmt(row.max_positive)
        << '\n';
  }
}

}  // namespace blcert
