#include "blcert/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "blcert/errors.hpp"

namespace blcert {

UniformGrid::UniformGrid(Eigen::ArrayXd origin, Eigen::ArrayXd cell_size,
                         std::vector<Index> cells, Boundary boundary)
    : origin_(std::move(origin)),
      cell_size_(std::move(cell_size)),
      cells_(std::move(cells)),
      boundary_(boundary) {
  const int n = static_cast<int>(cells_.size());
  if (n < 1) throw std::invalid_argument("grid: dimension must be >= 1");
  if (origin_.size() != n || cell_size_.size() != n) {
    throw DimensionMismatch("grid: origin/cell_size size mismatch");
  }
  for (int d = 0; d < n; ++d) {
    if (cells_[d] < 3) throw std::invalid_argument("grid: >= 3 cells per axis");
    if (!(cell_size_[d] > 0.0)) {
      throw std::invalid_argument("grid: cell size must be positive");
    }
  }
  strides_.assign(n, 1);
  for (int d = n - 2; d >= 0; --d) strides_[d] = strides_[d + 1] * cells_[d + 1];
  size_ = strides_[0] * cells_[0];
  volume_ = cell_size_.prod();
}

double UniformGrid::face_area(int axis) const {
  return volume_ / cell_size_[axis];
}

Eigen::VectorXd UniformGrid::center(Index flat) const {
  Eigen::VectorXd x(dim());
  for (int d = 0; d < dim(); ++d) x[d] = center(flat, d);
  return x;
}

bool UniformGrid::operator==(const UniformGrid& o) const {
  return cells_ == o.cells_ && boundary_ == o.boundary_ &&
         (origin_ == o.origin_).all() && (cell_size_ == o.cell_size_).all();
}

UniformGrid uniform_line(double a, double b, Index n, Boundary boundary) {
  Eigen::ArrayXd lo(1), hi(1);
  lo << a;
  hi << b;
  return uniform_box(lo, hi, {n}, boundary);
}

UniformGrid uniform_box(const Eigen::ArrayXd& lo, const Eigen::ArrayXd& hi,
                        const std::vector<Index>& cells, Boundary boundary) {
  Eigen::ArrayXd h(lo.size());
  for (int d = 0; d < lo.size(); ++d) {
    h[d] = (hi[d] - lo[d]) / static_cast<double>(cells[d]);
  }
  return UniformGrid(lo, h, cells, boundary);
}

GridFn::GridFn(UniformGrid grid, double fill)
    : grid_(std::move(grid)),
      values_(Eigen::ArrayXd::Constant(grid_.size(), fill)),
      pad_lo_(Eigen::ArrayXd::Zero(grid_.dim())),
      pad_hi_(Eigen::ArrayXd::Zero(grid_.dim())) {}

GridFn::GridFn(UniformGrid grid, Eigen::ArrayXd values)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      pad_lo_(Eigen::ArrayXd::Zero(grid_.dim())),
      pad_hi_(Eigen::ArrayXd::Zero(grid_.dim())) {
  if (values_.size() != grid_.size()) {
    throw GridMismatch("GridFn: value count does not match grid");
  }
}

void GridFn::set_pads(Eigen::ArrayXd lo, Eigen::ArrayXd hi) {
  if (lo.size() != grid_.dim() || hi.size() != grid_.dim()) {
    throw DimensionMismatch("GridFn::set_pads: wrong size");
  }
  pad_lo_ = std::move(lo);
  pad_hi_ = std::move(hi);
}

double GridFn::neighbor(Index flat, int axis, int dir) const {
  const Index c = grid_.coord(flat, axis);
  const Index n = grid_.cells()[axis];
  const Index s = grid_.stride(axis);
  if (dir > 0) {
    if (c + 1 < n) return values_[flat + s];
    return grid_.boundary() == Boundary::Periodic ? values_[flat - s * (n - 1)]
                                                  : pad_hi_[axis];
  }
  if (c > 0) return values_[flat - s];
  return grid_.boundary() == Boundary::Periodic ? values_[flat + s * (n - 1)]
                                                : pad_lo_[axis];
}

GridFn sample_on_grid(const UniformGrid& grid,
                      const std::function<double(const Eigen::VectorXd&)>& f) {
  GridFn u(grid);
  for (Index i = 0; i < grid.size(); ++i) u[i] = f(grid.center(i));
  if (grid.boundary() == Boundary::Padded) {
    Eigen::ArrayXd lo(grid.dim()), hi(grid.dim());
    for (int d = 0; d < grid.dim(); ++d) {
      Eigen::VectorXd mid(grid.dim());
      for (int e = 0; e < grid.dim(); ++e) {
        mid[e] = grid.origin()[e] + 0.5 * grid.domain_length(e);
      }
      Eigen::VectorXd p = mid;
      p[d] = grid.origin()[d] - 0.5 * grid.cell_size()[d];
      lo[d] = f(p);
      p[d] = grid.origin()[d] + grid.domain_length(d) +
             0.5 * grid.cell_size()[d];
      hi[d] = f(p);
    }
    u.set_pads(lo, hi);
  }
  return u;
}

double total_variation(const GridFn& u) {
  const UniformGrid& g = u.grid();
  double tv = 0.0;
  for (int d = 0; d < g.dim(); ++d) {
    const double area = g.face_area(d);
    double axis_sum = 0.0;
    for (Index i = 0; i < g.size(); ++i) {
      const Index c = g.coord(i, d);
      if (c + 1 < g.cells()[d]) {
        axis_sum += std::abs(u[i + g.stride(d)] - u[i]);
      } else if (g.boundary() == Boundary::Periodic) {
        axis_sum += std::abs(u[i - g.stride(d) * (g.cells()[d] - 1)] - u[i]);
      } else {
        axis_sum += std::abs(u.pad_hi(d) - u[i]);
      }
      if (g.boundary() == Boundary::Padded && c == 0) {
        axis_sum += std::abs(u[i] - u.pad_lo(d));
      }
    }
    tv += area * axis_sum;
  }
  return tv;
}

double l1_norm(const GridFn& u) {
  return u.grid().volume() * u.values().abs().sum();
}

double l1_distance(const GridFn& u, const GridFn& v) {
  if (u.grid() != v.grid()) throw GridMismatch("l1_distance: grids differ");
  return u.grid().volume() * (u.values() - v.values()).abs().sum();
}

double l1_distance_ball(const GridFn& u, const GridFn& v,
                        const Eigen::VectorXd& x0, double R) {
  const UniformGrid& g = u.grid();
  if (g != v.grid()) throw GridMismatch("l1_distance_ball: grids differ");
  if (x0.size() != g.dim()) {
    throw DimensionMismatch("l1_distance_ball: center dimension");
  }
  if (std::isinf(R)) return l1_distance(u, v);
  double acc = 0.0;
  for (Index i = 0; i < g.size(); ++i) {
    if ((g.center(i) - x0).norm() <= R) acc += std::abs(u[i] - v[i]);
  }
  return g.volume() * acc;
}

GridFn shift_cells(const GridFn& u, int axis, Index k) {
  const UniformGrid& g = u.grid();
  GridFn out(g);
  out.set_pads(Eigen::ArrayXd::Zero(g.dim()), Eigen::ArrayXd::Zero(g.dim()));
  const Index n = g.cells()[axis];
  const Index s = g.stride(axis);
  for (Index i = 0; i < g.size(); ++i) {
    const Index c = g.coord(i, axis);
    Index src = c - k;
    if (g.boundary() == Boundary::Periodic) {
      src = ((src % n) + n) % n;
      out[i] = u[i + (src - c) * s];
    } else if (src < 0) {
      out[i] = u.pad_lo(axis);
    } else if (src >= n) {
      out[i] = u.pad_hi(axis);
    } else {
      out[i] = u[i + (src - c) * s];
    }
  }
  if (g.boundary() == Boundary::Padded) {
    Eigen::ArrayXd lo(g.dim()), hi(g.dim());
    for (int d = 0; d < g.dim(); ++d) {
      lo[d] = u.pad_lo(d);
      hi[d] = u.pad_hi(d);
    }
    out.set_pads(lo, hi);
  }
  return out;
}

double value_at_offset(const GridFn& u, Index base,
                       const std::vector<Index>& offset) {
  const UniformGrid& g = u.grid();
  Index flat = base;
  for (int d = 0; d < g.dim(); ++d) {
    if (offset[d] == 0) continue;
    Index c = g.coord(base, d) + offset[d];
    const Index n = g.cells()[d];
    if (g.boundary() == Boundary::Periodic) {
      c = ((c % n) + n) % n;
    } else if (c < 0) {
      return u.pad_lo(d);
    } else if (c >= n) {
      return u.pad_hi(d);
    }
    flat += (c - g.coord(base, d)) * g.stride(d);
  }
  return u[flat];
}

double mollified_tv(const GridFn& u, double lambda, const MollifierSpec& m) {
  const UniformGrid& g = u.grid();
  if (g.dim() > 2) {
    throw std::invalid_argument("mollified_tv: supported for dim <= 2");
  }
  const double hmax = g.cell_size().maxCoeff();
  if (!(lambda >= 2.0 * hmax)) {
    throw UnresolvedScale("mollified_tv: lambda must be >= 2 max(h)");
  }

  // Offsets within the support of mu( . /lambda), kernel renormalized.
  std::vector<std::vector<Index>> offsets;
  std::vector<double> weights;
  std::vector<Index> reach(g.dim());
  for (int d = 0; d < g.dim(); ++d) {
    reach[d] = static_cast<Index>(std::ceil(lambda / g.cell_size()[d]));
  }
  std::vector<Index> off(g.dim(), 0);
  double wsum = 0.0;
  const std::function<void(int)> enumerate = [&](int d) {
    if (d == g.dim()) {
      double r2 = 0.0;
      for (int e = 0; e < g.dim(); ++e) {
        const double z = off[e] * g.cell_size()[e];
        r2 += z * z;
      }
      const double w = m.profile(std::sqrt(r2) / lambda);
      if (w > 0.0) {
        offsets.push_back(off);
        weights.push_back(w);
        wsum += w;
      }
      return;
    }
    for (off[d] = -reach[d]; off[d] <= reach[d]; ++off[d]) enumerate(d + 1);
    off[d] = 0;
  };
  enumerate(0);
  if (!(wsum > 0.0)) throw UnresolvedScale("mollified_tv: empty kernel");

  const MollifierConstants mc = mollifier_constants(g.dim(), m);
  double acc = 0.0;
  for (std::size_t z = 0; z < offsets.size(); ++z) {
    bool zero = true;
    for (int d = 0; d < g.dim(); ++d) zero = zero && offsets[z][d] == 0;
    if (zero) continue;
    double l1 = 0.0;
    for (Index i = 0; i < g.size(); ++i) {
      l1 += std::abs(u[i] - value_at_offset(u, i, offsets[z]));
    }
    acc += (weights[z] / wsum) * l1 * g.volume();
  }
  return acc / (mc.c1 * lambda);
}

}  // namespace blcert
