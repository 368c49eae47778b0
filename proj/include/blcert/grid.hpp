#ifndef BLCERT_GRID_HPP
#define BLCERT_GRID_HPP

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <vector>

#include "blcert/constants.hpp"

namespace blcert {

using Index = std::ptrdiff_t;

enum class Boundary { Periodic, Padded };

/// Uniform cell grid on an axis-aligned box in R^n. Cells are indexed
/// flat with the last axis fastest.
class UniformGrid {
 public:
  UniformGrid() = default;
  UniformGrid(Eigen::ArrayXd origin, Eigen::ArrayXd cell_size,
              std::vector<Index> cells, Boundary boundary);

  int dim() const { return static_cast<int>(cells_.size()); }
  const Eigen::ArrayXd& origin() const { return origin_; }
  const Eigen::ArrayXd& cell_size() const { return cell_size_; }
  const std::vector<Index>& cells() const { return cells_; }
  Boundary boundary() const { return boundary_; }

  Index size() const { return size_; }
  Index stride(int axis) const { return strides_[axis]; }
  Index coord(Index flat, int axis) const {
    return (flat / strides_[axis]) % cells_[axis];
  }

  double volume() const { return volume_; }          // one cell
  double face_area(int axis) const;                  // volume / h_axis
  double center(Index flat, int axis) const {
    return origin_[axis] + (coord(flat, axis) + 0.5) * cell_size_[axis];
  }
  Eigen::VectorXd center(Index flat) const;
  double domain_length(int axis) const {
    return cells_[axis] * cell_size_[axis];
  }

  bool operator==(const UniformGrid& o) const;
  bool operator!=(const UniformGrid& o) const { return !(*this == o); }

 private:
  Eigen::ArrayXd origin_;
  Eigen::ArrayXd cell_size_;
  std::vector<Index> cells_;
  std::vector<Index> strides_;
  Boundary boundary_ = Boundary::Periodic;
  Index size_ = 0;
  double volume_ = 0.0;
};

/// 1-D grid on [a, b) with n cells.
UniformGrid uniform_line(double a, double b, Index n, Boundary boundary);

/// n-D grid on the box [lo, hi) with the given cells per axis.
UniformGrid uniform_box(const Eigen::ArrayXd& lo, const Eigen::ArrayXd& hi,
                        const std::vector<Index>& cells, Boundary boundary);

/// Cell-averaged scalar function on a UniformGrid. Padded grids carry a
/// constant ghost value per axis side.
class GridFn {
 public:
  GridFn() = default;
  explicit GridFn(UniformGrid grid, double fill = 0.0);
  GridFn(UniformGrid grid, Eigen::ArrayXd values);

  const UniformGrid& grid() const { return grid_; }
  Eigen::ArrayXd& values() { return values_; }
  const Eigen::ArrayXd& values() const { return values_; }
  double operator[](Index i) const { return values_[i]; }
  double& operator[](Index i) { return values_[i]; }
  Index size() const { return values_.size(); }

  void set_pads(Eigen::ArrayXd lo, Eigen::ArrayXd hi);
  double pad_lo(int axis) const { return pad_lo_[axis]; }
  double pad_hi(int axis) const { return pad_hi_[axis]; }

  /// Value of the axis-neighbor of cell `flat` in direction dir = +-1,
  /// resolving the grid boundary (wrap or pad).
  double neighbor(Index flat, int axis, int dir) const;

  bool all_finite() const { return values_.allFinite(); }

 private:
  UniformGrid grid_;
  Eigen::ArrayXd values_;
  Eigen::ArrayXd pad_lo_;
  Eigen::ArrayXd pad_hi_;
};

/// Sample a closed-form function at cell centers. For padded grids the
/// ghost constants are sampled just outside the domain faces.
GridFn sample_on_grid(const UniformGrid& grid,
                      const std::function<double(const Eigen::VectorXd&)>& f);

/// Anisotropic discrete total variation: per axis, the sum of absolute
/// neighbor differences weighted by the face area. Periodic grids
/// include the wrap difference; padded grids the differences against
/// the ghost constants.
double total_variation(const GridFn& u);

/// h^n sum of |u|.
double l1_norm(const GridFn& u);

/// Full-domain L1 distance; grids must match.
double l1_distance(const GridFn& u, const GridFn& v);

/// L1 distance restricted to cells whose centers lie in the closed ball
/// B(x0, R). R = +infinity selects the whole domain.
double l1_distance_ball(const GridFn& u, const GridFn& v,
                        const Eigen::VectorXd& x0, double R);

/// Cyclic (periodic) or pad-filling (padded) shift by k cells along an
/// axis: result(i) = u(i - k e_axis).
GridFn shift_cells(const GridFn& u, int axis, Index k);

/// u at the cell displaced from `base` by the integer offset; reads past
/// the domain wrap on periodic grids and resolve to the pad constant of
/// the first out-of-range axis on padded grids.
double value_at_offset(const GridFn& u, Index base,
                       const std::vector<Index>& offset);

/// Mollified total variation
///   (1/(C1 lambda)) int int |u(x) - u(x-z)| mu(z) dz dx
/// with mu the lambda-scaled mollifier, by discrete convolution over the
/// offsets inside the mollifier support. Requires lambda >= 2 max(h) and
/// dim <= 2. The discrete kernel is renormalized to unit mass so the
/// quadrature of mu does not bias the estimate.
double mollified_tv(const GridFn& u, double lambda, const MollifierSpec& m);

}  // namespace blcert

#endif
