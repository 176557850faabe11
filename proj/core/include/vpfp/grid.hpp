#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace vpfp {

// A boundary face of a uniform box grid: the cell it belongs to, the axis it
// is normal to, and which side (0 = lower wall, 1 = upper wall).
struct BoundaryFace {
  std::size_t cell = 0;
  int axis = 0;
  int side = 0;
  std::array<double, 3> normal{};  // outward unit normal
  std::array<double, 3> center{};  // face midpoint
  double area = 1.0;               // (d-1)-volume; 1 in one dimension
};

// Uniform tensor grid on [0, L_0] x ... x [0, L_{d-1}], cell centered,
// row-major with axis 0 the slowest index.
class SpatialGrid {
 public:
  SpatialGrid() = default;
  SpatialGrid(std::vector<double> extents, std::vector<int> cells);
  static SpatialGrid line(double length, int cells) { return SpatialGrid({length}, {cells}); }

  int dim() const noexcept { return static_cast<int>(cells_.size()); }
  int cells(int axis) const { return cells_.at(axis); }
  double extent(int axis) const { return extents_.at(axis); }
  double h(int axis) const { return extents_.at(axis) / cells_.at(axis); }
  std::size_t size() const noexcept { return size_; }
  double cell_volume() const noexcept { return cell_volume_; }
  double total_volume() const noexcept;
  double center(int axis, int index) const { return (index + 0.5) * h(axis); }

  std::array<int, 3> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::array<int, 3>& idx) const;
  std::array<double, 3> cell_center(std::size_t flat) const;

  const std::vector<BoundaryFace>& boundary_faces() const noexcept { return faces_; }

  bool operator==(const SpatialGrid& o) const {
    return cells_ == o.cells_ && extents_ == o.extents_;
  }

 private:
  std::vector<double> extents_;
  std::vector<int> cells_;
  std::size_t size_ = 0;
  double cell_volume_ = 0.0;
  std::vector<BoundaryFace> faces_;
};

// Uniform velocity box [-V_max, V_max]^d, cell centered, symmetric about 0.
class VelocityGrid {
 public:
  VelocityGrid() = default;
  VelocityGrid(int dim, double vmax, int cells_per_axis);

  int dim() const noexcept { return dim_; }
  double vmax() const noexcept { return vmax_; }
  int cells_per_axis() const noexcept { return cells_; }
  double h() const noexcept { return 2.0 * vmax_ / cells_; }
  std::size_t size() const noexcept { return size_; }
  double cell_volume() const noexcept { return cell_volume_; }
  double center(int index) const { return -vmax_ + (index + 0.5) * h(); }
  // Velocity vector of flat cell k (unused components zero).
  std::array<double, 3> velocity(std::size_t flat) const;
  double speed_squared(std::size_t flat) const;

  bool operator==(const VelocityGrid& o) const {
    return dim_ == o.dim_ && vmax_ == o.vmax_ && cells_ == o.cells_;
  }

 private:
  int dim_ = 0;
  double vmax_ = 0.0;
  int cells_ = 0;
  std::size_t size_ = 0;
  double cell_volume_ = 0.0;
};

// Midpoint rule over all cells (mask empty) or over cells with mask != 0.
// Summation runs in index order. Throws NonFiniteField on non-finite input.
double quadrature(const SpatialGrid& grid, std::span<const double> field,
                  std::span<const unsigned char> mask = {});
// Sum of face_values[i] * area(face i) over grid.boundary_faces().
double boundary_quadrature(const SpatialGrid& grid, std::span<const double> face_values);

void require_finite(std::span<const double> values, const char* what);

}  // namespace vpfp
