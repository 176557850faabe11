#include "vpfp/grid.hpp"

#include <cmath>
#include <string>

#include "vpfp/error.hpp"

namespace vpfp {

SpatialGrid::SpatialGrid(std::vector<double> extents, std::vector<int> cells)
    : extents_(std::move(extents)), cells_(std::move(cells)) {
  if (cells_.empty() || cells_.size() > 3 || cells_.size() != extents_.size()) {
    raise(ErrorCode::InvalidArgument, "spatial grid dimension must be 1, 2 or 3");
  }
  size_ = 1;
  cell_volume_ = 1.0;
  for (std::size_t a = 0; a < cells_.size(); ++a) {
    if (cells_[a] < 1 || !(extents_[a] > 0.0)) {
      raise(ErrorCode::InvalidArgument, "grid extents and cell counts must be positive");
    }
    size_ *= static_cast<std::size_t>(cells_[a]);
    cell_volume_ *= h(static_cast<int>(a));
  }

  const int d = dim();
  for (std::size_t flat = 0; flat < size_; ++flat) {
    const auto idx = unflatten(flat);
    for (int a = 0; a < d; ++a) {
      for (int side = 0; side < 2; ++side) {
        const bool on_wall = side == 0 ? idx[a] == 0 : idx[a] == cells_[a] - 1;
        if (!on_wall) continue;
        BoundaryFace face;
        face.cell = flat;
        face.axis = a;
        face.side = side;
        face.normal[a] = side == 0 ? -1.0 : 1.0;
        face.center = cell_center(flat);
        face.center[a] = side == 0 ? 0.0 : extents_[a];
        face.area = cell_volume_ / h(a);
        faces_.push_back(face);
      }
    }
  }
}

double SpatialGrid::total_volume() const noexcept {
  double v = 1.0;
  for (double e : extents_) v *= e;
  return v;
}

std::array<int, 3> SpatialGrid::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim() - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(cells_[a]));
    flat /= static_cast<std::size_t>(cells_[a]);
  }
  return idx;
}

std::size_t SpatialGrid::flatten(const std::array<int, 3>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim(); ++a) flat = flat * static_cast<std::size_t>(cells_[a]) + idx[a];
  return flat;
}

std::array<double, 3> SpatialGrid::cell_center(std::size_t flat) const {
  const auto idx = unflatten(flat);
  std::array<double, 3> x{0, 0, 0};
  for (int a = 0; a < dim(); ++a) x[a] = center(a, idx[a]);
  return x;
}

VelocityGrid::VelocityGrid(int dim, double vmax, int cells_per_axis)
    : dim_(dim), vmax_(vmax), cells_(cells_per_axis) {
  if (dim < 1 || dim > 3) raise(ErrorCode::InvalidArgument, "velocity grid dimension must be 1, 2 or 3");
  if (!(vmax > 0.0) || cells_per_axis < 1) {
    raise(ErrorCode::InvalidArgument, "velocity grid needs V_max > 0 and at least one cell");
  }
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(cells_);
  cell_volume_ = std::pow(h(), dim);
}

std::array<double, 3> VelocityGrid::velocity(std::size_t flat) const {
  std::array<double, 3> v{0, 0, 0};
  const auto n = static_cast<std::size_t>(cells_);
  for (int a = dim_ - 1; a >= 0; --a) {
    v[a] = center(static_cast<int>(flat % n));
    flat /= n;
  }
  return v;
}

double VelocityGrid::speed_squared(std::size_t flat) const {
  const auto v = velocity(flat);
  return v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
}

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      raise(ErrorCode::NonFiniteField,
            std::string(what) + ": non-finite value at index " + std::to_string(i));
    }
  }
}

double quadrature(const SpatialGrid& grid, std::span<const double> field,
                  std::span<const unsigned char> mask) {
  if (field.size() != grid.size()) raise(ErrorCode::GridMismatch, "quadrature: field size != grid size");
  if (!mask.empty() && mask.size() != field.size()) {
    raise(ErrorCode::GridMismatch, "quadrature: mask size != grid size");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!mask.empty() && mask[i] == 0) continue;
    if (!std::isfinite(field[i])) {
      raise(ErrorCode::NonFiniteField, "quadrature: non-finite value at cell " + std::to_string(i));
    }
    sum += field[i];
  }
  return sum * grid.cell_volume();
}

double boundary_quadrature(const SpatialGrid& grid, std::span<const double> face_values) {
  const auto& faces = grid.boundary_faces();
  if (face_values.size() != faces.size()) {
    raise(ErrorCode::GridMismatch, "boundary_quadrature: one value per boundary face required");
  }
  require_finite(face_values, "boundary_quadrature");
  double sum = 0.0;
  for (std::size_t i = 0; i < faces.size(); ++i) sum += face_values[i] * faces[i].area;
  return sum;
}

}  // namespace vpfp
