#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "vpfp/grid.hpp"

namespace vpfp {

enum class GhostRule {
  Missing,    // ghosts not set; operators refuse the field
  Dirichlet,  // face value prescribed: ghost = 2 b - interior
  Neumann,    // zero normal derivative: ghost = interior
  Periodic,
};

// Grid function with one ghost layer on every wall. Centered stencils only read
// face-neighbour ghosts, so corner ghosts are never required.
class GhostedField {
 public:
  GhostedField(const SpatialGrid& grid, std::span<const double> interior);

  const SpatialGrid& grid() const noexcept { return *grid_; }
  double& at(int i, int j = 0, int k = 0);
  double at(int i, int j = 0, int k = 0) const;
  double interior(std::size_t flat) const;

  // Fill the ghosts of one axis. For Dirichlet, `face_value` is the wall value.
  void fill(int axis, GhostRule rule, double face_value_lo = 0.0, double face_value_hi = 0.0);
  void fill_all(GhostRule rule, double face_value = 0.0);
  // Set one ghost explicitly (side 0 = lower wall). Marks the axis as filled
  // once both sides were set for every transverse index.
  void set_ghost(int axis, int side, std::array<int, 3> transverse, double value);
  void mark_filled(int axis) { filled_[axis] = true; }

  bool ghosts_ready() const;

 private:
  std::size_t padded_index(int i, int j, int k) const;

  const SpatialGrid* grid_;
  std::array<int, 3> n_{1, 1, 1};
  std::vector<double> data_;
  std::array<bool, 3> filled_{true, true, true};
};

using VectorField = std::vector<std::vector<double>>;  // component-major

// Second-order centered differences at cell centres (interior cells use
// neighbours, boundary cells use the ghost layer).
VectorField grad(const GhostedField& field);
std::vector<double> div(const std::vector<GhostedField>& components);
std::vector<double> laplace(const GhostedField& field);

// 1D helpers on cell-centred data with explicit ghost values.
std::vector<double> face_gradient_1d(std::span<const double> u, double h, double ghost_lo, double ghost_hi);

}  // namespace vpfp
