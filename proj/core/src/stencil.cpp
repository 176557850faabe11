#include "vpfp/stencil.hpp"

#include "vpfp/error.hpp"

namespace vpfp {

GhostedField::GhostedField(const SpatialGrid& grid, std::span<const double> interior) : grid_(&grid) {
  if (interior.size() != grid.size()) raise(ErrorCode::GridMismatch, "GhostedField: size mismatch");
  std::size_t total = 1;
  for (int a = 0; a < grid.dim(); ++a) {
    n_[a] = grid.cells(a);
    total *= static_cast<std::size_t>(n_[a] + 2);
    filled_[a] = false;
  }
  data_.assign(total, 0.0);
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.unflatten(flat);
    data_[padded_index(idx[0], idx[1], idx[2])] = interior[flat];
  }
}

std::size_t GhostedField::padded_index(int i, int j, int k) const {
  const int d = grid_->dim();
  const std::array<int, 3> idx{i, j, k};
  std::size_t flat = 0;
  for (int a = 0; a < d; ++a) flat = flat * static_cast<std::size_t>(n_[a] + 2) + static_cast<std::size_t>(idx[a] + 1);
  return flat;
}

double& GhostedField::at(int i, int j, int k) { return data_[padded_index(i, j, k)]; }
double GhostedField::at(int i, int j, int k) const { return data_[padded_index(i, j, k)]; }

double GhostedField::interior(std::size_t flat) const {
  const auto idx = grid_->unflatten(flat);
  return at(idx[0], idx[1], idx[2]);
}

bool GhostedField::ghosts_ready() const {
  for (int a = 0; a < grid_->dim(); ++a)
    if (!filled_[a]) return false;
  return true;
}

namespace {
template <class F>
void for_each_transverse(const std::array<int, 3>& n, int dim, int axis, F&& fn) {
  std::array<int, 3> lo{0, 0, 0}, hi{1, 1, 1};
  for (int a = 0; a < dim; ++a) {
    if (a == axis) continue;
    hi[a] = n[a];
  }
  for (int i = lo[0]; i < hi[0]; ++i)
    for (int j = lo[1]; j < hi[1]; ++j)
      for (int k = lo[2]; k < hi[2]; ++k) fn(std::array<int, 3>{i, j, k});
}
}  // namespace

void GhostedField::fill(int axis, GhostRule rule, double lo_value, double hi_value) {
  if (axis < 0 || axis >= grid_->dim()) raise(ErrorCode::InvalidArgument, "GhostedField::fill: bad axis");
  if (rule == GhostRule::Missing) {
    filled_[axis] = false;
    return;
  }
  const int n = n_[axis];
  for_each_transverse(n_, grid_->dim(), axis, [&](std::array<int, 3> t) {
    auto idx_at = [&](int v) {
      auto c = t;
      c[axis] = v;
      return c;
    };
    auto ref = [&](int v) -> double& {
      const auto c = idx_at(v);
      return at(c[0], c[1], c[2]);
    };
    switch (rule) {
      case GhostRule::Dirichlet:
        ref(-1) = 2.0 * lo_value - ref(0);
        ref(n) = 2.0 * hi_value - ref(n - 1);
        break;
      case GhostRule::Neumann:
        ref(-1) = ref(0);
        ref(n) = ref(n - 1);
        break;
      case GhostRule::Periodic:
        ref(-1) = ref(n - 1);
        ref(n) = ref(0);
        break;
      case GhostRule::Missing:
        break;
    }
  });
  filled_[axis] = true;
}

void GhostedField::fill_all(GhostRule rule, double face_value) {
  for (int a = 0; a < grid_->dim(); ++a) fill(a, rule, face_value, face_value);
}

void GhostedField::set_ghost(int axis, int side, std::array<int, 3> transverse, double value) {
  transverse[axis] = side == 0 ? -1 : n_[axis];
  at(transverse[0], transverse[1], transverse[2]) = value;
}

namespace {
void require_ghosts(const GhostedField& f, const char* op) {
  if (!f.ghosts_ready()) raise(ErrorCode::GhostLayerMissing, std::string(op) + ": ghost layer not filled");
}

double neighbour(const GhostedField& f, std::array<int, 3> idx, int axis, int offset) {
  idx[axis] += offset;
  return f.at(idx[0], idx[1], idx[2]);
}
}  // namespace

VectorField grad(const GhostedField& field) {
  require_ghosts(field, "grad");
  const auto& g = field.grid();
  VectorField out(static_cast<std::size_t>(g.dim()), std::vector<double>(g.size()));
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const auto idx = g.unflatten(flat);
    for (int a = 0; a < g.dim(); ++a) {
      out[a][flat] = (neighbour(field, idx, a, 1) - neighbour(field, idx, a, -1)) / (2.0 * g.h(a));
    }
  }
  return out;
}

std::vector<double> div(const std::vector<GhostedField>& components) {
  if (components.empty()) raise(ErrorCode::InvalidArgument, "div: empty vector field");
  const auto& g = components.front().grid();
  if (static_cast<int>(components.size()) != g.dim()) {
    raise(ErrorCode::InvalidArgument, "div: component count must equal grid dimension");
  }
  for (const auto& c : components) require_ghosts(c, "div");
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const auto idx = g.unflatten(flat);
    double s = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      s += (neighbour(components[a], idx, a, 1) - neighbour(components[a], idx, a, -1)) / (2.0 * g.h(a));
    }
    out[flat] = s;
  }
  return out;
}

std::vector<double> laplace(const GhostedField& field) {
  require_ghosts(field, "laplace");
  const auto& g = field.grid();
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const auto idx = g.unflatten(flat);
    const double c = field.at(idx[0], idx[1], idx[2]);
    double s = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      const double h = g.h(a);
      s += (neighbour(field, idx, a, 1) - 2.0 * c + neighbour(field, idx, a, -1)) / (h * h);
    }
    out[flat] = s;
  }
  return out;
}

std::vector<double> face_gradient_1d(std::span<const double> u, double h, double ghost_lo, double ghost_hi) {
  const std::size_t n = u.size();
  std::vector<double> g(n + 1);
  g[0] = (u[0] - ghost_lo) / h;
  for (std::size_t i = 1; i < n; ++i) g[i] = (u[i] - u[i - 1]) / h;
  g[n] = (ghost_hi - u[n - 1]) / h;
  return g;
}

}  // namespace vpfp
