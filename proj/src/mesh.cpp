#include "hpicp/mesh.hpp"

#include <atomic>
#include <cmath>

#include "hpicp/errors.hpp"

namespace hpicp {

namespace {

std::uint64_t next_mesh_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

void check_weight_sum(const std::vector<double>& w, double expected) {
  double sum = 0.0;
  for (double v : w) {
    if (!(v > 0.0)) throw SolveError("mesh: quadrature weight is not positive");
    sum += v;
  }
  if (std::abs(sum - expected) > 1e-12 * expected) {
    throw SolveError("mesh: quadrature weights do not sum to the domain measure");
  }
}

}  // namespace

Mesh Mesh::interval(int elements) {
  if (elements < 1) throw UsageError("Mesh::interval: need at least one element");
  Mesh mesh;
  mesh.dimension_ = 1;
  mesh.element_count_ = elements;
  mesh.h_ = 2.0 / elements;
  mesh.id_ = next_mesh_id();
  const int nodes = elements + 1;
  mesh.node_x_.resize(nodes);
  mesh.quad_weights_.assign(nodes, mesh.h_);
  for (int i = 0; i < nodes; ++i) mesh.node_x_[i] = -1.0 + i * mesh.h_;
  mesh.node_x_.back() = 1.0;
  mesh.quad_weights_.front() = 0.5 * mesh.h_;
  mesh.quad_weights_.back() = 0.5 * mesh.h_;
  check_weight_sum(mesh.quad_weights_, 2.0);
  return mesh;
}

Mesh Mesh::square(int cells_per_side) {
  if (cells_per_side < 2) throw UsageError("Mesh::square: need at least two cells per side");
  Mesh mesh;
  const int n = cells_per_side;
  const int side = n + 1;
  mesh.dimension_ = 2;
  mesh.element_count_ = 2 * n * n;
  mesh.nodes_per_side_ = side;
  mesh.h_ = 2.0 / n;
  mesh.id_ = next_mesh_id();
  mesh.node_x_.resize(static_cast<std::size_t>(side) * side);
  mesh.node_y_.resize(static_cast<std::size_t>(side) * side);
  for (int iy = 0; iy < side; ++iy) {
    const double y = (iy == n) ? 1.0 : -1.0 + iy * mesh.h_;
    for (int ix = 0; ix < side; ++ix) {
      const int idx = iy * side + ix;
      mesh.node_x_[idx] = (ix == n) ? 1.0 : -1.0 + ix * mesh.h_;
      mesh.node_y_[idx] = y;
    }
  }
  mesh.triangles_.reserve(static_cast<std::size_t>(mesh.element_count_));
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const int a = iy * side + ix;
      const int b = iy * side + ix + 1;
      const int c = (iy + 1) * side + ix + 1;
      const int d = (iy + 1) * side + ix;
      mesh.triangles_.push_back({a, b, c});
      mesh.triangles_.push_back({a, c, d});
    }
  }
  // Lumped P1 mass: one third of each triangle area per vertex.
  mesh.quad_weights_.assign(mesh.node_x_.size(), 0.0);
  for (const auto& tri : mesh.triangles_) {
    const double x0 = mesh.node_x_[tri[0]], y0 = mesh.node_y_[tri[0]];
    const double x1 = mesh.node_x_[tri[1]], y1 = mesh.node_y_[tri[1]];
    const double x2 = mesh.node_x_[tri[2]], y2 = mesh.node_y_[tri[2]];
    const double area = 0.5 * std::abs((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0));
    for (int v : tri) mesh.quad_weights_[v] += area / 3.0;
  }
  check_weight_sum(mesh.quad_weights_, 4.0);
  return mesh;
}

}  // namespace hpicp
