#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "hpicp/errors.hpp"
#include "hpicp/mesh.hpp"

namespace hpicp {

// Nodal field on a fixed mesh. Values are plain doubles; the weighted pairing
// decides whether a field is read as primal or dual.
class GridFunction {
 public:
  GridFunction() = default;

  explicit GridFunction(const Mesh& mesh, double fill = 0.0)
      : values_(static_cast<std::size_t>(mesh.node_count()), fill), mesh_id_(mesh.id()) {}

  GridFunction(const Mesh& mesh, std::vector<double> values)
      : values_(std::move(values)), mesh_id_(mesh.id()) {
    if (static_cast<int>(values_.size()) != mesh.node_count()) {
      throw UsageError("GridFunction: value count does not match mesh node count");
    }
  }

  int size() const { return static_cast<int>(values_.size()); }
  std::uint64_t mesh_id() const { return mesh_id_; }

  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return values_[static_cast<std::size_t>(i)]; }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool all_finite() const {
    for (double v : values_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

 private:
  std::vector<double> values_;
  std::uint64_t mesh_id_ = 0;
};

inline void require_same_mesh(const GridFunction& a, const GridFunction& b, const char* where) {
  if (a.mesh_id() != b.mesh_id() || a.size() != b.size()) {
    throw UsageError(std::string(where) + ": operands live on different meshes");
  }
}

inline void require_on_mesh(const GridFunction& a, const Mesh& mesh, const char* where) {
  if (a.mesh_id() != mesh.id() || a.size() != mesh.node_count()) {
    throw UsageError(std::string(where) + ": field does not live on the given mesh");
  }
}

inline void require_finite(const GridFunction& a, const char* where) {
  if (!a.all_finite()) {
    throw SolveError(std::string(where) + ": produced a non-finite value");
  }
}

inline GridFunction operator+(GridFunction a, const GridFunction& b) {
  require_same_mesh(a, b, "operator+");
  for (int i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline GridFunction operator-(GridFunction a, const GridFunction& b) {
  require_same_mesh(a, b, "operator-");
  for (int i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline GridFunction operator*(double s, GridFunction a) {
  for (int i = 0; i < a.size(); ++i) a[i] *= s;
  return a;
}

// y += s * x
inline void axpy(double s, const GridFunction& x, GridFunction& y) {
  require_same_mesh(x, y, "axpy");
  for (int i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

}  // namespace hpicp
