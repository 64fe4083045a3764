#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace hpicp {

// Discrete domain: either the interval [-1,1] split into uniform P1 segments,
// or the square [-1,1]^2 on a uniform lattice with every cell split into two
// triangles along the (+1,+1) diagonal. quad_weights are the lumped P1 mass
// (row sums of the consistent mass matrix); they sum to the domain measure.
class Mesh {
 public:
  static Mesh interval(int elements);
  static Mesh square(int cells_per_side);

  int dimension() const { return dimension_; }
  int node_count() const { return static_cast<int>(node_x_.size()); }
  int element_count() const { return element_count_; }
  double spacing() const { return h_; }
  double measure() const { return dimension_ == 1 ? 2.0 : 4.0; }
  std::uint64_t id() const { return id_; }

  double node_x(int i) const { return node_x_[i]; }
  double node_y(int i) const { return dimension_ == 1 ? 0.0 : node_y_[i]; }
  const std::vector<double>& quad_weights() const { return quad_weights_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }

  // Lattice width (n+1) in 2d, 0 in 1d. Node (ix, iy) has index
  // iy * nodes_per_side + ix.
  int nodes_per_side() const { return nodes_per_side_; }

 private:
  Mesh() = default;

  int dimension_ = 1;
  int element_count_ = 0;
  int nodes_per_side_ = 0;
  double h_ = 0.0;
  std::uint64_t id_ = 0;
  std::vector<double> node_x_;
  std::vector<double> node_y_;
  std::vector<double> quad_weights_;
  std::vector<std::array<int, 3>> triangles_;
};

}  // namespace hpicp
