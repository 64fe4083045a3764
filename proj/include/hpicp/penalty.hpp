#pragma once

#include <cstdint>
#include <vector>

#include "hpicp/grid_function.hpp"
#include "hpicp/mesh.hpp"

namespace hpicp {

// Which convex penalty Theta is in force.
//   quadratic : (1/2beta) ||x||_L2^2            (Hilbert reduction mode)
//   l2l1      : (1/2beta) ||x||_L2^2 + ||x||_L1 (sparsity)
//   l2tv      : (1/2beta) ||x||_L2^2 + TV(x)    (piecewise constant)
enum class PenaltyKind { quadratic, l2l1, l2tv };

struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::l2tv;
  double beta = 1.0;
  int tv_inner_max_iters = 500;
  double tv_inner_tol = 1e-6;
};

// Penalty value, with the integrals evaluated by the mesh quadrature and the
// TV term by tv_seminorm.
double theta_value(const PenaltySpec& spec, const GridFunction& x, const Mesh& mesh);

// Discrete total variation. 1d: sum of |x_{i+1} - x_i|. 2d: isotropic,
// sum over nodes of h * sqrt(dx^2 + dy^2) with forward differences on the
// lattice and zero padding at the top/right boundary.
double tv_seminorm(const GridFunction& x, const Mesh& mesh);

// Valid subgradient at the initial guess. Only x0 = 0 is supported, where
// xi0 = 0 belongs to the subdifferential of every penalty kind.
GridFunction initial_subgradient(const PenaltySpec& spec, const GridFunction& x0);

// Warm-start state for the dual FISTA solves. One instance per solver; the
// dual variable from the previous call seeds the next one.
class TvProxWorkspace {
 public:
  void reset() {
    px_.clear();
    py_.clear();
    warm_ = false;
  }
  int last_iterations() const { return last_iterations_; }

 private:
  friend GridFunction fista_rof(const GridFunction&, double, const Mesh&, int, double,
                                TvProxWorkspace*);
  std::vector<double> px_;
  std::vector<double> py_;
  bool warm_ = false;
  std::uint64_t mesh_id_ = 0;
  int last_iterations_ = 0;
};

// Approximate minimizer of  weight * TV(x) + 1/2 ||x - data||_L2^2  computed
// by FISTA on the dual problem with adaptive restart. Stops when the duality
// gap drops below tol relative to the problem energy (the gap
// certifies the primal error directly, which a dual-objective change test
// does not); throws ConvergenceError (carrying the last iterate and its
// duality gap) if max_iters is exhausted first.
GridFunction fista_rof(const GridFunction& data, double weight, const Mesh& mesh, int max_iters,
                       double tol, TvProxWorkspace* workspace = nullptr);

// The conjugate gradient map x = argmin_z { Theta(z) - <xi, z> }.
//   quadratic : x = beta * xi
//   l2l1      : pointwise soft threshold  beta * (xi -+ 1)
//   l2tv      : ROF model  argmin beta TV(x) + 1/2 ||x - beta xi||_L2^2
GridFunction conjugate_grad(const PenaltySpec& spec, const GridFunction& xi, const Mesh& mesh,
                            TvProxWorkspace* workspace = nullptr);

}  // namespace hpicp
