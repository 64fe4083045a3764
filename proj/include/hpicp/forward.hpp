#pragma once

#include "hpicp/grid_function.hpp"
#include "hpicp/mesh.hpp"
#include "hpicp/sparse.hpp"

namespace hpicp {

enum class LinearSolverKind { direct_tridiagonal, conjugate_gradient };

// The parameter-to-state map F(c) = u(c) of the Neumann problem
//   -Laplace(u) + (background + c) u = f  in Omega,   du/dn = 0  on the boundary,
// discretized with P1 elements and lumped mass:
//   (K + M diag(background + c)) u = M f.
// 1d systems are solved by an exact tridiagonal factorization, 2d systems by
// Jacobi-preconditioned conjugate gradients to lin_tol relative residual.
//
// `background` shifts the potential so that the iterate c can start at zero
// while the discrete operator stays nonsingular; `c_floor` records the
// admissible-set floor but is never enforced (iterates may dip below it, and
// solves only fail when the operator itself degenerates).
class ForwardModel {
 public:
  ForwardModel(Mesh mesh, GridFunction source, double c_floor = 0.0, double lin_tol = 1e-10,
               double background = 0.0);

  const Mesh& mesh() const { return mesh_; }
  const GridFunction& source() const { return f_; }
  double c_floor() const { return c_floor_; }
  double lin_tol() const { return lin_tol_; }
  double background() const { return background_; }
  LinearSolverKind linear_solver() const { return solver_; }

  // u(c); throws SolveError for a singular/indefinite system (e.g. the total
  // potential identically zero) and ConvergenceError if CG stalls.
  GridFunction forward(const GridFunction& c) const;

  // w = F'(c) h, solving (K + M diag(background + c)) w = -M (h .* u_c).
  // u_c must be forward(c).
  GridFunction derivative_apply(const GridFunction& c, const GridFunction& u_c,
                                const GridFunction& h) const;

  // g = F'(c)^* zeta in the weighted pairing: solve
  // (K + M diag(background + c)) psi = M zeta, then g = -u_c .* psi.
  GridFunction adjoint_apply(const GridFunction& c, const GridFunction& u_c,
                             const GridFunction& zeta) const;

  // Estimate of ||F'(c)|| by 20 rounds of power iteration on F'(c)^* F'(c).
  // Diagnostic only; the practical step sizes do not need it.
  double operator_norm_bound(const GridFunction& c) const;

 private:
  GridFunction solve_shifted(const GridFunction& c, std::vector<double> rhs) const;

  Mesh mesh_;
  GridFunction f_;
  double c_floor_;
  double lin_tol_;
  double background_;
  LinearSolverKind solver_;
  CsrMatrix stiffness_;
  int cg_max_iters_;
};

}  // namespace hpicp
