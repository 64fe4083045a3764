#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "hpicp/errors.hpp"

namespace hpicp {

// Compressed sparse rows, symmetric by construction (both triangles stored).
struct CsrMatrix {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;
  std::vector<double> diag;

  void multiply(const std::vector<double>& x, std::vector<double>& y) const {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k] * x[col[k]];
      y[i] = acc;
    }
  }
};

struct Triplet {
  int row;
  int col;
  double value;
};

CsrMatrix csr_from_triplets(int n, std::vector<Triplet> triplets);

// Thomas factorization of a symmetric tridiagonal system. Requires positive
// pivots (the assembled operators are SPD when the potential is admissible);
// a vanishing or negative pivot raises SolveError.
std::vector<double> solve_tridiagonal(std::vector<double> diag, std::vector<double> off,
                                      std::vector<double> rhs);

struct PcgResult {
  int iterations = 0;
  double rel_residual = 0.0;
};

// Jacobi-preconditioned conjugate gradients for an SPD operator given as a
// matvec callable. Stops at ||b - Ax||_2 <= tol * ||b||_2.
template <class MatVec>
PcgResult pcg_jacobi(int n, MatVec&& apply, const std::vector<double>& diag,
                     const std::vector<double>& b, std::vector<double>& x, double tol,
                     int max_iters) {
  std::vector<double> r(b), z(static_cast<std::size_t>(n)), p(static_cast<std::size_t>(n)),
      q(static_cast<std::size_t>(n));

  double b_norm2 = 0.0;
  for (double v : b) b_norm2 += v * v;
  const double b_norm = std::sqrt(b_norm2);
  if (b_norm == 0.0) {
    x.assign(static_cast<std::size_t>(n), 0.0);
    return {0, 0.0};
  }

  std::vector<double> inv_diag(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (!(diag[i] > 0.0)) throw SolveError("pcg_jacobi: operator diagonal is not positive");
    inv_diag[i] = 1.0 / diag[i];
  }

  x.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rho = 0.0;
  for (int i = 0; i < n; ++i) rho += r[i] * z[i];

  double r_norm = b_norm;
  for (int it = 1; it <= max_iters; ++it) {
    apply(p, q);
    double pq = 0.0;
    for (int i = 0; i < n; ++i) pq += p[i] * q[i];
    if (!(pq > 0.0)) throw SolveError("pcg_jacobi: operator is singular or indefinite");
    const double alpha = rho / pq;
    double rr = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
      rr += r[i] * r[i];
    }
    r_norm = std::sqrt(rr);
    if (r_norm <= tol * b_norm) return {it, r_norm / b_norm};
    double rho_next = 0.0;
    for (int i = 0; i < n; ++i) {
      z[i] = inv_diag[i] * r[i];
      rho_next += r[i] * z[i];
    }
    const double beta = rho_next / rho;
    rho = rho_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw ConvergenceError("pcg_jacobi: no convergence within the iteration budget",
                         r_norm / b_norm, max_iters, x);
}

}  // namespace hpicp
