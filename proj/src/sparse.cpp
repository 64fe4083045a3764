#include "hpicp/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace hpicp {

CsrMatrix csr_from_triplets(int n, std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m;
  m.n = n;
  m.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  m.diag.assign(static_cast<std::size_t>(n), 0.0);
  std::size_t k = 0;
  while (k < triplets.size()) {
    const int row = triplets[k].row;
    const int col = triplets[k].col;
    double acc = 0.0;
    while (k < triplets.size() && triplets[k].row == row && triplets[k].col == col) {
      acc += triplets[k].value;
      ++k;
    }
    m.col.push_back(col);
    m.val.push_back(acc);
    ++m.row_ptr[row + 1];
    if (row == col) m.diag[row] = acc;
  }
  for (int i = 0; i < n; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
  return m;
}

std::vector<double> solve_tridiagonal(std::vector<double> diag, std::vector<double> off,
                                      std::vector<double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return rhs;
  double scale = 0.0;
  for (double v : diag) scale = std::max(scale, std::abs(v));
  const double pivot_floor = 1e-14 * std::max(scale, 1.0);

  for (std::size_t i = 1; i < n; ++i) {
    if (!(diag[i - 1] > pivot_floor)) {
      throw SolveError("solve_tridiagonal: system is singular or indefinite");
    }
    const double m = off[i - 1] / diag[i - 1];
    diag[i] -= m * off[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  if (!(diag[n - 1] > pivot_floor)) {
    throw SolveError("solve_tridiagonal: system is singular or indefinite");
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] = (rhs[i] - off[i] * rhs[i + 1]) / diag[i];
  }
  return rhs;
}

}  // namespace hpicp
