#include "hpicp/forward.hpp"

#include <cmath>

#include "hpicp/banach.hpp"

namespace hpicp {

namespace {

CsrMatrix assemble_stiffness(const Mesh& mesh) {
  std::vector<Triplet> triplets;
  if (mesh.dimension() == 1) {
    const double k = 1.0 / mesh.spacing();
    const int elements = mesh.node_count() - 1;
    triplets.reserve(static_cast<std::size_t>(elements) * 4);
    for (int e = 0; e < elements; ++e) {
      triplets.push_back({e, e, k});
      triplets.push_back({e + 1, e + 1, k});
      triplets.push_back({e, e + 1, -k});
      triplets.push_back({e + 1, e, -k});
    }
  } else {
    triplets.reserve(mesh.triangles().size() * 9);
    for (const auto& tri : mesh.triangles()) {
      const double x0 = mesh.node_x(tri[0]), y0 = mesh.node_y(tri[0]);
      const double x1 = mesh.node_x(tri[1]), y1 = mesh.node_y(tri[1]);
      const double x2 = mesh.node_x(tri[2]), y2 = mesh.node_y(tri[2]);
      const double det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
      const double area = 0.5 * std::abs(det);
      // Gradients of the barycentric basis functions.
      const double gx[3] = {(y1 - y2) / det, (y2 - y0) / det, (y0 - y1) / det};
      const double gy[3] = {(x2 - x1) / det, (x0 - x2) / det, (x1 - x0) / det};
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          triplets.push_back({tri[a], tri[b], area * (gx[a] * gx[b] + gy[a] * gy[b])});
        }
      }
    }
  }
  return csr_from_triplets(mesh.node_count(), std::move(triplets));
}

}  // namespace

ForwardModel::ForwardModel(Mesh mesh, GridFunction source, double c_floor, double lin_tol,
                           double background)
    : mesh_(std::move(mesh)),
      f_(std::move(source)),
      c_floor_(c_floor),
      lin_tol_(lin_tol),
      background_(background),
      solver_(mesh_.dimension() == 1 ? LinearSolverKind::direct_tridiagonal
                                     : LinearSolverKind::conjugate_gradient),
      stiffness_(assemble_stiffness(mesh_)),
      cg_max_iters_(20 * mesh_.node_count() + 200) {
  require_on_mesh(f_, mesh_, "ForwardModel");
  if (c_floor_ < 0.0) throw UsageError("ForwardModel: c_floor must be non-negative");
}

GridFunction ForwardModel::solve_shifted(const GridFunction& c, std::vector<double> rhs) const {
  const auto& w = mesh_.quad_weights();
  const int n = mesh_.node_count();

  bool any_nonzero = false;
  for (int i = 0; i < n; ++i) {
    if (background_ + c[i] != 0.0) {
      any_nonzero = true;
      break;
    }
  }
  if (!any_nonzero) {
    throw SolveError("forward: total potential vanishes identically, "
                     "the pure Neumann operator is singular");
  }

  if (solver_ == LinearSolverKind::direct_tridiagonal) {
    std::vector<double> diag(static_cast<std::size_t>(n)), off(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) diag[i] = stiffness_.diag[i] + w[i] * (background_ + c[i]);
    for (int i = 0; i < n; ++i) {
      for (int k = stiffness_.row_ptr[i]; k < stiffness_.row_ptr[i + 1]; ++k) {
        if (stiffness_.col[k] == i + 1) off[i] = stiffness_.val[k];
      }
    }
    return GridFunction(mesh_, solve_tridiagonal(std::move(diag), std::move(off), std::move(rhs)));
  }

  std::vector<double> diag(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) diag[i] = stiffness_.diag[i] + w[i] * (background_ + c[i]);
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    stiffness_.multiply(x, y);
    for (int i = 0; i < n; ++i) y[i] += w[i] * (background_ + c[i]) * x[i];
  };
  std::vector<double> x;
  pcg_jacobi(n, apply, diag, rhs, x, lin_tol_, cg_max_iters_);
  return GridFunction(mesh_, std::move(x));
}

GridFunction ForwardModel::forward(const GridFunction& c) const {
  require_on_mesh(c, mesh_, "forward");
  const auto& w = mesh_.quad_weights();
  std::vector<double> rhs(static_cast<std::size_t>(mesh_.node_count()));
  for (int i = 0; i < mesh_.node_count(); ++i) rhs[i] = w[i] * f_[i];
  GridFunction u = solve_shifted(c, std::move(rhs));
  require_finite(u, "forward");
  return u;
}

GridFunction ForwardModel::derivative_apply(const GridFunction& c, const GridFunction& u_c,
                                            const GridFunction& h) const {
  require_on_mesh(c, mesh_, "derivative_apply");
  require_same_mesh(u_c, h, "derivative_apply");
  const auto& w = mesh_.quad_weights();
  std::vector<double> rhs(static_cast<std::size_t>(mesh_.node_count()));
  for (int i = 0; i < mesh_.node_count(); ++i) rhs[i] = -w[i] * h[i] * u_c[i];
  GridFunction v = solve_shifted(c, std::move(rhs));
  require_finite(v, "derivative_apply");
  return v;
}

GridFunction ForwardModel::adjoint_apply(const GridFunction& c, const GridFunction& u_c,
                                         const GridFunction& zeta) const {
  require_on_mesh(c, mesh_, "adjoint_apply");
  require_same_mesh(u_c, zeta, "adjoint_apply");
  const auto& w = mesh_.quad_weights();
  std::vector<double> rhs(static_cast<std::size_t>(mesh_.node_count()));
  for (int i = 0; i < mesh_.node_count(); ++i) rhs[i] = w[i] * zeta[i];
  GridFunction psi = solve_shifted(c, std::move(rhs));
  GridFunction g(mesh_);
  for (int i = 0; i < mesh_.node_count(); ++i) g[i] = -u_c[i] * psi[i];
  require_finite(g, "adjoint_apply");
  return g;
}

double ForwardModel::operator_norm_bound(const GridFunction& c) const {
  const GridFunction u_c = forward(c);
  GridFunction v(mesh_, 1.0);
  double estimate = 0.0;
  for (int round = 0; round < 20; ++round) {
    const GridFunction tv = derivative_apply(c, u_c, v);
    const GridFunction ttv = adjoint_apply(c, u_c, tv);
    const double rayleigh = pairing(ttv, v, mesh_) / pairing(v, v, mesh_);
    estimate = std::sqrt(std::max(rayleigh, 0.0));
    const double norm = lr_norm(ttv, 2.0, mesh_);
    if (norm == 0.0) return 0.0;
    v = (1.0 / norm) * ttv;
  }
  return estimate;
}

}  // namespace hpicp
