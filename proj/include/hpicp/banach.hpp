#pragma once

#include <span>

#include "hpicp/grid_function.hpp"
#include "hpicp/mesh.hpp"
#include "hpicp/penalty.hpp"

namespace hpicp {

// Conjugate exponent pair for the data space L^r. p and s are pinned to 2:
// the solution space is L^2, so J_{s*} is the identity.
struct Exponents {
  double r;
  double r_star;
  static constexpr double p = 2.0;
  static constexpr double s = 2.0;

  static Exponents make(double r);
};

// Neumaier-compensated sum; every reduction in this module goes through it.
double compensated_sum(std::span<const double> terms);

// Discrete L^r norm, (sum_i w_i |v_i|^r)^(1/r) with the lumped quadrature
// weights of the mesh.
double lr_norm(const GridFunction& v, double r, const Mesh& mesh);

// Duality mapping of L^r, pointwise |v|^(r-1) sign(v). No quadrature weights
// here; they live in pairing and lr_norm, which keeps <J_r(v), v> = ||v||_r^r
// exact in the discrete setting.
GridFunction duality_map(const GridFunction& v, double r);

// Weighted duality pairing sum_i w_i xi_i x_i.
double pairing(const GridFunction& xi, const GridFunction& x, const Mesh& mesh);

// Bregman distance D_xi Theta(z, x) = Theta(z) - Theta(x) - <xi, z - x>.
// Non-negative whenever xi is a subgradient of Theta at x.
double bregman_distance(const PenaltySpec& theta, const GridFunction& z, const GridFunction& x,
                        const GridFunction& xi, const Mesh& mesh);

}  // namespace hpicp
