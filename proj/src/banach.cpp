#include "hpicp/banach.hpp"

#include <cmath>

namespace hpicp {

Exponents Exponents::make(double r) {
  if (!(r > 1.0)) throw UsageError("Exponents: r must exceed 1");
  return Exponents{r, r / (r - 1.0)};
}

double compensated_sum(std::span<const double> terms) {
  double sum = 0.0;
  double compensation = 0.0;
  for (double t : terms) {
    const double next = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      compensation += (sum - next) + t;
    } else {
      compensation += (t - next) + sum;
    }
    sum = next;
  }
  return sum + compensation;
}

double lr_norm(const GridFunction& v, double r, const Mesh& mesh) {
  if (!(r > 1.0)) throw UsageError("lr_norm: r must exceed 1");
  require_on_mesh(v, mesh, "lr_norm");
  const auto& w = mesh.quad_weights();
  std::vector<double> terms(static_cast<std::size_t>(v.size()));
  if (r == 2.0) {
    for (int i = 0; i < v.size(); ++i) terms[i] = w[i] * v[i] * v[i];
    return std::sqrt(compensated_sum(terms));
  }
  for (int i = 0; i < v.size(); ++i) terms[i] = w[i] * std::pow(std::abs(v[i]), r);
  return std::pow(compensated_sum(terms), 1.0 / r);
}

GridFunction duality_map(const GridFunction& v, double r) {
  if (!(r > 1.0)) throw UsageError("duality_map: r must exceed 1");
  GridFunction out = v;
  if (r == 2.0) return out;
  for (int i = 0; i < out.size(); ++i) {
    const double x = v[i];
    out[i] = x == 0.0 ? 0.0 : std::pow(std::abs(x), r - 1.0) * (x > 0.0 ? 1.0 : -1.0);
  }
  return out;
}

double pairing(const GridFunction& xi, const GridFunction& x, const Mesh& mesh) {
  require_on_mesh(xi, mesh, "pairing");
  require_on_mesh(x, mesh, "pairing");
  const auto& w = mesh.quad_weights();
  std::vector<double> terms(static_cast<std::size_t>(x.size()));
  for (int i = 0; i < x.size(); ++i) terms[i] = w[i] * xi[i] * x[i];
  return compensated_sum(terms);
}

double bregman_distance(const PenaltySpec& theta, const GridFunction& z, const GridFunction& x,
                        const GridFunction& xi, const Mesh& mesh) {
  require_same_mesh(z, x, "bregman_distance");
  return theta_value(theta, z, mesh) - theta_value(theta, x, mesh) - pairing(xi, z - x, mesh);
}

}  // namespace hpicp
