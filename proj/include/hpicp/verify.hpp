#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hpicp::verify {

// Exact minimizer of  1/2 sum_i w_i (z_i - d_i)^2 + lambda sum_i |z_{i+1} - z_i|
// via the taut-string construction: the cumulative solution is the shortest
// string through the tube of half-width lambda around the cumulative data,
// pinned at both ends. Independent of the FISTA path it certifies.
std::vector<double> taut_string_tv_prox(const std::vector<double>& data,
                                        const std::vector<double>& weights, double lambda);

// Max KKT violation of a candidate solution of the same problem; a near-zero
// value certifies exactness of the oracle itself.
double tv_prox_kkt_residual(const std::vector<double>& data, const std::vector<double>& weights,
                            double lambda, const std::vector<double>& z);

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Diagnostic suites run by the selftest subcommand (1d, N = 64 scale).
SuiteResult adjoint_suite(bool sabotage_sign = false);
SuiteResult gradient_suite();
SuiteResult manufactured_suite();
SuiteResult prox_oracle_suite();
SuiteResult hilbert_reduction_suite();
SuiteResult monotonicity_suite();

std::vector<SuiteResult> run_all(bool sabotage_adjoint = false);

// Prints one verdict line per suite; true iff everything passed.
bool report(std::ostream& out, const std::vector<SuiteResult>& results);

}  // namespace hpicp::verify
