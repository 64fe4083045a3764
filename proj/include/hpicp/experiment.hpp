#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hpicp/grid_function.hpp"
#include "hpicp/iterate.hpp"
#include "hpicp/mesh.hpp"
#include "hpicp/penalty.hpp"

namespace hpicp {

enum class Problem { pot1d, pot2d };
enum class NoiseModel { gaussian, outliers };

const char* to_string(Method method);
const char* to_string(Problem problem);
const char* to_string(NoiseModel model);
const char* to_string(PenaltyKind kind);
const char* to_string(StepRule rule);

struct ExperimentSpec {
  Problem problem = Problem::pot1d;
  // 1d: number of segments. 2d: triangle budget, realized as 2 n^2 with
  // n = round(sqrt(elements / 2)) lattice cells per side.
  int elements = 256;
  PenaltySpec penalty{};
  double r = 2.0;
  double tau = 1.1;
  double noise_level = 1e-3;  // relative by default: scales max|u| per node
  NoiseModel noise_model = NoiseModel::gaussian;
  double outlier_fraction = 0.02;
  double outlier_amplitude = 0.0;  // <= 0 means 10 * max|u|
  bool absolute_noise = false;
  std::uint64_t seed = 1;
  std::vector<Method> methods = {Method::hpicp, Method::licp};
  long max_iters = 200000;
  std::string output_dir = "out";
  // Constant potential around which the iterate is parameterized; the solved
  // unknown is c - background so the zero initial guess is admissible.
  double background = 2.0;
  bool parallel = false;
  StepRule step_rule = StepRule::practical;
  double mu0_override = 0.0;
  double lin_tol = 1e-10;
};

ExperimentSpec defaults_1d();
ExperimentSpec defaults_2d();

Mesh make_mesh(const ExperimentSpec& spec);

// Piecewise-constant 1d phantom: 2 + 3/4 on [-0.5,-0.3] + 3/2 on [-0.1,0.1]
// + 1/2 on [0.3,0.5], closed intervals.
GridFunction phantom_1d(const Mesh& mesh);

// 2d phantom: 1 + cos(pi x) cos(pi y) on max(|x|,|y|) < 1/2 (strict).
GridFunction phantom_2d(const Mesh& mesh);

GridFunction phantom(const ExperimentSpec& spec, const Mesh& mesh);

// Translates the spec's unit-sum-convention beta into the quadrature-weighted
// discrete setting (multiplies the l2tv beta by the mesh spacing; l2l1 and
// quadratic penalties are convention-free).
PenaltySpec effective_penalty(const ExperimentSpec& spec, const Mesh& mesh);

struct NoisyData {
  GridFunction u_delta;
  double delta_eff = 0.0;  // ||u_delta - u_true||_{L^r}, the realized noise level
};

// u_delta = u_true + scale * n with n i.i.d. standard normal from the seeded
// generator; the outlier model additionally replaces ceil(fraction * N)
// uniformly chosen nodes (without replacement) by u_true + amplitude * sign(n).
NoisyData make_noisy_data(const GridFunction& u_true, const ExperimentSpec& spec,
                          const Mesh& mesh);

// ||c - c_true||_{L^2} / ||c_true||_{L^2}; c_true = 0 is a usage error.
double relative_error(const GridFunction& c, const GridFunction& c_true, const Mesh& mesh);

struct MethodOutcome {
  Method method;
  RunHistory history;
  double re = -1.0;
  std::string directory;
};

struct ExperimentResult {
  std::vector<MethodOutcome> outcomes;
  double delta_eff = 0.0;
  int elements_built = 0;
  int exit_code = 0;  // 0 ok, 3 solver failure
};

// Runs every requested method on one noisy data set and writes, per method,
// history.csv, timings.csv, reconstruction.csv and summary.json under
// output_dir/<method>/, plus a combined re_vs_time.svg. See
// docs/output_schema.md for the exact file formats.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Runs the oracle suites and prints per-suite verdicts; true iff all passed.
// sabotage_adjoint flips the adjoint's sign first (negative control hook).
bool selftest(std::ostream& out, bool sabotage_adjoint = false);

}  // namespace hpicp
