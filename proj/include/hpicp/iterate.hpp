#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hpicp/forward.hpp"
#include "hpicp/grid_function.hpp"
#include "hpicp/penalty.hpp"

namespace hpicp {

enum class Method { hpicp, licp };

// Which step-size rule drives mu and nu. g = T* J_r(res), p = 2.
//   practical   : mu = min( mu0 ||F(x)-y||^((p-1) r) / ||g||^p ,
//                           mu0 B0^{-p} ||F(x)-y||^{p-r} ),
//                 nu = min(mu, ||J_r(res)||_{r*} / ||J_r(T g)||_{r*})
//   theoretical : mu = mu0 B0^{-p} ||F(x)-y||^{p-r},
//                 nu = ||J_r(res)||_{r*} / ||J_r(T g)||_{r*}
//   fixed       : mu = fixed_mu, nu = fixed_nu
enum class StepRule { practical, theoretical, fixed };

struct SolverConfig {
  Method method = Method::hpicp;
  double r = 2.0;
  double tau = 1.1;
  double beta = 1.0;
  double mu0 = 0.0;  // <= 0 means (1 - 1/tau) / beta
  double delta_eff = 0.0;
  long max_iters = 200000;
  double nu_floor = 1e-300;
  StepRule step_rule = StepRule::practical;
  double fixed_mu = 1.0;
  double fixed_nu = 1.0;
  double b0 = 0.0;  // ||F'|| bound; <= 0 means estimate once at the start of a run
  double exact_residual_floor = 1e-12;
  int stagnation_window = 10000;
  double stagnation_decrease = 1e-14;

  double resolved_mu0() const { return mu0 > 0.0 ? mu0 : (1.0 - 1.0 / tau) / beta; }
};

struct IterationState {
  long n = 0;
  GridFunction x;
  GridFunction xi;
  GridFunction u;
  GridFunction residual;  // u - data
  GridFunction data;      // u_delta, kept so steps can refresh the residual exactly
  double res_norm = 0.0;
  double elapsed_s = 0.0;
};

// State at n = 0: x0 = 0, xi0 = initial_subgradient(penalty, 0), u = F(x0).
IterationState make_initial_state(const ForwardModel& model, const PenaltySpec& penalty,
                                  const GridFunction& u_delta, double r);

// (J_r(u - u_delta), ||u - u_delta||_{L^r}).
std::pair<GridFunction, double> residual_dual(const GridFunction& u, const GridFunction& u_delta,
                                              double r, const Mesh& mesh);

struct StepSizes {
  double mu = 0.0;
  double nu = 0.0;
  bool stagnated = false;  // gradient annihilated while the residual is nonzero
};

// Step sizes at the given state. Performs its own PDE solves; the step
// functions below share those solves internally instead of calling this.
StepSizes step_sizes(const IterationState& state, const ForwardModel& model,
                     const SolverConfig& config);

// One iteration of the two-term homotopy-perturbation update
//   xi' = xi - mu T* (2 J_r(res) - nu J_r(T T* J_r(res))),  x' = grad Theta*(xi').
IterationState hpicp_step(const IterationState& state, const ForwardModel& model,
                          const PenaltySpec& penalty, const SolverConfig& config,
                          TvProxWorkspace* workspace = nullptr);

// One Landweber-type iteration  xi' = xi - mu T* J_r(res),  x' = grad Theta*(xi').
IterationState licp_step(const IterationState& state, const ForwardModel& model,
                         const PenaltySpec& penalty, const SolverConfig& config,
                         TvProxWorkspace* workspace = nullptr);

enum class StopReason { discrepancy, max_iters, stagnation, error };

const char* to_string(StopReason reason);

struct HistoryRecord {
  long n = 0;
  double res_norm = 0.0;
  double rel_error = -1.0;  // -1 when no truth is available
  double elapsed_s = 0.0;
};

struct RunHistory {
  std::vector<HistoryRecord> records;
  StopReason stop_reason = StopReason::max_iters;
  long n_delta = -1;  // first n with res_norm <= tau * delta_eff; -1 if never reached
  GridFunction reconstruction;
  double total_seconds = 0.0;
  std::string error_message;
};

// Full outer iteration under the discrepancy principle: stop at the first n
// with ||F(x_n) - u_delta|| <= tau * delta_eff (or at the absolute residual
// floor when delta_eff = 0), at max_iters, or on stagnation. Step errors are
// caught and recorded in stop_reason/error_message. When x_truth is given,
// each record carries ||x_n - x_truth|| / denom with denom = re_denominator
// if positive, else ||x_truth|| (both in the weighted L^2 norm).
RunHistory run(const SolverConfig& config, const ForwardModel& model, const PenaltySpec& penalty,
               const GridFunction& u_delta, const GridFunction* x_truth = nullptr,
               double re_denominator = 0.0);

}  // namespace hpicp
