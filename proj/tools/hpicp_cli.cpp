#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hpicp/experiment.hpp"
#include "hpicp/io.hpp"

namespace {

struct EnumStrings {
  std::string penalty;
  std::string noise_model = "gaussian";
  std::string method = "both";
  std::string step_rule = "practical";
};

void add_experiment_options(CLI::App* cmd, hpicp::ExperimentSpec& spec, EnumStrings& strings) {
  strings.penalty = hpicp::to_string(spec.penalty.kind);
  cmd->set_config("--config", "", "flat key = value configuration file");
  cmd->add_option("--elements", spec.elements,
                  "mesh resolution: segments in 1d, triangle budget in 2d")
      ->capture_default_str();
  cmd->add_option("--penalty", strings.penalty, "convex penalty: l2l1 or l2tv")
      ->capture_default_str();
  cmd->add_option("--beta", spec.penalty.beta, "penalty weight beta")->capture_default_str();
  cmd->add_option("--tv-inner-max-iters", spec.penalty.tv_inner_max_iters,
                  "FISTA budget per outer iteration")
      ->capture_default_str();
  cmd->add_option("--tv-inner-tol", spec.penalty.tv_inner_tol,
                  "FISTA relative dual-objective change tolerance")
      ->capture_default_str();
  cmd->add_option("--r", spec.r, "data-space exponent r > 1")->capture_default_str();
  cmd->add_option("--tau", spec.tau, "discrepancy principle factor tau > 1")
      ->capture_default_str();
  cmd->add_option("--noise-level", spec.noise_level, "noise level delta")->capture_default_str();
  cmd->add_option("--noise-model", strings.noise_model, "gaussian or outliers")
      ->capture_default_str();
  cmd->add_option("--outlier-fraction", spec.outlier_fraction, "fraction of outlier nodes")
      ->capture_default_str();
  cmd->add_option("--outlier-amplitude", spec.outlier_amplitude,
                  "outlier amplitude (0: 10x max |u|)")
      ->capture_default_str();
  cmd->add_flag("--absolute-noise", spec.absolute_noise,
                "treat the noise level as absolute instead of relative to max |u|");
  cmd->add_option("--seed", spec.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--method", strings.method, "hpicp, licp or both")->capture_default_str();
  cmd->add_option("--max-iters", spec.max_iters, "outer iteration cap")->capture_default_str();
  cmd->add_option("--out", spec.output_dir, "output directory")->capture_default_str();
  cmd->add_option("--background", spec.background,
                  "constant potential around which the unknown is parameterized")
      ->capture_default_str();
  cmd->add_flag("--parallel", spec.parallel, "run the method variants concurrently");
  cmd->add_option("--step-rule", strings.step_rule, "practical or theoretical step sizes")
      ->capture_default_str();
  cmd->add_option("--mu0", spec.mu0_override, "override mu0 (0: (1 - 1/tau)/beta)")
      ->capture_default_str();
  cmd->add_option("--lin-tol", spec.lin_tol, "linear solver relative tolerance (2d CG)")
      ->capture_default_str();
}

void resolve_enums(hpicp::ExperimentSpec& spec, const EnumStrings& strings) {
  if (strings.penalty == "l2l1") {
    spec.penalty.kind = hpicp::PenaltyKind::l2l1;
  } else if (strings.penalty == "l2tv") {
    spec.penalty.kind = hpicp::PenaltyKind::l2tv;
  } else {
    throw hpicp::ConfigError("unknown penalty '" + strings.penalty + "' (use l2l1 or l2tv)");
  }
  if (strings.noise_model == "gaussian") {
    spec.noise_model = hpicp::NoiseModel::gaussian;
  } else if (strings.noise_model == "outliers") {
    spec.noise_model = hpicp::NoiseModel::outliers;
  } else {
    throw hpicp::ConfigError("unknown noise model '" + strings.noise_model + "'");
  }
  if (strings.method == "hpicp") {
    spec.methods = {hpicp::Method::hpicp};
  } else if (strings.method == "licp") {
    spec.methods = {hpicp::Method::licp};
  } else if (strings.method == "both") {
    spec.methods = {hpicp::Method::hpicp, hpicp::Method::licp};
  } else {
    throw hpicp::ConfigError("unknown method '" + strings.method + "' (use hpicp, licp, both)");
  }
  if (strings.step_rule == "practical") {
    spec.step_rule = hpicp::StepRule::practical;
  } else if (strings.step_rule == "theoretical") {
    spec.step_rule = hpicp::StepRule::theoretical;
  } else {
    throw hpicp::ConfigError("unknown step rule '" + strings.step_rule + "'");
  }
}

int report_result(const hpicp::ExperimentResult& result) {
  for (const auto& outcome : result.outcomes) {
    std::cout << hpicp::to_string(outcome.method) << ": stop=" << to_string(outcome.history.stop_reason)
              << " n_delta=" << outcome.history.n_delta << " re=" << outcome.re
              << " time_s=" << outcome.history.total_seconds;
    if (!outcome.history.error_message.empty()) {
      std::cout << " error=\"" << outcome.history.error_message << '"';
    }
    std::cout << '\n';
  }
  std::cout << "delta_eff=" << result.delta_eff << " elements=" << result.elements_built << '\n';
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterative regularization for elliptic potential identification "
               "(homotopy-perturbation and Landweber iterations with convex penalties)"};
  app.require_subcommand(1);

  hpicp::ExperimentSpec spec1d = hpicp::defaults_1d();
  hpicp::ExperimentSpec spec2d = hpicp::defaults_2d();
  EnumStrings strings1d, strings2d, strings_sweep;

  CLI::App* run1d = app.add_subcommand("run-1d", "potential identification on [-1,1]");
  add_experiment_options(run1d, spec1d, strings1d);

  CLI::App* run2d = app.add_subcommand("run-2d", "potential identification on [-1,1]^2");
  add_experiment_options(run2d, spec2d, strings2d);

  hpicp::ExperimentSpec spec_sweep = hpicp::defaults_1d();
  spec_sweep.output_dir = "out-sweep";
  std::string sweep_problem = "pot1d";
  std::vector<double> sweep_betas{20.0};
  std::vector<double> sweep_deltas{1e-3};
  CLI::App* sweep = app.add_subcommand("sweep", "grid over beta and noise level");
  add_experiment_options(sweep, spec_sweep, strings_sweep);
  sweep->add_option("--problem", sweep_problem, "pot1d or pot2d")->capture_default_str();
  sweep->add_option("--betas", sweep_betas, "beta values")->expected(-1);
  sweep->add_option("--deltas", sweep_deltas, "noise levels")->expected(-1);

  bool negate_adjoint = false;
  CLI::App* selftest = app.add_subcommand("selftest", "run the oracle suites");
  selftest->add_flag("--negate-adjoint", negate_adjoint, "sabotage hook: flip the adjoint sign")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (selftest->parsed()) {
      const bool ok = hpicp::selftest(std::cout, negate_adjoint);
      std::cout << (ok ? "selftest: all suites passed\n" : "selftest: FAILURES\n");
      return ok ? 0 : 4;
    }
    if (run1d->parsed()) {
      resolve_enums(spec1d, strings1d);
      return report_result(hpicp::run_experiment(spec1d));
    }
    if (run2d->parsed()) {
      resolve_enums(spec2d, strings2d);
      return report_result(hpicp::run_experiment(spec2d));
    }
    if (sweep->parsed()) {
      resolve_enums(spec_sweep, strings_sweep);
      if (sweep_problem == "pot2d") {
        hpicp::ExperimentSpec base = hpicp::defaults_2d();
        base.output_dir = spec_sweep.output_dir;
        base.seed = spec_sweep.seed;
        base.methods = spec_sweep.methods;
        base.max_iters = spec_sweep.max_iters;
        spec_sweep = base;
        resolve_enums(spec_sweep, strings_sweep);
      } else if (sweep_problem != "pot1d") {
        throw hpicp::ConfigError("unknown problem '" + sweep_problem + "'");
      }

      namespace fs = std::filesystem;
      fs::create_directories(spec_sweep.output_dir);
      std::ofstream table(spec_sweep.output_dir + "/sweep_summary.csv", std::ios::binary);
      table << "problem,method,beta,delta,n_delta,re,time_s,stop_reason,delta_eff\n";
      int exit_code = 0;
      for (double beta : sweep_betas) {
        for (double delta : sweep_deltas) {
          hpicp::ExperimentSpec cell = spec_sweep;
          cell.penalty.beta = beta;
          cell.noise_level = delta;
          cell.output_dir = spec_sweep.output_dir + "/beta_" + std::to_string(beta) +
                            "_delta_" + std::to_string(delta);
          std::cout << "sweep cell beta=" << beta << " delta=" << delta << '\n';
          const hpicp::ExperimentResult result = hpicp::run_experiment(cell);
          exit_code = std::max(exit_code, report_result(result));
          for (const auto& outcome : result.outcomes) {
            table << sweep_problem << ',' << hpicp::to_string(outcome.method) << ','
                  << hpicp::io::format17(beta) << ',' << hpicp::io::format17(delta) << ','
                  << outcome.history.n_delta << ',' << hpicp::io::format17(outcome.re) << ','
                  << hpicp::io::format17(outcome.history.total_seconds) << ','
                  << to_string(outcome.history.stop_reason) << ','
                  << hpicp::io::format17(result.delta_eff) << '\n';
          }
        }
      }
      return exit_code;
    }
  } catch (const hpicp::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const hpicp::Error& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
