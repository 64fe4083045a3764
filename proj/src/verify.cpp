#include "hpicp/verify.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "hpicp/banach.hpp"
#include "hpicp/forward.hpp"
#include "hpicp/iterate.hpp"
#include "hpicp/penalty.hpp"
#include "hpicp/rng.hpp"

namespace hpicp::verify {

namespace {

std::string format_detail(const char* label, double value) {
  std::ostringstream os;
  os << label << " " << value;
  return os.str();
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

struct Timer {
  double t0 = now_seconds();
  double stop() const { return now_seconds() - t0; }
};

GridFunction random_field(const Mesh& mesh, NormalSampler& rng, double offset = 0.0,
                          double scale = 1.0) {
  GridFunction v(mesh);
  for (int i = 0; i < v.size(); ++i) v[i] = offset + scale * rng.next();
  return v;
}

GridFunction bump_truth(const Mesh& mesh) {
  GridFunction v(mesh);
  for (int i = 0; i < v.size(); ++i) {
    const double x = mesh.node_x(i);
    double value = 0.0;
    if (x >= -0.5 && x <= -0.3) value += 0.75;
    if (x >= -0.1 && x <= 0.1) value += 1.5;
    if (x >= 0.3 && x <= 0.5) value += 0.5;
    v[i] = value;
  }
  return v;
}

}  // namespace

std::vector<double> taut_string_tv_prox(const std::vector<double>& data,
                                        const std::vector<double>& weights, double lambda) {
  const int n = static_cast<int>(data.size());
  if (n == 0) return {};
  if (n == 1 || lambda == 0.0) return data;

  // Cumulative abscissae and data string: the solution string must stay in
  // the tube [G - lambda, G + lambda], pinned at (0,0) and (t_N, G_N); the
  // per-node values are its slopes with respect to t.
  std::vector<double> t(static_cast<std::size_t>(n) + 1, 0.0),
      g(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    t[i + 1] = t[i] + weights[i];
    g[i + 1] = g[i] + weights[i] * data[i];
  }

  std::vector<double> z(static_cast<std::size_t>(n), 0.0);
  int anchor = 0;
  double za = 0.0;

  auto emit = [&](int upto, double slope) {
    for (int i = anchor; i < upto; ++i) z[i] = slope;
  };

  while (anchor < n) {
    double smax = std::numeric_limits<double>::infinity();
    double smin = -std::numeric_limits<double>::infinity();
    int jmax = -1, jmin = -1;
    bool contact = false;

    for (int j = anchor + 1; j <= n; ++j) {
      const double dt = t[j] - t[anchor];
      const double upper = (j == n) ? g[n] : g[j] + lambda;
      const double lower = (j == n) ? g[n] : g[j] - lambda;
      const double su = (upper - za) / dt;
      const double sl = (lower - za) / dt;

      if (su < smin) {
        // Ceiling dips below the binding floor chord: touch the floor.
        emit(jmin, smin);
        anchor = jmin;
        za = g[jmin] - lambda;
        contact = true;
        break;
      }
      if (sl > smax) {
        // Floor rises above the binding ceiling chord: touch the ceiling.
        emit(jmax, smax);
        anchor = jmax;
        za = g[jmax] + lambda;
        contact = true;
        break;
      }
      if (su < smax) {
        smax = su;
        jmax = j;
      }
      if (sl > smin) {
        smin = sl;
        jmin = j;
      }
    }
    if (!contact) {
      // The straight chord to the pinned end is feasible against every bound.
      emit(n, (g[n] - za) / (t[n] - t[anchor]));
      anchor = n;
    }
  }
  return z;
}

double tv_prox_kkt_residual(const std::vector<double>& data, const std::vector<double>& weights,
                            double lambda, const std::vector<double>& z) {
  const int n = static_cast<int>(data.size());
  if (n == 0) return 0.0;
  double dmax = 0.0;
  for (double v : data) dmax = std::max(dmax, std::abs(v));
  const double jump_tol = 1e-9 * (1.0 + dmax);

  double violation = 0.0;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    s += weights[k] * (z[k] - data[k]);
    if (k + 1 < n) {
      violation = std::max(violation, std::abs(s) - lambda);
      // Stationarity: sum_{i<=k} w_i (z_i - d_i) = +lambda sign(z_{k+1} - z_k)
      // wherever the jump is nonzero.
      const double jump = z[k + 1] - z[k];
      if (std::abs(jump) > jump_tol) {
        violation = std::max(violation, std::abs(s - lambda * (jump > 0 ? 1.0 : -1.0)));
      }
    } else {
      violation = std::max(violation, std::abs(s));
    }
  }
  return violation;
}

SuiteResult adjoint_suite(bool sabotage_sign) {
  Timer timer;
  const Mesh mesh = Mesh::interval(64);
  const ForwardModel model(mesh, GridFunction(mesh, 1.0));
  NormalSampler rng(0x5eed0001ULL);

  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    GridFunction c(mesh);
    for (int i = 0; i < c.size(); ++i) c[i] = 0.5 + std::abs(rng.next());
    const GridFunction h = random_field(mesh, rng);
    const GridFunction zeta = random_field(mesh, rng);
    const GridFunction u_c = model.forward(c);
    const GridFunction th = model.derivative_apply(c, u_c, h);
    GridFunction g = model.adjoint_apply(c, u_c, zeta);
    if (sabotage_sign) g = -1.0 * g;
    const double lhs = pairing(zeta, th, mesh);
    const double rhs = pairing(g, h, mesh);
    const double scale = lr_norm(zeta, 2.0, mesh) * lr_norm(th, 2.0, mesh) +
                         lr_norm(g, 2.0, mesh) * lr_norm(h, 2.0, mesh) + 1e-300;
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return {"adjoint-identity", worst <= 1e-10, format_detail("max rel mismatch", worst),
          timer.stop()};
}

SuiteResult gradient_suite() {
  Timer timer;
  const Mesh mesh = Mesh::interval(64);
  const ForwardModel model(mesh, GridFunction(mesh, 1.0));
  NormalSampler rng(0x5eed0002ULL);
  const double epsilons[3] = {1e-2, 1e-3, 1e-4};

  bool ok = true;
  double worst_ratio_low = 100.0, worst_ratio_high = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    GridFunction c(mesh);
    for (int i = 0; i < c.size(); ++i) c[i] = 1.0 + std::abs(rng.next());
    const GridFunction h = random_field(mesh, rng);
    const GridFunction u = model.forward(c);
    const GridFunction w = model.derivative_apply(c, u, h);

    double remainder[3];
    for (int k = 0; k < 3; ++k) {
      const double eps = epsilons[k];
      GridFunction c_eps = c;
      axpy(eps, h, c_eps);
      const GridFunction u_eps = model.forward(c_eps);
      GridFunction lin = u;
      axpy(eps, w, lin);
      remainder[k] = lr_norm(u_eps - lin, 2.0, mesh) / lr_norm(eps * w, 2.0, mesh);
    }
    for (int k = 0; k + 1 < 3; ++k) {
      const double ratio = remainder[k] / remainder[k + 1];
      worst_ratio_low = std::min(worst_ratio_low, ratio);
      worst_ratio_high = std::max(worst_ratio_high, ratio);
      if (ratio < 8.0 || ratio > 12.0) ok = false;
    }
  }
  std::ostringstream os;
  os << "remainder decay ratios in [" << worst_ratio_low << ", " << worst_ratio_high << "]";
  return {"frechet-derivative-fd", ok, os.str(), timer.stop()};
}

SuiteResult manufactured_suite() {
  Timer timer;
  const double pi = 3.14159265358979323846;
  double errors[3];
  const int sizes[3] = {32, 64, 128};
  for (int k = 0; k < 3; ++k) {
    const Mesh mesh = Mesh::interval(sizes[k]);
    GridFunction f(mesh), exact(mesh);
    for (int i = 0; i < mesh.node_count(); ++i) {
      const double x = mesh.node_x(i);
      exact[i] = std::cos(pi * x);
      f[i] = (pi * pi + 1.0) * std::cos(pi * x);
    }
    const ForwardModel model(mesh, f);
    const GridFunction u = model.forward(GridFunction(mesh, 1.0));
    errors[k] = lr_norm(u - exact, 2.0, mesh);
  }
  const double r1 = errors[0] / errors[1];
  const double r2 = errors[1] / errors[2];
  std::ostringstream os;
  os << "error ratios per halving " << r1 << ", " << r2;
  return {"manufactured-solution", r1 >= 3.5 && r2 >= 3.5, os.str(), timer.stop()};
}

SuiteResult prox_oracle_suite() {
  Timer timer;
  const Mesh mesh = Mesh::interval(7);  // 8 nodes
  NormalSampler rng(0x5eed0003ULL);

  bool soft_ok = true;
  double tv_worst = 0.0, kkt_worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double beta = trial % 2 == 0 ? 0.7 : 1.5;
    const GridFunction xi = random_field(mesh, rng, 0.0, 2.0);

    // Case I closed form, recomputed inline.
    PenaltySpec l1{PenaltyKind::l2l1, beta, 500, 1e-6};
    const GridFunction soft = conjugate_grad(l1, xi, mesh);
    for (int i = 0; i < xi.size(); ++i) {
      double expected = 0.0;
      if (xi[i] > 1.0) expected = beta * (xi[i] - 1.0);
      if (xi[i] < -1.0) expected = beta * (xi[i] + 1.0);
      if (soft[i] != expected) soft_ok = false;
    }

    // ROF prox against the taut-string oracle.
    PenaltySpec tv{PenaltyKind::l2tv, beta, 200000, 1e-13};
    const GridFunction via_fista = conjugate_grad(tv, xi, mesh);
    const GridFunction scaled = beta * xi;
    const std::vector<double> oracle =
        taut_string_tv_prox(scaled.values(), mesh.quad_weights(), beta);
    kkt_worst = std::max(
        kkt_worst, tv_prox_kkt_residual(scaled.values(), mesh.quad_weights(), beta, oracle));
    for (int i = 0; i < via_fista.size(); ++i) {
      tv_worst = std::max(tv_worst, std::abs(via_fista[i] - oracle[i]));
    }
  }
  std::ostringstream os;
  os << "soft threshold exact: " << (soft_ok ? "yes" : "no") << ", tv prox max dev " << tv_worst
     << ", oracle kkt " << kkt_worst;
  return {"prox-oracle", soft_ok && tv_worst <= 1e-5 && kkt_worst <= 1e-10, os.str(),
          timer.stop()};
}

SuiteResult hilbert_reduction_suite() {
  Timer timer;
  const Mesh mesh = Mesh::interval(16);
  const ForwardModel model(mesh, GridFunction(mesh, 1.0));
  NormalSampler rng(0x5eed0004ULL);
  const PenaltySpec quad{PenaltyKind::quadratic, 1.0, 500, 1e-6};
  SolverConfig config;
  config.r = 2.0;
  config.step_rule = StepRule::fixed;
  config.fixed_mu = 1.0;
  config.fixed_nu = 1.0;

  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    GridFunction x(mesh);
    for (int i = 0; i < x.size(); ++i) x[i] = 0.8 + 0.4 * rng.engine().uniform01();
    IterationState state;
    state.x = x;
    state.xi = x;  // with beta = 1, grad Theta*(xi) = xi
    state.u = model.forward(x);
    state.data = state.u + random_field(mesh, rng, 0.0, 0.05);
    state.residual = state.u - state.data;
    state.res_norm = lr_norm(state.residual, 2.0, mesh);

    const GridFunction res = state.residual;
    const GridFunction a = model.adjoint_apply(x, state.u, res);
    const GridFunction ta = model.derivative_apply(x, state.u, a);
    const GridFunction tta = model.adjoint_apply(x, state.u, ta);

    config.method = Method::hpicp;
    const IterationState hp = hpicp_step(state, model, quad, config);
    GridFunction ref = x - 2.0 * a + tta;  // x - T*(2I - T T*) res
    double rel = lr_norm(hp.x - ref, 2.0, mesh) / (lr_norm(ref, 2.0, mesh) + 1e-300);
    worst = std::max(worst, rel);

    config.method = Method::licp;
    const IterationState lw = licp_step(state, model, quad, config);
    ref = x - a;  // classical Landweber
    rel = lr_norm(lw.x - ref, 2.0, mesh) / (lr_norm(ref, 2.0, mesh) + 1e-300);
    worst = std::max(worst, rel);
  }
  return {"hilbert-reduction", worst <= 1e-12, format_detail("max rel deviation", worst),
          timer.stop()};
}

SuiteResult monotonicity_suite() {
  Timer timer;
  const Mesh mesh = Mesh::interval(64);
  const ForwardModel model(mesh, GridFunction(mesh, 1.0), 0.0, 1e-10, 2.0);
  const GridFunction truth = bump_truth(mesh);
  const GridFunction u_exact = model.forward(truth);

  double worst_increase = 0.0;
  bool ok = true;
  for (Method method : {Method::hpicp, Method::licp}) {
    for (PenaltyKind kind : {PenaltyKind::l2tv, PenaltyKind::l2l1}) {
      PenaltySpec penalty{kind, 1.0, 100000, 1e-12};
      SolverConfig config;
      config.method = method;
      config.r = 2.0;
      config.tau = 1.1;
      config.beta = penalty.beta;
      TvProxWorkspace workspace;
      IterationState state = make_initial_state(model, penalty, u_exact, config.r);
      double d_prev = bregman_distance(penalty, truth, state.x, state.xi, mesh);
      for (int n = 0; n < 100; ++n) {
        state = method == Method::hpicp ? hpicp_step(state, model, penalty, config, &workspace)
                                        : licp_step(state, model, penalty, config, &workspace);
        const double d = bregman_distance(penalty, truth, state.x, state.xi, mesh);
        const double increase = d - d_prev * (1.0 + 1e-12);
        if (increase > 1e-300) {
          ok = false;
          worst_increase = std::max(worst_increase, increase / std::max(d_prev, 1e-300));
        }
        d_prev = d;
      }
    }
  }
  return {"bregman-monotonicity", ok, format_detail("max rel increase", worst_increase),
          timer.stop()};
}

std::vector<SuiteResult> run_all(bool sabotage_adjoint) {
  return {adjoint_suite(sabotage_adjoint), gradient_suite(),    manufactured_suite(),
          prox_oracle_suite(),             hilbert_reduction_suite(), monotonicity_suite()};
}

bool report(std::ostream& out, const std::vector<SuiteResult>& results) {
  bool all = true;
  for (const auto& r : results) {
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " - " << r.detail << " ("
        << r.seconds << " s)\n";
    all = all && r.passed;
  }
  return all;
}

}  // namespace hpicp::verify
