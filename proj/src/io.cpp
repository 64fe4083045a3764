#include "hpicp/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace hpicp::io {

namespace {

void open_or_throw(std::ofstream& out, const std::string& path) {
  out.open(path, std::ios::binary);  // binary: no newline translation, byte-stable output
  if (!out) throw Error("io: cannot open " + path + " for writing");
}

}  // namespace

std::string format17(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

void write_history_csv(const std::string& path, const RunHistory& history) {
  std::ofstream out;
  open_or_throw(out, path);
  out << "n,res_norm,re\n";
  for (const auto& rec : history.records) {
    out << rec.n << ',' << format17(rec.res_norm) << ',';
    if (rec.rel_error >= 0.0) out << format17(rec.rel_error);
    out << '\n';
  }
}

void write_timings_csv(const std::string& path, const RunHistory& history) {
  std::ofstream out;
  open_or_throw(out, path);
  out << "n,elapsed_s\n";
  for (const auto& rec : history.records) {
    out << rec.n << ',' << format17(rec.elapsed_s) << '\n';
  }
}

void write_reconstruction_csv(const std::string& path, const Mesh& mesh, const GridFunction& c) {
  std::ofstream out;
  open_or_throw(out, path);
  if (mesh.dimension() == 1) {
    out << "x,c\n";
    for (int i = 0; i < mesh.node_count(); ++i) {
      out << format17(mesh.node_x(i)) << ',' << format17(c[i]) << '\n';
    }
  } else {
    out << "x,y,c\n";
    for (int i = 0; i < mesh.node_count(); ++i) {
      out << format17(mesh.node_x(i)) << ',' << format17(mesh.node_y(i)) << ','
          << format17(c[i]) << '\n';
    }
  }
}

void write_summary_json(const std::string& path, const ExperimentSpec& spec,
                        const MethodOutcome& outcome, double delta_eff, int elements_built,
                        int node_count, double h) {
  const double beta_discrete =
      spec.penalty.kind == PenaltyKind::l2tv ? spec.penalty.beta * h : spec.penalty.beta;
  nlohmann::json j;
  j["method"] = to_string(outcome.method);
  j["stop_reason"] = to_string(outcome.history.stop_reason);
  j["n_delta"] = outcome.history.n_delta;
  j["iterations"] =
      outcome.history.records.empty() ? 0 : outcome.history.records.back().n;
  j["re"] = outcome.re;
  j["time_s"] = outcome.history.total_seconds;
  j["delta_eff"] = delta_eff;
  if (!outcome.history.error_message.empty()) j["error"] = outcome.history.error_message;

  nlohmann::json s;
  s["problem"] = to_string(spec.problem);
  s["elements"] = spec.elements;
  s["elements_built"] = elements_built;
  s["nodes"] = node_count;
  s["h"] = h;
  s["penalty"] = to_string(spec.penalty.kind);
  s["beta"] = spec.penalty.beta;
  s["beta_discrete"] = beta_discrete;
  s["tv_inner_max_iters"] = spec.penalty.tv_inner_max_iters;
  s["tv_inner_tol"] = spec.penalty.tv_inner_tol;
  s["r"] = spec.r;
  s["tau"] = spec.tau;
  s["noise_level"] = spec.noise_level;
  s["noise_model"] = to_string(spec.noise_model);
  s["outlier_fraction"] = spec.outlier_fraction;
  s["outlier_amplitude"] = spec.outlier_amplitude;
  s["absolute_noise"] = spec.absolute_noise;
  s["seed"] = spec.seed;
  s["max_iters"] = spec.max_iters;
  s["output_dir"] = spec.output_dir;
  s["background"] = spec.background;
  s["parallel"] = spec.parallel;
  s["step_rule"] = to_string(spec.step_rule);
  s["mu0_override"] = spec.mu0_override;
  s["lin_tol"] = spec.lin_tol;
  j["spec"] = s;

  std::ofstream out;
  open_or_throw(out, path);
  out << j.dump(2) << '\n';
}

void write_re_time_svg(const std::string& path, const std::vector<MethodOutcome>& outcomes) {
  const double width = 720, height = 480;
  const double left = 70, right = 20, top = 20, bottom = 55;

  double t_max = 0.0, re_max = 0.0;
  for (const auto& o : outcomes) {
    for (const auto& rec : o.history.records) {
      if (rec.rel_error < 0.0) continue;
      t_max = std::max(t_max, rec.elapsed_s);
      re_max = std::max(re_max, rec.rel_error);
    }
  }
  if (t_max <= 0.0) t_max = 1.0;
  if (re_max <= 0.0) re_max = 1.0;

  auto sx = [&](double t) { return left + (width - left - right) * (t / t_max); };
  auto sy = [&](double re) { return height - bottom - (height - top - bottom) * (re / re_max); };

  std::ofstream out;
  out.open(path, std::ios::binary);
  if (!out) throw Error("io: cannot open " + path + " for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes
  out << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right
      << "\" y2=\"" << height - bottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << height - bottom << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double t = t_max * k / 5.0;
    const double re = re_max * k / 5.0;
    char label[32];
    out << "<line x1=\"" << sx(t) << "\" y1=\"" << height - bottom << "\" x2=\"" << sx(t)
        << "\" y2=\"" << height - bottom + 5 << "\" stroke=\"black\"/>\n";
    std::snprintf(label, sizeof(label), "%.3g", t);
    out << "<text x=\"" << sx(t) << "\" y=\"" << height - bottom + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">" << label << "</text>\n";
    out << "<line x1=\"" << left - 5 << "\" y1=\"" << sy(re) << "\" x2=\"" << left << "\" y2=\""
        << sy(re) << "\" stroke=\"black\"/>\n";
    std::snprintf(label, sizeof(label), "%.3g", re);
    out << "<text x=\"" << left - 8 << "\" y=\"" << sy(re) + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << label << "</text>\n";
  }
  out << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 12
      << "\" font-size=\"14\" text-anchor=\"middle\">time (s)</text>\n";
  out << "<text x=\"18\" y=\"" << (top + height - bottom) / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (top + height - bottom) / 2 << ")\">relative error</text>\n";

  int series = 0;
  for (const auto& o : outcomes) {
    const char* color = o.method == Method::hpicp ? "#1f77b4" : "#d62728";
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& rec : o.history.records) {
      if (rec.rel_error < 0.0) continue;
      out << sx(rec.elapsed_s) << ',' << sy(rec.rel_error) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << width - right - 120 << "\" y=\"" << top + 18 + 18 * series
        << "\" font-size=\"13\" fill=\"" << color << "\">" << to_string(o.method) << "</text>\n";
    ++series;
  }
  out << "</svg>\n";
}

}  // namespace hpicp::io
