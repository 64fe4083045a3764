#pragma once

#include <string>
#include <vector>

#include "hpicp/experiment.hpp"

namespace hpicp::io {

// Shortest round-trip-exact decimal form (17 significant digits).
std::string format17(double v);

void write_history_csv(const std::string& path, const RunHistory& history);
void write_timings_csv(const std::string& path, const RunHistory& history);
void write_reconstruction_csv(const std::string& path, const Mesh& mesh, const GridFunction& c);
void write_summary_json(const std::string& path, const ExperimentSpec& spec,
                        const MethodOutcome& outcome, double delta_eff, int elements_built,
                        int node_count, double h);

// RE-vs-wall-time polyline plot, one series per method.
void write_re_time_svg(const std::string& path, const std::vector<MethodOutcome>& outcomes);

}  // namespace hpicp::io
