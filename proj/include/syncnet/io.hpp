#pragma once

#include "syncnet/conditions.hpp"
#include "syncnet/scenarios.hpp"
#include "syncnet/simulate.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace syncnet {

using Json = nlohmann::json;

/// Parses text; syntax errors become InputError with line and column.
Json parse_json(const std::string& text, const std::string& origin = "<input>");
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// {"n": N, "edges": [[i, j, w], ...]}, 1-based, i = target, j = source.
WeightedDigraph graph_from_json(const Json& j);
Json graph_to_json(const WeightedDigraph& g);

/// {"t_min", "t_max", "horizon", "schedule": [[t, graph_id], ...]} with 1-based graph ids and
/// optional "windows": [t_0, t_1, ...].
SwitchingSignal signal_from_json(const Json& j);
Json signal_to_json(const SwitchingSignal& s);

Matrix matrix_from_json(const Json& j, const std::string& field);
Json matrix_to_json(const Matrix& m);
Vector vector_from_json(const Json& j, const std::string& field);
Json vector_to_json(const Vector& v);

/// Graph file fields ("graphs" list or a single graph), schedule fields, and a "system" block.
Scenario scenario_from_json(const Json& j);
Json scenario_to_json(const Scenario& s);

Json condition_report_to_json(const ConditionReport& r);
std::string condition_report_table(const ConditionReport& r);

/// CSV columns: t, x_1_1..x_N_n, e_norm, delta_norm, pairwise_dev. delta_norm uses the graph
/// active at each sample.
std::string trajectory_csv(const Trajectory& traj, const std::vector<WeightedDigraph>& graphs,
                           const SwitchingSignal& sig);
/// CSV columns: t, graph_id (1-based).
std::string switch_events_csv(const Trajectory& traj);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace syncnet
