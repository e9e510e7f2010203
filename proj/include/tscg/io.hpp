#pragma once

#include "tscg/graph.hpp"
#include "tscg/pipeline.hpp"
#include "tscg/simgen.hpp"
#include "tscg/spectral.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace tscg::io {

using json = nlohmann::json;

/// CSV panel: first row column names, one row per time point, '.' decimal,
/// no index column. Parse failures report row and column.
Mat read_panel_csv(const std::string& path);
void write_panel_csv(const std::string& path, const Mat& panel,
                     const std::vector<std::string>& column_names = {});

/// Graph JSON uses 1-based node indices:
/// {"p", "undirected": [[k,l],...], "directed": [{"from","to","in_A","in_B"},...],
///  "components": [[...],...], "ordering": [...]}.
json graph_to_json(const ChainGraph& g);
ChainGraph graph_from_json(const json& j);

json coeffs_to_json(const CoefficientPair& c);
CoefficientPair coeffs_from_json(const json& j);

json config_to_json(const EstimationConfig& cfg);
EstimationConfig config_from_json(const json& j);

json truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const json& j);

json design_spec_to_json(const DesignSpec& spec);
DesignSpec design_spec_from_json(const json& j);

json metrics_to_json(const EdgeMetrics& m);

/// Full evaluation block (undirected / A-support / B-support / SHD) of an
/// estimate against a truth graph.
json evaluate_to_json(const ChainGraph& estimated, const GroundTruth& truth);
json evaluate_to_json(const ChainGraph& est_graph, const CoefficientPair& est_coeffs,
                      const ChainGraph& truth_graph, const CoefficientPair& truth_coeffs);

/// Run report; timings are included only when include_timings is set so the
/// default output is byte-stable across runs.
json report_to_json(const RunReport& report, bool include_timings = false);

/// DOT export: undirected edges with dir=none, directed edges solid when the
/// largest-magnitude coefficient is positive and dashed when negative.
std::string graph_to_dot(const ChainGraph& g, const CoefficientPair& coeffs);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace tscg::io
