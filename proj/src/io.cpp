#include "tscg/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tscg::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("cannot write file: " + path);
  out << content;
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw invalid_input("JSON parse error in " + path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

Mat read_panel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw invalid_input(path + ": empty CSV");
  const size_t p = split_csv_line(line).size();
  if (p == 0) throw invalid_input(path + ": header has no columns");

  std::vector<double> values;
  size_t rows = 0;
  for (size_t row = 2; std::getline(in, line); ++row) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != p)
      throw invalid_input(path + ": row " + std::to_string(row) + " has " +
                          std::to_string(fields.size()) + " fields, expected " +
                          std::to_string(p));
    for (size_t col = 0; col < p; ++col) {
      double v = 0.0;
      const auto& f = fields[col];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size())
        throw invalid_input(path + ": row " + std::to_string(row) + ", column " +
                            std::to_string(col + 1) + ": cannot parse '" + f + "'");
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw invalid_input(path + ": no data rows");
  Mat panel(static_cast<Index>(rows), static_cast<Index>(p));
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < p; ++c)
      panel(static_cast<Index>(r), static_cast<Index>(c)) = values[r * p + c];
  return panel;
}

void write_panel_csv(const std::string& path, const Mat& panel,
                     const std::vector<std::string>& column_names) {
  std::ostringstream out;
  for (Index k = 0; k < panel.cols(); ++k) {
    if (k > 0) out << ',';
    if (static_cast<size_t>(k) < column_names.size())
      out << column_names[static_cast<size_t>(k)];
    else
      out << 'x' << (k + 1);
  }
  out << '\n';
  for (Index t = 0; t < panel.rows(); ++t) {
    for (Index k = 0; k < panel.cols(); ++k) {
      if (k > 0) out << ',';
      out << format_double(panel(t, k));
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

json graph_to_json(const ChainGraph& g) {
  json j;
  j["p"] = g.p;
  json und = json::array();
  for (const auto& [k, l] : g.undirected) und.push_back({k + 1, l + 1});
  j["undirected"] = und;
  json dir = json::array();
  for (const auto& e : g.directed)
    dir.push_back({{"from", e.from + 1}, {"to", e.to + 1}, {"in_A", e.in_A}, {"in_B", e.in_B}});
  j["directed"] = dir;
  json comps = json::array();
  for (const auto& comp : g.components) {
    json c = json::array();
    for (Index v : comp) c.push_back(v + 1);
    comps.push_back(c);
  }
  j["components"] = comps;
  if (g.ordering) {
    json ord = json::array();
    for (int idx : *g.ordering) ord.push_back(idx + 1);
    j["ordering"] = ord;
  }
  return j;
}

ChainGraph graph_from_json(const json& j) {
  ChainGraph g;
  try {
    g.p = j.at("p").get<Index>();
    for (const auto& e : j.at("undirected")) {
      Index k = e.at(0).get<Index>() - 1;
      Index l = e.at(1).get<Index>() - 1;
      if (k > l) std::swap(k, l);
      g.undirected.insert({k, l});
    }
    for (const auto& e : j.at("directed"))
      g.directed.push_back({e.at("from").get<Index>() - 1, e.at("to").get<Index>() - 1,
                            e.at("in_A").get<bool>(), e.at("in_B").get<bool>()});
    std::sort(g.directed.begin(), g.directed.end());
    if (j.contains("components")) {
      for (const auto& comp : j.at("components")) {
        std::vector<Index> c;
        for (const auto& v : comp) c.push_back(v.get<Index>() - 1);
        std::sort(c.begin(), c.end());
        g.components.push_back(std::move(c));
      }
    } else {
      g.components = components_from_undirected(g.p, g.undirected);
    }
    if (j.contains("ordering") && !j.at("ordering").is_null()) {
      std::vector<int> ord;
      for (const auto& v : j.at("ordering")) ord.push_back(v.get<int>() - 1);
      g.ordering = ord;
    }
  } catch (const json::exception& e) {
    throw invalid_input(std::string("malformed graph JSON: ") + e.what());
  }
  const auto problems = validate_chain_graph(g);
  if (!problems.empty()) throw invalid_input("graph JSON invalid: " + problems.front());
  return g;
}

namespace {

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

Mat matrix_from_json(const json& j) {
  const Index rows = static_cast<Index>(j.size());
  if (rows == 0) return Mat(0, 0);
  const Index cols = static_cast<Index>(j.at(0).size());
  Mat m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (static_cast<Index>(j.at(r).size()) != cols)
      throw invalid_input("ragged matrix in JSON");
    for (Index c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

}  // namespace

json coeffs_to_json(const CoefficientPair& c) {
  return json{{"A", matrix_to_json(c.A)}, {"B", matrix_to_json(c.B)}};
}

CoefficientPair coeffs_from_json(const json& j) {
  try {
    return {matrix_from_json(j.at("A")), matrix_from_json(j.at("B"))};
  } catch (const json::exception& e) {
    throw invalid_input(std::string("malformed coefficient JSON: ") + e.what());
  }
}

json config_to_json(const EstimationConfig& cfg) {
  return json{{"m_const", cfg.m_const},
              {"m_min_blocks", cfg.m_min_blocks},
              {"lambda1_const", cfg.lambda1_const},
              {"eta", cfg.eta},
              {"gamma", cfg.gamma},
              {"kappa_const", cfg.kappa_const},
              {"nu_const", cfg.nu_const},
              {"zeta", cfg.zeta},
              {"ridge", cfg.ridge},
              {"center", cfg.center},
              {"standardize", cfg.standardize},
              {"admm",
               {{"rho", cfg.admm.rho},
                {"varrho", cfg.admm.varrho},
                {"max_iter", cfg.admm.max_iter},
                {"tol_primal", cfg.admm.tol_primal},
                {"tol_dual", cfg.admm.tol_dual},
                {"adapt_rho", cfg.admm.adapt_rho}}},
              {"stage3", {{"ridge", cfg.stage3.ridge}}}};
}

EstimationConfig config_from_json(const json& j) {
  EstimationConfig cfg;
  try {
    if (j.contains("m_const")) cfg.m_const = j.at("m_const").get<double>();
    if (j.contains("m_min_blocks")) cfg.m_min_blocks = j.at("m_min_blocks").get<int>();
    if (j.contains("lambda1_const")) cfg.lambda1_const = j.at("lambda1_const").get<double>();
    if (j.contains("eta")) cfg.eta = j.at("eta").get<double>();
    if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<double>();
    if (j.contains("kappa_const")) cfg.kappa_const = j.at("kappa_const").get<double>();
    if (j.contains("nu_const")) cfg.nu_const = j.at("nu_const").get<double>();
    if (j.contains("zeta")) cfg.zeta = j.at("zeta").get<double>();
    if (j.contains("ridge")) cfg.ridge = j.at("ridge").get<double>();
    if (j.contains("center")) cfg.center = j.at("center").get<bool>();
    if (j.contains("standardize")) cfg.standardize = j.at("standardize").get<bool>();
    if (j.contains("admm")) {
      const auto& a = j.at("admm");
      if (a.contains("rho")) cfg.admm.rho = a.at("rho").get<double>();
      if (a.contains("varrho")) cfg.admm.varrho = a.at("varrho").get<double>();
      if (a.contains("max_iter")) cfg.admm.max_iter = a.at("max_iter").get<int>();
      if (a.contains("tol_primal")) cfg.admm.tol_primal = a.at("tol_primal").get<double>();
      if (a.contains("tol_dual")) cfg.admm.tol_dual = a.at("tol_dual").get<double>();
      if (a.contains("adapt_rho")) cfg.admm.adapt_rho = a.at("adapt_rho").get<bool>();
    }
    if (j.contains("stage3")) {
      const auto& s = j.at("stage3");
      if (s.contains("ridge")) cfg.stage3.ridge = s.at("ridge").get<double>();
    }
  } catch (const json::exception& e) {
    throw invalid_input(std::string("malformed config JSON: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

json design_spec_to_json(const DesignSpec& spec) {
  const char* name = spec.design == Design::TwoLayer     ? "two_layer"
                     : spec.design == Design::RandomOrder ? "random_order"
                                                          : "fixture";
  return json{{"design", name},
              {"p", spec.p},
              {"T", spec.T},
              {"seed", spec.seed},
              {"within_edge_prob", spec.within_edge_prob},
              {"directed_edge_prob", spec.directed_edge_prob},
              {"hub_prob", spec.hub_prob},
              {"layer1_frac", spec.layer1_frac},
              {"burn_in", spec.burn_in},
              {"independent_ab_masks", spec.independent_ab_masks}};
}

DesignSpec design_spec_from_json(const json& j) {
  DesignSpec spec;
  try {
    if (j.contains("design")) {
      const std::string name = j.at("design").get<std::string>();
      if (name == "two_layer")
        spec.design = Design::TwoLayer;
      else if (name == "random_order")
        spec.design = Design::RandomOrder;
      else if (name == "fixture")
        spec.design = Design::Fixture;
      else
        throw invalid_input("unknown design '" + name + "'");
    }
    if (j.contains("p")) spec.p = j.at("p").get<Index>();
    if (j.contains("T")) spec.T = j.at("T").get<Index>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("within_edge_prob"))
      spec.within_edge_prob = j.at("within_edge_prob").get<double>();
    if (j.contains("directed_edge_prob"))
      spec.directed_edge_prob = j.at("directed_edge_prob").get<double>();
    if (j.contains("hub_prob")) spec.hub_prob = j.at("hub_prob").get<double>();
    if (j.contains("layer1_frac")) spec.layer1_frac = j.at("layer1_frac").get<double>();
    if (j.contains("burn_in")) spec.burn_in = j.at("burn_in").get<Index>();
    if (j.contains("independent_ab_masks"))
      spec.independent_ab_masks = j.at("independent_ab_masks").get<bool>();
  } catch (const json::exception& e) {
    throw invalid_input(std::string("malformed design JSON: ") + e.what());
  }
  spec.validate();
  return spec;
}

json truth_to_json(const GroundTruth& truth) {
  json noise = json::array();
  for (const auto& n : truth.noise) {
    json nodes = json::array();
    for (Index v : n.nodes) nodes.push_back(v + 1);
    noise.push_back({{"nodes", nodes},
                     {"C", matrix_to_json(n.C)},
                     {"sigma_eps", matrix_to_json(n.sigma_eps)}});
  }
  return json{{"graph", graph_to_json(truth.graph)},
              {"coeffs", coeffs_to_json(truth.coeffs)},
              {"noise", noise},
              {"spectral_radius_x", truth.spectral_radius_x},
              {"rescale_applied", truth.rescale_applied},
              {"burn_in", truth.burn_in}};
}

GroundTruth truth_from_json(const json& j) {
  GroundTruth truth;
  try {
    truth.graph = graph_from_json(j.at("graph"));
    truth.coeffs = coeffs_from_json(j.at("coeffs"));
    for (const auto& n : j.at("noise")) {
      ComponentNoise noise;
      for (const auto& v : n.at("nodes")) noise.nodes.push_back(v.get<Index>() - 1);
      noise.C = matrix_from_json(n.at("C"));
      noise.sigma_eps = matrix_from_json(n.at("sigma_eps"));
      Eigen::LLT<Mat> llt(noise.sigma_eps);
      if (llt.info() != Eigen::Success)
        throw invalid_input("noise covariance is not positive definite");
      noise.innovation_factor = llt.matrixL();
      truth.noise.push_back(std::move(noise));
    }
    truth.spectral_radius_x = j.at("spectral_radius_x").get<double>();
    truth.rescale_applied = j.at("rescale_applied").get<bool>();
    if (j.contains("burn_in")) truth.burn_in = j.at("burn_in").get<Index>();
  } catch (const json::exception& e) {
    throw invalid_input(std::string("malformed truth JSON: ") + e.what());
  }
  return truth;
}

json metrics_to_json(const EdgeMetrics& m) {
  return json{{"recall", m.recall}, {"precision", m.precision}, {"mcc", m.mcc},
              {"tp", m.tp},         {"fp", m.fp},               {"fn", m.fn},
              {"tn", m.tn}};
}

namespace {

std::set<std::pair<Index, Index>> support_pairs(const Mat& m) {
  std::set<std::pair<Index, Index>> s;
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c)
      if (r != c && m(r, c) != 0.0) s.insert({r, c});
  return s;
}

std::set<std::pair<Index, Index>> directed_support(const std::vector<DirectedEdge>& edges,
                                                   bool in_a) {
  std::set<std::pair<Index, Index>> s;
  for (const auto& e : edges)
    if ((in_a && e.in_A) || (!in_a && e.in_B)) s.insert({e.to, e.from});
  return s;
}

}  // namespace

json evaluate_to_json(const ChainGraph& est_graph, const CoefficientPair& est_coeffs,
                      const ChainGraph& truth_graph, const CoefficientPair& truth_coeffs) {
  const Index p = truth_graph.p;
  if (est_graph.p != p) throw invalid_input("estimate and truth have different p");
  const long pair_universe = p * (p - 1) / 2;
  const long ordered_universe = p * (p - 1);

  const auto eu = edge_metrics(est_graph.undirected, truth_graph.undirected, pair_universe);
  const auto a = edge_metrics(support_pairs(est_coeffs.A), support_pairs(truth_coeffs.A),
                              ordered_universe);
  const auto b = edge_metrics(support_pairs(est_coeffs.B), support_pairs(truth_coeffs.B),
                              ordered_universe);
  return json{{"undirected", metrics_to_json(eu)},
              {"a_support", metrics_to_json(a)},
              {"b_support", metrics_to_json(b)},
              {"shd", shd(est_graph, truth_graph)}};
}

json evaluate_to_json(const ChainGraph& estimated, const GroundTruth& truth) {
  // Graph-level variant: A/B supports read from the edge provenance tags.
  const Index p = truth.graph.p;
  if (estimated.p != p) throw invalid_input("estimate and truth have different p");
  const long pair_universe = p * (p - 1) / 2;
  const long ordered_universe = p * (p - 1);
  const auto eu =
      edge_metrics(estimated.undirected, truth.graph.undirected, pair_universe);
  const auto a = edge_metrics(directed_support(estimated.directed, true),
                              directed_support(truth.graph.directed, true), ordered_universe);
  const auto b = edge_metrics(directed_support(estimated.directed, false),
                              directed_support(truth.graph.directed, false), ordered_universe);
  return json{{"undirected", metrics_to_json(eu)},
              {"a_support", metrics_to_json(a)},
              {"b_support", metrics_to_json(b)},
              {"shd", shd(estimated, truth.graph)}};
}

json report_to_json(const RunReport& report, bool include_timings) {
  json trace = json::array();
  for (const auto& step : report.ordering.discrepancy_trace) {
    json candidates = json::object();
    for (const auto& [g, d] : step) candidates[std::to_string(g + 1)] = d;
    trace.push_back(candidates);
  }
  json ord = json::array();
  for (int g : report.ordering.ordering) ord.push_back(g + 1);

  json j{{"graph", graph_to_json(report.estimated)},
         {"coeffs", coeffs_to_json(report.coeffs)},
         {"tuning",
          {{"m", report.tuning.m},
           {"M", report.tuning.M},
           {"lambda1", report.tuning.lambda1},
           {"lambda2", report.tuning.lambda2},
           {"kappa", report.tuning.kappa},
           {"nu", report.tuning.nu}}},
         {"admm",
          {{"iterations", report.admm.iterations},
           {"primal_residual", report.admm.primal_residual},
           {"dual_residual", report.admm.dual_residual},
           {"converged", report.admm.converged},
           {"ranks", report.admm.ranks}}},
         {"ordering", {{"order", ord}, {"discrepancy_trace", trace}}},
         {"config", config_to_json(report.config)},
         {"warnings", report.warnings}};
  if (include_timings)
    j["timings"] = {{"spectral_sec", report.timings.spectral_sec},
                    {"admm_sec", report.timings.admm_sec},
                    {"ordering_sec", report.timings.ordering_sec},
                    {"regression_sec", report.timings.regression_sec},
                    {"total_sec", report.timings.total_sec}};
  return j;
}

std::string graph_to_dot(const ChainGraph& g, const CoefficientPair& coeffs) {
  std::ostringstream out;
  out << "digraph chain_graph {\n";
  out << "  node [shape=circle];\n";
  for (Index v = 0; v < g.p; ++v) out << "  n" << (v + 1) << ";\n";
  for (const auto& [k, l] : g.undirected)
    out << "  n" << (k + 1) << " -> n" << (l + 1) << " [dir=none];\n";
  for (const auto& e : g.directed) {
    double coef = 0.0;
    if (coeffs.A.size() > 0) {
      const double a = coeffs.A(e.to, e.from);
      const double b = coeffs.B(e.to, e.from);
      coef = std::abs(a) >= std::abs(b) ? a : b;
    }
    out << "  n" << (e.from + 1) << " -> n" << (e.to + 1)
        << (coef < 0.0 ? " [style=dashed];\n" : " [style=solid];\n");
  }
  out << "}\n";
  return out.str();
}

}  // namespace tscg::io
