#include "tscg/bench.hpp"
#include "tscg/io.hpp"
#include "tscg/pipeline.hpp"
#include "tscg/simgen.hpp"
#include "tscg/util.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using tscg::io::json;

int run_simulate(const std::string& design_name, tscg::Index p, tscg::Index T,
                 std::uint64_t seed, const std::string& spec_path,
                 const std::string& out_panel, const std::string& out_truth) {
  tscg::DesignSpec spec;
  if (!spec_path.empty()) spec = tscg::io::design_spec_from_json(tscg::io::read_json_file(spec_path));
  if (!design_name.empty()) {
    json j{{"design", design_name}};
    spec.design = tscg::io::design_spec_from_json(j).design;
  }
  if (p > 0) spec.p = p;
  if (T > 0) spec.T = T;
  spec.seed = seed;
  spec.validate();

  const tscg::GroundTruth truth = tscg::generate_graph(spec);
  const tscg::TimeSeriesPanel panel = tscg::simulate_panel(truth, spec.T, spec.seed + 1);
  if (!out_panel.empty()) tscg::io::write_panel_csv(out_panel, panel.data);
  if (!out_truth.empty()) tscg::io::write_json_file(out_truth, tscg::io::truth_to_json(truth));
  std::cerr << "simulated " << panel.T() << " x " << panel.p() << " panel ("
            << truth.graph.undirected.size() << " undirected, "
            << truth.graph.directed.size() << " directed edges)\n";
  return 0;
}

int run_fit(const std::string& panel_path, const std::string& config_path,
            const std::string& out_report, const std::string& out_graph,
            const std::string& out_dot, const std::string& truth_path, bool timings) {
  tscg::EstimationConfig cfg;
  if (!config_path.empty())
    cfg = tscg::io::config_from_json(tscg::io::read_json_file(config_path));
  cfg.threads = tscg::thread_count_from_env();

  const tscg::TimeSeriesPanel panel =
      tscg::TimeSeriesPanel::from_matrix(tscg::io::read_panel_csv(panel_path));
  const tscg::RunReport report = tscg::fit(panel, cfg);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";

  json report_json = tscg::io::report_to_json(report, timings);
  if (!truth_path.empty()) {
    const tscg::GroundTruth truth =
        tscg::io::truth_from_json(tscg::io::read_json_file(truth_path));
    report_json["metrics"] = tscg::io::evaluate_to_json(
        report.estimated, report.coeffs, truth.graph, truth.coeffs);
  }
  if (!out_report.empty()) tscg::io::write_json_file(out_report, report_json);
  if (!out_graph.empty())
    tscg::io::write_json_file(out_graph, tscg::io::graph_to_json(report.estimated));
  if (!out_dot.empty())
    tscg::io::write_text_file(out_dot, tscg::io::graph_to_dot(report.estimated, report.coeffs));
  std::cerr << "fit: " << report.estimated.undirected.size() << " undirected, "
            << report.estimated.directed.size() << " directed edges, "
            << report.ordering.components.size() << " components";
  if (timings) std::cerr << ", " << report.timings.total_sec << " s";
  std::cerr << "\n";
  return 0;
}

int run_eval(const std::string& estimate_path, const std::string& truth_path,
             const std::string& out_path) {
  const json est = tscg::io::read_json_file(estimate_path);
  const tscg::GroundTruth truth =
      tscg::io::truth_from_json(tscg::io::read_json_file(truth_path));
  json metrics;
  if (est.contains("graph") && est.contains("coeffs")) {
    // A full fit report: score coefficient supports directly.
    metrics = tscg::io::evaluate_to_json(tscg::io::graph_from_json(est.at("graph")),
                                         tscg::io::coeffs_from_json(est.at("coeffs")),
                                         truth.graph, truth.coeffs);
  } else {
    metrics = tscg::io::evaluate_to_json(tscg::io::graph_from_json(est), truth);
  }
  if (!out_path.empty())
    tscg::io::write_json_file(out_path, metrics);
  else
    std::cout << metrics.dump(2) << "\n";
  return 0;
}

int run_bench_cmd(const std::string& grid_path, const std::string& out_csv,
                  const std::string& out_json, int replications_override) {
  const json grid = tscg::io::read_json_file(grid_path);
  tscg::BenchSpec spec;
  try {
    for (const auto& cell : grid.at("cells")) {
      tscg::BenchCell c;
      json dj{{"design", cell.at("design")}};
      c.design = tscg::io::design_spec_from_json(dj).design;
      c.p = cell.at("p").get<tscg::Index>();
      c.T = cell.at("T").get<tscg::Index>();
      spec.cells.push_back(c);
    }
    if (grid.contains("replications")) spec.replications = grid.at("replications").get<int>();
    if (grid.contains("master_seed"))
      spec.master_seed = grid.at("master_seed").get<std::uint64_t>();
    if (grid.contains("config")) spec.config = tscg::io::config_from_json(grid.at("config"));
    if (grid.contains("base_spec"))
      spec.base_spec = tscg::io::design_spec_from_json(grid.at("base_spec"));
  } catch (const json::exception& e) {
    throw tscg::invalid_input(std::string("malformed grid JSON: ") + e.what());
  }
  if (replications_override > 0) spec.replications = replications_override;
  spec.threads = tscg::thread_count_from_env();

  const auto rows = tscg::run_bench(spec);
  const std::string csv = tscg::bench_table_csv(rows);
  if (!out_csv.empty())
    tscg::io::write_text_file(out_csv, csv);
  else
    std::cout << csv;
  if (!out_json.empty()) {
    json out = json::array();
    for (const auto& row : rows) {
      json r{{"design", row.cell.design == tscg::Design::TwoLayer      ? "two_layer"
                        : row.cell.design == tscg::Design::RandomOrder ? "random_order"
                                                                       : "fixture"},
             {"p", row.cell.p},
             {"T", row.cell.T},
             {"completed", row.completed},
             {"failures", row.failures},
             {"eu", {{"recall", row.eu_recall.mean}, {"recall_se", row.eu_recall.stderr_mean},
                     {"precision", row.eu_precision.mean},
                     {"precision_se", row.eu_precision.stderr_mean},
                     {"mcc", row.eu_mcc.mean}, {"mcc_se", row.eu_mcc.stderr_mean}}},
             {"a", {{"recall", row.a_recall.mean}, {"recall_se", row.a_recall.stderr_mean},
                    {"precision", row.a_precision.mean},
                    {"precision_se", row.a_precision.stderr_mean},
                    {"mcc", row.a_mcc.mean}, {"mcc_se", row.a_mcc.stderr_mean}}},
             {"b", {{"recall", row.b_recall.mean}, {"recall_se", row.b_recall.stderr_mean},
                    {"precision", row.b_precision.mean},
                    {"precision_se", row.b_precision.stderr_mean},
                    {"mcc", row.b_mcc.mean}, {"mcc_se", row.b_mcc.stderr_mean}}},
             {"shd", {{"mean", row.shd.mean}, {"se", row.shd.stderr_mean}}}};
      out.push_back(r);
    }
    tscg::io::write_json_file(out_json, out);
  }
  for (const auto& row : rows)
    for (const auto& failure : row.failures) std::cerr << "bench failure: " << failure << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time series chain graph learner: frequency-domain structure "
               "estimation for multivariate stationary series"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Draw a ground-truth graph and panel");
  std::string sim_design, sim_spec, sim_panel, sim_truth;
  tscg::Index sim_p = 0, sim_T = 0;
  std::uint64_t sim_seed = 1;
  sim->add_option("--design", sim_design, "two_layer | random_order | fixture");
  sim->add_option("--spec", sim_spec, "design spec JSON (overridden by flags)");
  sim->add_option("--p", sim_p, "series count");
  sim->add_option("--T", sim_T, "panel length");
  sim->add_option("--seed", sim_seed, "master seed");
  sim->add_option("--out-panel", sim_panel, "panel CSV output path");
  sim->add_option("--out-truth", sim_truth, "ground truth JSON output path");

  auto* fitcmd = app.add_subcommand("fit", "Estimate the chain graph from a panel CSV");
  std::string fit_panel, fit_config, fit_report, fit_graph, fit_dot, fit_truth;
  bool fit_timings = false;
  fitcmd->add_option("--panel", fit_panel, "panel CSV")->required();
  fitcmd->add_option("--config", fit_config, "estimation config JSON");
  fitcmd->add_option("--out-report", fit_report, "run report JSON output");
  fitcmd->add_option("--out-graph", fit_graph, "graph JSON output");
  fitcmd->add_option("--out-dot", fit_dot, "Graphviz DOT output");
  fitcmd->add_option("--truth", fit_truth, "truth JSON; adds metrics to the report");
  fitcmd->add_flag("--timings", fit_timings, "include stage timings in the report");

  auto* evalcmd = app.add_subcommand("eval", "Score an estimate against a ground truth");
  std::string eval_est, eval_truth, eval_out;
  evalcmd->add_option("--estimate", eval_est, "graph JSON or fit report JSON")->required();
  evalcmd->add_option("--truth", eval_truth, "truth JSON")->required();
  evalcmd->add_option("--out", eval_out, "metrics JSON output (stdout if omitted)");

  auto* benchcmd = app.add_subcommand("bench", "Monte Carlo benchmark over a design grid");
  std::string bench_grid, bench_csv, bench_json;
  int bench_reps = 0;
  benchcmd->add_option("--grid", bench_grid, "grid JSON")->required();
  benchcmd->add_option("--out-csv", bench_csv, "table CSV output (stdout if omitted)");
  benchcmd->add_option("--out-json", bench_json, "table JSON output");
  benchcmd->add_option("--replications", bench_reps, "override replication count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return run_simulate(sim_design, sim_p, sim_T, sim_seed, sim_spec, sim_panel, sim_truth);
    if (fitcmd->parsed())
      return run_fit(fit_panel, fit_config, fit_report, fit_graph, fit_dot, fit_truth,
                     fit_timings);
    if (evalcmd->parsed()) return run_eval(eval_est, eval_truth, eval_out);
    if (benchcmd->parsed()) return run_bench_cmd(bench_grid, bench_csv, bench_json, bench_reps);
  } catch (const tscg::invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const tscg::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
