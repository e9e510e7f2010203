#include "tscg/bench.hpp"

#include "tscg/io.hpp"
#include "tscg/rng.hpp"
#include "tscg/util.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

namespace tscg {

namespace {

struct RepScore {
  bool ok = false;
  std::string error;
  EdgeMetrics eu, a, b;
  long shd_value = 0;
};

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stderr_mean = std::sqrt(sq / static_cast<double>(values.size() - 1) /
                              static_cast<double>(values.size()));
  }
  return s;
}

std::set<std::pair<Index, Index>> coeff_support(const Mat& m) {
  std::set<std::pair<Index, Index>> s;
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c)
      if (r != c && m(r, c) != 0.0) s.insert({r, c});
  return s;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  std::vector<BenchRow> rows;
  for (size_t cell_idx = 0; cell_idx < spec.cells.size(); ++cell_idx) {
    const BenchCell& cell = spec.cells[cell_idx];
    std::vector<RepScore> scores(static_cast<size_t>(spec.replications));

    parallel_for(spec.replications, spec.threads, [&](std::ptrdiff_t rep) {
      RepScore& score = scores[static_cast<size_t>(rep)];
      try {
        DesignSpec dspec = spec.base_spec;
        dspec.design = cell.design;
        dspec.p = cell.p;
        dspec.T = cell.T;
        dspec.seed = mix64(spec.master_seed + 1000003ULL * cell_idx) +
                     static_cast<std::uint64_t>(rep);
        const GroundTruth truth = generate_graph(dspec);
        const TimeSeriesPanel panel = simulate_panel(truth, cell.T, dspec.seed + 1);
        EstimationConfig cfg = spec.config;
        cfg.threads = 1;  // replication-level parallelism only
        const RunReport report = fit(panel, cfg);

        const Index p = truth.graph.p;
        score.eu = edge_metrics(report.estimated.undirected, truth.graph.undirected,
                                p * (p - 1) / 2);
        score.a = edge_metrics(coeff_support(report.coeffs.A),
                               coeff_support(truth.coeffs.A), p * (p - 1));
        score.b = edge_metrics(coeff_support(report.coeffs.B),
                               coeff_support(truth.coeffs.B), p * (p - 1));
        score.shd_value = shd(report.estimated, truth.graph);
        score.ok = true;
      } catch (const std::exception& e) {
        score.error = e.what();
      }
    });

    BenchRow row;
    row.cell = cell;
    std::vector<double> eu_r, eu_p, eu_m, a_r, a_p, a_m, b_r, b_p, b_m, shd_v;
    for (size_t rep = 0; rep < scores.size(); ++rep) {
      const RepScore& s = scores[rep];
      if (!s.ok) {
        row.failures.push_back("replication " + std::to_string(rep + 1) + ": " + s.error);
        continue;
      }
      ++row.completed;
      eu_r.push_back(s.eu.recall);
      eu_p.push_back(s.eu.precision);
      eu_m.push_back(s.eu.mcc);
      a_r.push_back(s.a.recall);
      a_p.push_back(s.a.precision);
      a_m.push_back(s.a.mcc);
      b_r.push_back(s.b.recall);
      b_p.push_back(s.b.precision);
      b_m.push_back(s.b.mcc);
      shd_v.push_back(static_cast<double>(s.shd_value));
    }
    row.eu_recall = summarize(eu_r);
    row.eu_precision = summarize(eu_p);
    row.eu_mcc = summarize(eu_m);
    row.a_recall = summarize(a_r);
    row.a_precision = summarize(a_p);
    row.a_mcc = summarize(a_m);
    row.b_recall = summarize(b_r);
    row.b_precision = summarize(b_p);
    row.b_mcc = summarize(b_m);
    row.shd = summarize(shd_v);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string bench_table_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "design,p,T,completed,"
      << "eu_recall,eu_recall_se,eu_precision,eu_precision_se,eu_mcc,eu_mcc_se,"
      << "a_recall,a_recall_se,a_precision,a_precision_se,a_mcc,a_mcc_se,"
      << "b_recall,b_recall_se,b_precision,b_precision_se,b_mcc,b_mcc_se,"
      << "shd,shd_se\n";
  auto put = [&](const MetricSummary& s) {
    out << ',' << s.mean << ',' << s.stderr_mean;
  };
  for (const auto& row : rows) {
    const char* name = row.cell.design == Design::TwoLayer     ? "two_layer"
                       : row.cell.design == Design::RandomOrder ? "random_order"
                                                                : "fixture";
    out << name << ',' << row.cell.p << ',' << row.cell.T << ',' << row.completed;
    put(row.eu_recall);
    put(row.eu_precision);
    put(row.eu_mcc);
    put(row.a_recall);
    put(row.a_precision);
    put(row.a_mcc);
    put(row.b_recall);
    put(row.b_precision);
    put(row.b_mcc);
    put(row.shd);
    out << '\n';
  }
  return out.str();
}

}  // namespace tscg
