#pragma once

#include "tscg/pipeline.hpp"
#include "tscg/simgen.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tscg {

struct BenchCell {
  Design design = Design::TwoLayer;
  Index p = 30;
  Index T = 1000;
};

struct BenchSpec {
  std::vector<BenchCell> cells;
  int replications = 20;
  std::uint64_t master_seed = 1;
  EstimationConfig config;
  DesignSpec base_spec;  // probabilities/burn-in shared across cells
  int threads = 1;
};

struct MetricSummary {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

struct BenchRow {
  BenchCell cell;
  int completed = 0;
  std::vector<std::string> failures;  // per failed replication: message
  MetricSummary eu_recall, eu_precision, eu_mcc;
  MetricSummary a_recall, a_precision, a_mcc;
  MetricSummary b_recall, b_precision, b_mcc;
  MetricSummary shd;
};

/// Monte Carlo benchmark: per cell, `replications` independent draws with
/// seeds derived from the master seed, fit with the shared config, scored
/// against the ground truth. Failed replications are recorded, not dropped.
std::vector<BenchRow> run_bench(const BenchSpec& spec);

std::string bench_table_csv(const std::vector<BenchRow>& rows);

}  // namespace tscg
