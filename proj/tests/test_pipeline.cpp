#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tscg/bench.hpp"
#include "tscg/io.hpp"
#include "tscg/pipeline.hpp"
#include "tscg/rng.hpp"
#include "tscg/simgen.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

using namespace tscg;

namespace {

TimeSeriesPanel white_noise_panel(Index T, Index p, std::uint64_t seed) {
  Rng rng(seed);
  Mat m(T, p);
  for (Index t = 0; t < T; ++t)
    for (Index k = 0; k < p; ++k) m(t, k) = rng.gaussian();
  return TimeSeriesPanel::from_matrix(m);
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path((std::filesystem::temp_directory_path() / name).string()) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("resolve_tuning pins the advertised schedule") {
  EstimationConfig cfg;
  cfg.lambda1_const = 1.0;
  const auto tuning = resolve_tuning(1000, 30, cfg);
  CHECK(tuning.M >= 5);
  // The rate value (about 190) would give a single block, so the cap binds.
  CHECK(tuning.m == 49);
  CHECK(tuning.M == 5);
  CHECK(tuning.lambda1 == doctest::Approx(std::pow(1000.0, -1.0 / 3.0 + 1.0 / 16.0)));
  CHECK(tuning.lambda1 == doctest::Approx(0.154).epsilon(0.01));
  CHECK(tuning.lambda2 == tuning.lambda1);  // gamma = 1

  EstimationConfig gamma2 = cfg;
  gamma2.gamma = 2.0;
  CHECK(resolve_tuning(1000, 30, gamma2).lambda2 ==
        doctest::Approx(2.0 * tuning.lambda1));

  CHECK_THROWS_AS(resolve_tuning(21, 3, cfg), config_error);
  CHECK_THROWS_AS(resolve_tuning(24, 3, cfg), config_error);  // M_min unreachable
}

TEST_CASE("resolve_tuning is monotone in T") {
  EstimationConfig cfg;
  double last_l1 = 1e9, last_kappa = 1e9, last_nu = 1e9;
  for (Index T : {200, 500, 1000, 2000, 5000}) {
    const auto tuning = resolve_tuning(T, 10, cfg);
    CHECK(tuning.lambda1 <= last_l1);
    CHECK(tuning.kappa <= last_kappa);
    CHECK(tuning.nu <= last_nu);
    last_l1 = tuning.lambda1;
    last_kappa = tuning.kappa;
    last_nu = tuning.nu;
  }
}

TEST_CASE("fit propagates stage-labelled input errors") {
  Mat bad = Mat::Zero(100, 3);
  bad(50, 1) = std::nan("");
  CHECK_THROWS_AS(TimeSeriesPanel::from_matrix(bad), invalid_input);

  // A panel too short for the default block count fails in stage 1.
  EstimationConfig cfg;
  try {
    fit(white_noise_panel(24, 2, 1), cfg);
    FAIL("expected a config error");
  } catch (const config_error& e) {
    CHECK(std::string(e.what()).find("stage 1") != std::string::npos);
  }
}

TEST_CASE("fit output is feasible and deterministic across thread counts") {
  DesignSpec spec;
  spec.design = Design::TwoLayer;
  spec.p = 12;
  spec.T = 600;
  spec.seed = 3;
  const auto truth = generate_graph(spec);
  const auto panel = simulate_panel(truth, 600, 4);

  EstimationConfig cfg;
  cfg.threads = 1;
  const auto a = fit(panel, cfg);
  cfg.threads = 8;
  const auto b = fit(panel, cfg);

  CHECK(io::report_to_json(a).dump() == io::report_to_json(b).dump());
  CHECK(is_feasible(a.estimated, a.coeffs).feasible);
  CHECK(validate_chain_graph(a.estimated).empty());
}

TEST_CASE("white-noise panels mostly come back empty") {
  int empty = 0;
  const int seeds = 5;
  for (int s = 0; s < seeds; ++s) {
    const auto report = fit(white_noise_panel(1000, 5, 500 + s), EstimationConfig{});
    if (report.estimated.undirected.empty() && report.estimated.directed.empty()) ++empty;
  }
  CHECK(empty >= 4);
}

TEST_CASE("fixture toy system is recovered with small SHD") {
  int good = 0;
  const int seeds = 5;
  for (int s = 0; s < seeds; ++s) {
    DesignSpec spec;
    spec.design = Design::Fixture;
    spec.T = 4000;
    spec.seed = 40 + std::uint64_t(s);
    const auto truth = generate_graph(spec);
    const auto panel = simulate_panel(truth, 4000, spec.seed + 1);
    const auto report = fit(panel, EstimationConfig{});
    if (shd(report.estimated, truth.graph) <= 2) ++good;
  }
  CHECK(good >= 4);
}

TEST_CASE("csv round trip and parse errors") {
  TempFile csv("tscg_test_panel.csv");
  Rng rng(5);
  Mat m(20, 3);
  for (Index t = 0; t < 20; ++t)
    for (Index k = 0; k < 3; ++k) m(t, k) = rng.gaussian();
  io::write_panel_csv(csv.path, m);
  const Mat back = io::read_panel_csv(csv.path);
  CHECK((back - m).norm() == 0.0);

  io::write_text_file(csv.path, "a,b\n1.0,2.0\n3.0,oops\n");
  try {
    io::read_panel_csv(csv.path);
    FAIL("expected a parse error");
  } catch (const invalid_input& e) {
    const std::string what = e.what();
    CHECK(what.find("row 3") != std::string::npos);
    CHECK(what.find("column 2") != std::string::npos);
  }

  io::write_text_file(csv.path, "a,b\n1.0\n");
  CHECK_THROWS_AS(io::read_panel_csv(csv.path), invalid_input);
}

TEST_CASE("graph json round trip") {
  DesignSpec spec;
  spec.design = Design::Fixture;
  const auto truth = generate_graph(spec);
  const auto j = io::graph_to_json(truth.graph);
  CHECK(j.at("p") == 7);
  // 1-based indices in the serialized form.
  CHECK(j.at("undirected").at(0).at(0) == 1);
  const auto back = io::graph_from_json(j);
  CHECK(back.undirected == truth.graph.undirected);
  CHECK(back.directed == truth.graph.directed);
  CHECK(back.components == truth.graph.components);
  REQUIRE(back.ordering.has_value());
  CHECK(*back.ordering == *truth.graph.ordering);

  auto corrupt = j;
  corrupt["directed"] = io::json::array({io::json{{"from", 1}, {"to", 1}, {"in_A", true},
                                                  {"in_B", false}}});
  CHECK_THROWS_AS(io::graph_from_json(corrupt), invalid_input);
}

TEST_CASE("truth json round trip preserves the panel stream") {
  DesignSpec spec;
  spec.design = Design::RandomOrder;
  spec.p = 8;
  spec.seed = 12;
  const auto truth = generate_graph(spec);
  const auto back = io::truth_from_json(io::truth_to_json(truth));
  const auto p1 = simulate_panel(truth, 200, 3);
  const auto p2 = simulate_panel(back, 200, 3);
  CHECK((p1.data - p2.data).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("config json round trip and validation") {
  EstimationConfig cfg;
  cfg.lambda1_const = 0.77;
  cfg.gamma = 1.5;
  cfg.admm.max_iter = 321;
  const auto j = io::config_to_json(cfg);
  const auto back = io::config_from_json(j);
  CHECK(back.lambda1_const == 0.77);
  CHECK(back.gamma == 1.5);
  CHECK(back.admm.max_iter == 321);

  auto bad = j;
  bad["eta"] = 0.9;
  CHECK_THROWS_AS(io::config_from_json(bad), config_error);
}

TEST_CASE("dot export marks edge kinds and signs") {
  DesignSpec spec;
  spec.design = Design::Fixture;
  const auto truth = generate_graph(spec);
  const auto dot = io::graph_to_dot(truth.graph, truth.coeffs);
  CHECK(dot.find("dir=none") != std::string::npos);
  CHECK(dot.find("style=solid") != std::string::npos);   // +0.8 edges
  CHECK(dot.find("style=dashed") != std::string::npos);  // -0.8 edge
}

TEST_CASE("bench runner is deterministic and records failures") {
  BenchSpec spec;
  spec.cells = {{Design::TwoLayer, 8, 300}};
  spec.replications = 3;
  spec.master_seed = 5;
  spec.threads = 2;
  const auto rows1 = run_bench(spec);
  const auto rows2 = run_bench(spec);
  REQUIRE(rows1.size() == 1);
  CHECK(rows1[0].completed == 3);
  CHECK(rows1[0].eu_mcc.mean == rows2[0].eu_mcc.mean);
  CHECK(rows1[0].shd.mean == rows2[0].shd.mean);
  CHECK(bench_table_csv(rows1) == bench_table_csv(rows2));

  // An impossible cell (T too small for the default block count) is
  // recorded as failures, not dropped silently.
  BenchSpec failing = spec;
  failing.cells = {{Design::TwoLayer, 4, 24}};
  const auto rows3 = run_bench(failing);
  CHECK(rows3[0].completed == 0);
  CHECK(rows3[0].failures.size() == 3);
}
