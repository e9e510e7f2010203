#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tscg/admm.hpp"
#include "tscg/causal.hpp"
#include "tscg/pipeline.hpp"
#include "tscg/rng.hpp"
#include "tscg/simgen.hpp"

#include <cmath>
#include <numbers>

using namespace tscg;

namespace {

HermitianStack random_spd_stack(Index p, Index M, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CMat> slices;
  for (Index j = 0; j < M; ++j) {
    CMat g(p, p);
    for (Index a = 0; a < p; ++a)
      for (Index b = 0; b < p; ++b) g(a, b) = Complex(rng.gaussian(), rng.gaussian());
    slices.push_back(CMat(g * g.adjoint() / double(p) + 0.4 * CMat::Identity(p, p)));
  }
  return HermitianStack::from_slices(slices);
}

HermitianStack inverse_stack(const HermitianStack& s) {
  HermitianStack inv(s.p(), s.size());
  for (Index j = 0; j < s.size(); ++j) inv.set_symmetrized(j, s[j].inverse());
  return inv;
}

}  // namespace

TEST_CASE("discrepancy vanishes on the whole node set with the exact inverse") {
  const auto fhat = random_spd_stack(4, 3, 1);
  const auto omega = inverse_stack(fhat);
  CHECK(discrepancy(fhat, omega, {0, 1, 2, 3}, {}, 0.0) < 1e-10);
}

TEST_CASE("discrepancy separates source and child components (Schur oracle)") {
  // Contemporaneous 2+2 linear system with white noise: the population
  // spectra are constant in frequency and every quantity is hand-computable.
  const Index p = 4;
  Mat A = Mat::Zero(p, p);
  A(2, 0) = 0.8;
  A(2, 1) = 0.3;
  A(3, 1) = 0.5;
  const Mat ia = (Mat::Identity(p, p) - A).inverse();
  const Mat sigma_x = ia * ia.transpose();  // Sigma_e = I
  const double two_pi = 2.0 * std::numbers::pi;

  const Index M = 2;
  HermitianStack fhat(p, M), omega(p, M);
  for (Index j = 0; j < M; ++j) {
    fhat[j] = (sigma_x / two_pi).cast<Complex>();
    omega[j] = (two_pi * Mat::Identity(p, p)).cast<Complex>();  // f_e^{-1}
  }

  const std::vector<Index> source{0, 1}, child{2, 3};
  // Source block: f_x over {0,1} is I/(2 pi) and (omega^{-1})_kk = 1/(2 pi).
  CHECK(discrepancy(fhat, omega, source, {}, 0.0) < 1e-12);

  // Child without conditioning is inflated by the parent-driven variance:
  // diag(A_c A_c^T)/(2 pi) with A_c the cross block.
  const double inflation =
      std::max(A.row(2).squaredNorm(), A.row(3).squaredNorm()) / two_pi;
  CHECK(discrepancy(fhat, omega, child, {}, 0.0) ==
        doctest::Approx(inflation).epsilon(1e-9));

  // Conditioning on the source removes the inflation (hand Schur identity).
  CHECK(discrepancy(fhat, omega, child, source, 0.0) < 1e-10);
}

TEST_CASE("discrepancy input validation") {
  const auto fhat = random_spd_stack(3, 2, 3);
  CHECK_THROWS_AS(discrepancy(fhat, fhat, {0, 1}, {1, 2}, 0.0), invalid_input);

  // A singular conditioning block must either throw (ridge 0) or be saved
  // by the ridge.
  HermitianStack singular(3, 1);
  singular[0] = CMat::Zero(3, 3);
  singular[0](2, 2) = Complex(1.0, 0.0);
  const auto omega = HermitianStack::identity(3, 1);
  CHECK_THROWS_AS(discrepancy(singular, omega, {2}, {0, 1}, 0.0), numerical_error);
  CHECK_NOTHROW(discrepancy(singular, omega, {2}, {0, 1}, 1e-6));
}

TEST_CASE("discrepancy is invariant under joint relabeling") {
  const auto fhat = random_spd_stack(4, 2, 9);
  const auto omega = random_spd_stack(4, 2, 10);
  const std::vector<Index> perm{2, 3, 1, 0};
  HermitianStack fp(4, 2), op(4, 2);
  for (Index j = 0; j < 2; ++j)
    for (Index a = 0; a < 4; ++a)
      for (Index b = 0; b < 4; ++b) {
        fp[j](perm[size_t(a)], perm[size_t(b)]) = fhat[j](a, b);
        op[j](perm[size_t(a)], perm[size_t(b)]) = omega[j](a, b);
      }
  const double base = discrepancy(fhat, omega, {0, 1}, {2, 3}, 1e-8);
  const double moved = discrepancy(fp, op, {perm[0], perm[1]}, {perm[2], perm[3]}, 1e-8);
  CHECK(base == doctest::Approx(moved).epsilon(1e-10));
}

TEST_CASE("ordering of a single component is trivial") {
  const auto fhat = random_spd_stack(3, 2, 5);
  const auto result = order_components(fhat, inverse_stack(fhat), {{0, 1, 2}}, 0.0);
  CHECK(result.ordering == std::vector<int>{0});
  CHECK(result.discrepancy_trace.size() == 1);
}

TEST_CASE("exact ties break on the smallest component label") {
  // Two identical independent blocks make the discrepancies bitwise equal.
  const Index p = 4, M = 2;
  HermitianStack fhat(p, M);
  for (Index j = 0; j < M; ++j) {
    CMat block(2, 2);
    block << Complex(1.0, 0), Complex(0.25, 0.1), Complex(0.25, -0.1), Complex(0.9, 0);
    fhat[j] = CMat::Zero(p, p);
    fhat[j].topLeftCorner(2, 2) = block;
    fhat[j].bottomRightCorner(2, 2) = block;
  }
  const auto omega = inverse_stack(fhat);
  const auto result = order_components(fhat, omega, {{0, 1}, {2, 3}}, 0.0);
  CHECK(result.ordering.front() == 0);
  CHECK(result.ordering.size() == 2);
  CHECK(result.discrepancy_trace.front().at(0) == result.discrepancy_trace.front().at(1));
}

TEST_CASE("ordering always emits a full permutation") {
  const auto fhat = random_spd_stack(6, 2, 31);
  const auto omega = random_spd_stack(6, 2, 32);
  const auto result =
      order_components(fhat, omega, {{0, 3}, {1}, {2, 5}, {4}}, 1e-8);
  std::vector<int> sorted = result.ordering;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3});
  CHECK(result.discrepancy_trace.size() == 4);
  CHECK(result.discrepancy_trace.back().size() == 1);
}

TEST_CASE("noise-only single component gives zero coefficients") {
  Rng rng(8);
  Mat data(200, 3);
  for (Index t = 0; t < 200; ++t)
    for (Index k = 0; k < 3; ++k) data(t, k) = rng.gaussian();
  const auto panel = TimeSeriesPanel::from_matrix(data);
  OrderingResult ordering;
  ordering.components = {{0, 1, 2}};
  ordering.ordering = {0};
  Stage3Config cfg;
  const auto result = estimate_directed(panel, ordering, cfg);
  CHECK(result.coeffs.A.norm() == 0.0);
  CHECK(result.coeffs.B.norm() == 0.0);
  CHECK(result.edges.empty());
}

TEST_CASE("noiseless linear system recovers coefficients") {
  // x2 = 0.8 x1(t) + 0.5 x1(t-1) + tiny noise; oracle ordering {1} then {2}.
  Rng rng(14);
  const Index T = 500;
  Mat data(T, 2);
  double prev = rng.gaussian();
  data(0, 0) = prev;
  data(0, 1) = 0.8 * prev + 0.01 * rng.gaussian();
  for (Index t = 1; t < T; ++t) {
    const double x1 = rng.gaussian();
    data(t, 0) = x1;
    data(t, 1) = 0.8 * x1 + 0.5 * prev + 0.01 * rng.gaussian();
    prev = x1;
  }
  const auto panel = TimeSeriesPanel::from_matrix(data);
  OrderingResult ordering;
  ordering.components = {{0}, {1}};
  ordering.ordering = {0, 1};
  Stage3Config cfg;
  cfg.kappa = 1.0 / std::sqrt(double(T));
  cfg.nu = std::pow(double(T), -0.4);
  const auto result = estimate_directed(panel, ordering, cfg);
  CHECK(std::abs(result.coeffs.A(1, 0) - 0.8) < 0.02);
  CHECK(std::abs(result.coeffs.B(1, 0) - 0.5) < 0.02);
  CHECK(result.coeffs.A(0, 1) == 0.0);
  CHECK(result.coeffs.B(0, 1) == 0.0);
  REQUIRE(result.edges.size() == 1);
  CHECK(result.edges[0].from == 0);
  CHECK(result.edges[0].to == 1);
  CHECK(result.edges[0].in_A);
  CHECK(result.edges[0].in_B);
}

TEST_CASE("zero thresholds reproduce the raw regression blocks exactly") {
  Rng rng(77);
  Mat data(120, 4);
  for (Index t = 0; t < 120; ++t)
    for (Index k = 0; k < 4; ++k) data(t, k) = rng.gaussian();
  const auto panel = TimeSeriesPanel::from_matrix(data);
  OrderingResult ordering;
  ordering.components = {{1}, {0, 3}, {2}};
  ordering.ordering = {0, 1, 2};
  Stage3Config cfg;
  cfg.kappa = 0.0;
  cfg.nu = 0.0;
  cfg.ridge = 0.0;
  const auto result = estimate_directed(panel, ordering, cfg);
  CHECK((result.coeffs.A - result.raw.A).norm() == 0.0);
  CHECK((result.coeffs.B - result.raw.B).norm() == 0.0);
}

TEST_CASE("the ordering mask is exact and the output is feasible") {
  DesignSpec spec;
  spec.design = Design::TwoLayer;
  spec.p = 12;
  spec.seed = 6;
  const auto truth = generate_graph(spec);
  const auto panel = simulate_panel(truth, 600, 7);

  OrderingResult ordering;
  ordering.components = truth.graph.components;
  ordering.ordering.resize(truth.graph.components.size());
  for (size_t g = 0; g < ordering.ordering.size(); ++g)
    ordering.ordering[g] = static_cast<int>(g);
  Stage3Config cfg;
  cfg.kappa = 3.0 / std::sqrt(600.0);
  cfg.nu = 2.0 * std::pow(600.0, -0.4);
  const auto result = estimate_directed(panel, ordering, cfg);

  std::vector<int> node_pos(12);
  for (size_t g = 0; g < ordering.components.size(); ++g)
    for (Index v : ordering.components[g]) node_pos[size_t(v)] = static_cast<int>(g);
  for (Index k = 0; k < 12; ++k)
    for (Index l = 0; l < 12; ++l)
      if (result.coeffs.A(k, l) != 0.0 || result.coeffs.B(k, l) != 0.0)
        CHECK(node_pos[size_t(k)] > node_pos[size_t(l)]);

  ChainGraph estimated;
  estimated.p = 12;
  estimated.undirected = truth.graph.undirected;
  estimated.directed = result.edges;
  estimated.components = truth.graph.components;
  estimated.ordering = ordering.ordering;
  CHECK(is_feasible(estimated, result.coeffs).feasible);
}

TEST_CASE("design-1 ordering respects parent components (Monte Carlo)") {
  // Oracle component partition, stage-1 estimate for omega. The per-node
  // model variance must share the averaged periodogram's smoothing bias,
  // which the penalized Whittle estimate does and the analytic noise
  // spectrum does not; ordering is judged by parents-before-children.
  int good = 0;
  const int seeds = 10;
  for (int s = 0; s < seeds; ++s) {
    DesignSpec spec;
    spec.design = Design::TwoLayer;
    spec.p = 30;
    spec.T = 1000;
    spec.seed = 9000 + std::uint64_t(s);
    const auto truth = generate_graph(spec);
    if (truth.graph.directed.empty()) {
      ++good;  // nothing to order against
      continue;
    }
    const auto panel = simulate_panel(truth, 1000, spec.seed + 1);
    auto work = panel;
    center_columns(work);

    EstimationConfig cfg;
    const auto tuning = resolve_tuning(1000, 30, cfg);
    const auto grid = make_grid(1000, tuning.m);
    const auto fhat = averaged_periodogram(dft(work), grid);
    AdmmConfig acfg = cfg.admm;
    acfg.lambda1 = tuning.lambda1;
    acfg.lambda2 = tuning.lambda2;
    const auto stage1 = admm_solve(fhat, acfg);

    const auto result =
        order_components(fhat, stage1.omega, truth.graph.components, cfg.ridge);
    std::vector<int> position(result.ordering.size());
    for (size_t i = 0; i < result.ordering.size(); ++i)
      position[size_t(result.ordering[i])] = static_cast<int>(i);
    bool ok = true;
    for (const auto& e : truth.graph.directed) {
      const int parent_comp = truth.graph.component_of(e.from);
      const int child_comp = truth.graph.component_of(e.to);
      if (position[size_t(parent_comp)] >= position[size_t(child_comp)]) ok = false;
    }
    if (ok) ++good;
  }
  CHECK(good >= 9);
}
