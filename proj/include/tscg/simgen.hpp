#pragma once

#include "tscg/graph.hpp"
#include "tscg/spectral.hpp"
#include "tscg/types.hpp"

#include <cstdint>
#include <vector>

namespace tscg {

enum class Design { TwoLayer, RandomOrder, Fixture };

struct DesignSpec {
  Design design = Design::TwoLayer;
  Index p = 30;
  Index T = 1000;
  std::uint64_t seed = 1;
  double within_edge_prob = 0.02;
  double directed_edge_prob = 0.8;
  double hub_prob = 0.1;       // RandomOrder only
  double layer1_frac = 0.1;    // TwoLayer only
  Index burn_in = 200;
  bool independent_ab_masks = false;  // ablation: Bernoulli(1/2) per matrix

  void validate() const;
};

/// Noise model of one chain component: e_t = C e_{t-1} + eps_t with
/// eps_t ~ N(0, sigma_eps); innovation_factor F satisfies F F^T = sigma_eps
/// and is what the simulator multiplies standard normals by.
struct ComponentNoise {
  std::vector<Index> nodes;
  Mat C;
  Mat sigma_eps;
  Mat innovation_factor;
};

struct GroundTruth {
  ChainGraph graph;
  CoefficientPair coeffs;
  std::vector<ComponentNoise> noise;
  double spectral_radius_x = 0.0;  // rho((I-A)^{-1} B)
  bool rescale_applied = false;
  Index burn_in = 200;
};

/// Draws a chain graph, coefficient values and per-component noise models
/// for the given design. The truth's undirected edge set for the random
/// designs is the within-component complete graph (the dense component VAR
/// makes every within-component pair conditionally dependent); the fixture
/// keeps its exact printed edges.
GroundTruth generate_graph(const DesignSpec& spec);

/// Component-wise VAR(1) noise draw, burn-in discarded, T rows.
Mat simulate_noise(const GroundTruth& truth, Index T, std::uint64_t seed);

/// x_t = (I-A)^{-1} (B x_{t-1} + e_t) over the same noise stream, burn-in
/// discarded. With A = B = 0 the panel equals simulate_noise bit for bit.
TimeSeriesPanel simulate_panel(const GroundTruth& truth, Index T, std::uint64_t seed);

/// Analytic VAR(1) spectral density f(w) = (2pi)^{-1} H(w) Sigma H(w)^H with
/// H(w) = (I - C e^{-iw})^{-1}; oracle for the averaged periodogram tests.
CMat var1_spectral_density(const Mat& C, const Mat& sigma_eps, double omega);

/// Analytic inverse spectral density of the same VAR(1):
/// 2pi (I - C^T e^{iw}) Sigma^{-1} (I - C e^{-iw}).
CMat var1_inverse_spectral_density(const Mat& C, const Mat& sigma_eps, double omega);

}  // namespace tscg
