#pragma once

#include "tscg/admm.hpp"
#include "tscg/causal.hpp"
#include "tscg/graph.hpp"
#include "tscg/spectral.hpp"
#include "tscg/types.hpp"

#include <map>
#include <string>

namespace tscg {

/// All tuning constants. Rate formulas (T = sample length):
///   m      = min(round(m_const (log T)^{1/3} T^{2/3}), largest m with M >= m_min_blocks)
///   lambda1 = lambda1_const * T^{-1/3 + eta}
///   lambda2 = gamma * lambda1
///   kappa  = kappa_const * T^{-1/2}
///   nu     = nu_const * T^{-1/2 + zeta}
/// Defaults were calibrated on the two-layer benchmark at (p, T) = (30, 1000);
/// see README.
struct EstimationConfig {
  double m_const = 1.0;
  int m_min_blocks = 5;
  double lambda1_const = 0.4;
  double eta = 1.0 / 16.0;
  double gamma = 1.0;
  double kappa_const = 7.0;
  double nu_const = 2.0;
  double zeta = 0.1;
  double ridge = 1e-6;  // Schur inversion regularizer (relative)
  bool center = true;
  bool standardize = false;
  AdmmConfig admm;      // lambda1/lambda2 overwritten by resolve_tuning
  Stage3Config stage3;  // kappa/nu overwritten by resolve_tuning
  int threads = 1;

  void validate() const;
};

struct ResolvedTuning {
  int m = 0;
  int M = 0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double kappa = 0.0;
  double nu = 0.0;
};

/// Concrete (m, M, lambda1, lambda2, kappa, nu) for a given panel size.
/// Throws config_error when T is too small for m_min_blocks blocks.
ResolvedTuning resolve_tuning(Index T, Index p, const EstimationConfig& cfg);

struct StageTimings {
  double spectral_sec = 0.0;
  double admm_sec = 0.0;
  double ordering_sec = 0.0;
  double regression_sec = 0.0;
  double total_sec = 0.0;
};

struct AdmmSummary {
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
  std::vector<Index> ranks;
};

struct RunReport {
  ChainGraph estimated;
  CoefficientPair coeffs;
  ResolvedTuning tuning;
  AdmmSummary admm;
  OrderingResult ordering;
  EstimationConfig config;
  StageTimings timings;
  std::vector<std::string> warnings;
};

/// Full three-stage pipeline: DFT + averaged periodogram, penalized Whittle
/// ADMM for the undirected edges, discrepancy ordering, masked regression
/// for the directed edges. Errors are rethrown with a stage label.
RunReport fit(const TimeSeriesPanel& panel, const EstimationConfig& cfg);

}  // namespace tscg
