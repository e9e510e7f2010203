#pragma once

#include "tscg/graph.hpp"
#include "tscg/spectral.hpp"
#include "tscg/types.hpp"

#include <map>
#include <vector>

namespace tscg {

struct OrderingResult {
  std::vector<std::vector<Index>> components;
  std::vector<int> ordering;                       // permutation of component indices
  std::vector<std::map<int, double>> discrepancy_trace;  // step -> candidate -> value
};

struct Stage3Config {
  double kappa = 0.0;   // singular value floor; <= 0 skips the SVD step
  double nu = 0.0;      // entrywise floor
  double ridge = 1e-8;  // Gram regularizer, relative to tr(Gram)/dim

  void validate() const;
};

/// Conditional-variance discrepancy of a candidate component given a
/// conditioning set: max over component nodes k and frequencies j of
/// |fhat_kk - fhat_kM (fhat_MM + ridge I)^{-1} fhat_Mk - (omega_j^{-1})_kk|,
/// where (omega_j^{-1})_kk is the (k,k) entry of the inverse of the full
/// slice. ridge is relative to tr(Re fhat_MM)/|M|; conditioning may be empty.
double discrepancy(const HermitianStack& fhat, const HermitianStack& omega,
                   const std::vector<Index>& component,
                   const std::vector<Index>& conditioning, double ridge);

/// Top-down causal ordering: repeatedly picks the remaining component with
/// the smallest discrepancy given everything ordered so far; exact ties go
/// to the smallest component label.
OrderingResult order_components(const HermitianStack& fhat, const HermitianStack& omega,
                                const std::vector<std::vector<Index>>& components,
                                double ridge);

struct Stage3Result {
  CoefficientPair coeffs;            // thresholded A, B
  CoefficientPair raw;               // regression blocks before thresholding
  std::vector<DirectedEdge> edges;   // (l -> k) iff A_kl != 0 or B_kl != 0
};

/// Directed-edge estimation: for each component (in causal order) past the
/// first, least-squares regression of its series on the contemporaneous and
/// lag-1 values of all earlier components, then SVD hard thresholding at
/// kappa and masked elementwise thresholding at nu.
Stage3Result estimate_directed(const TimeSeriesPanel& panel, const OrderingResult& ordering,
                               const Stage3Config& cfg);

}  // namespace tscg
