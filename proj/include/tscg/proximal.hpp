#pragma once

#include "tscg/types.hpp"

#include <map>
#include <set>
#include <utility>

namespace tscg {

/// Unordered off-diagonal index pair (k, l) with k < l, 0-based.
using GroupIndex = std::pair<Index, Index>;

/// Cross-frequency group norms sqrt(sum_j |X_kl(w_j)|^2) for every k < l.
std::map<GroupIndex, double> group_norms(const HermitianStack& stack);

struct GroupThresholdResult {
  HermitianStack stack;
  std::set<GroupIndex> support;  // groups with norm > threshold
};

/// Group soft-thresholding of the off-diagonal (k,l) groups: a group with
/// norm g <= threshold is set to exact zero across all slices (both (k,l)
/// and (l,k)); otherwise it is scaled by 1 - threshold/g. Diagonals are
/// untouched and Hermitian symmetry is preserved exactly.
GroupThresholdResult group_soft_threshold(const HermitianStack& stack, double threshold);

/// Mode-q matricization of the stack. Mode 1 is the p x (pM) matrix whose
/// column (l, j) is column l of slice j; mode 2 stacks the conjugated rows,
/// so for Hermitian slices the two share their singular values.
struct Unfolding {
  CMat matrix;
  int mode = 1;
};

Unfolding unfold(const HermitianStack& stack, int mode);

/// Inverse of unfold(stack, 1).
HermitianStack fold_mode1(const CMat& matrix, Index p);

/// Nuclear norm of the mode-q unfolding.
double unfolding_nuclear_norm(const HermitianStack& stack, int mode);

/// Singular-value soft thresholding of the mode-1 unfolding (no refolding,
/// no symmetrization). Exposed so tests can check the pre-symmetrization
/// prox exactly.
CMat svt_unfolded_mode1(const HermitianStack& stack, double threshold);

/// SVT of the mode-1 unfolding, refolded and Hermitian-symmetrized per slice.
HermitianStack svt_mode1(const HermitianStack& stack, double threshold);

/// argmin over Theta > 0 of -log det Theta + tr(Theta fhat) +
/// (rho/2)||Theta - s||_F^2, in closed form: eigendecompose
/// rho*s - fhat = V diag(mu) V^H and map mu -> (mu + sqrt(mu^2 + 4 rho))/(2 rho).
CMat logdet_prox(const CMat& fhat_slice, const CMat& s_slice, double rho);

/// Frobenius projection onto {X Hermitian : eigenvalues >= floor}.
CMat eig_clip(const CMat& slice, double floor);

/// Per-slice rank under the relative singular value rule
/// sigma_i > eps_rel * sigma_max (zero matrix has rank 0).
Index slice_rank(const CMat& slice, double eps_rel = 1e-6);

}  // namespace tscg
