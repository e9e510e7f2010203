#pragma once

#include "tscg/proximal.hpp"
#include "tscg/types.hpp"

#include <set>
#include <vector>

namespace tscg {

struct AdmmConfig {
  double lambda1 = 0.1;     // group lasso tuning parameter
  double lambda2 = 0.1;     // unfolding nuclear norm tuning parameter
  double rho = 1.0;         // augmented Lagrangian penalty
  double varrho = 1e-4;     // eigenvalue floor for the sparse part
  int max_iter = 500;
  double tol_primal = 1e-4;
  double tol_dual = 1e-4;
  bool adapt_rho = false;   // residual balancing (x2 / /2 at ratio 10)
  int threads = 1;

  void validate() const;
};

struct AdmmResult {
  HermitianStack omega;         // sparse part, each slice >= varrho * I
  HermitianStack lowrank;       // low-rank part
  HermitianStack dual;          // final scaled-by-rho multiplier stack
  std::set<GroupIndex> support; // groups surviving the final soft-threshold
  std::vector<Index> ranks;     // per-slice ranks of the low-rank part
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double rho_final = 0.0;
  bool converged = false;
};

/// Three-block ADMM for the penalized Whittle problem: alternates the
/// per-slice log-det prox, the group soft-threshold + eigenvalue clip, and
/// the unfolding SVT, with a dual ascent step on Theta - Omega - L = 0.
AdmmResult admm_solve(const HermitianStack& fhat, const AdmmConfig& cfg);

/// Penalized objective -l_M(Omega+L) + lambda1 sqrt(M) sum_{k != l} ||.||
/// + lambda2 sqrt(M) (||L_(1)||_* + ||L_(2)||_*)/2. Requires Omega+L SPD.
double admm_objective(const HermitianStack& omega, const HermitianStack& lowrank,
                      const HermitianStack& fhat, const AdmmConfig& cfg);

}  // namespace tscg
