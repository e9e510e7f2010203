#include "tscg/admm.hpp"

#include "tscg/spectral.hpp"
#include "tscg/util.hpp"

#include <cmath>
#include <string>

namespace tscg {

void AdmmConfig::validate() const {
  if (lambda1 <= 0.0 || lambda2 <= 0.0)
    throw config_error("ADMM tuning parameters must be > 0");
  if (rho <= 0.0 || varrho <= 0.0) throw config_error("rho and varrho must be > 0");
  if (max_iter < 1) throw config_error("max_iter must be >= 1");
  if (tol_primal <= 0.0 || tol_primal >= 1.0 || tol_dual <= 0.0 || tol_dual >= 1.0)
    throw config_error("tolerances must lie in (0, 1)");
}

namespace {

void check_psd_input(const HermitianStack& fhat) {
  for (Index j = 0; j < fhat.size(); ++j) {
    const Vec ev = hermitian_eigenvalues(fhat[j]);
    const double top = std::max(ev.maxCoeff(), 0.0);
    if (ev.minCoeff() < -1e-8 * std::max(top, 1.0))
      throw invalid_input("spectral estimate slice " + std::to_string(j + 1) +
                          " is not positive semidefinite");
  }
}

}  // namespace

AdmmResult admm_solve(const HermitianStack& fhat, const AdmmConfig& cfg) {
  cfg.validate();
  check_psd_input(fhat);
  const Index p = fhat.p();
  const Index M = fhat.size();
  const double sqrtM = std::sqrt(static_cast<double>(M));
  const double primal_scale = std::sqrt(static_cast<double>(p * p * M));
  const double dual_scale = std::sqrt(2.0 * static_cast<double>(p * p * M));

  HermitianStack omega(p, M), lowrank(p, M), theta(p, M), dual(p, M);
  for (Index j = 0; j < M; ++j) {
    Vec d(p);
    for (Index k = 0; k < p; ++k)
      d[k] = 1.0 / std::max(fhat[j](k, k).real(), 1e-8);
    omega[j] = d.cast<Complex>().asDiagonal();
  }

  AdmmResult res;
  double rho = cfg.rho;
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    parallel_for(M, cfg.threads, [&](std::ptrdiff_t j) {
      theta[j] = logdet_prox(fhat[j], omega[j] + lowrank[j] - dual[j] / rho, rho);
    });

    HermitianStack g(p, M);
    for (Index j = 0; j < M; ++j) g[j] = theta[j] - lowrank[j] + dual[j] / rho;
    GroupThresholdResult thresholded =
        group_soft_threshold(g, 2.0 * cfg.lambda1 * sqrtM / rho);
    HermitianStack omega_next = std::move(thresholded.stack);
    parallel_for(M, cfg.threads, [&](std::ptrdiff_t j) {
      omega_next[j] = eig_clip(omega_next[j], cfg.varrho);
    });

    HermitianStack h(p, M);
    for (Index j = 0; j < M; ++j) h[j] = theta[j] - omega_next[j] + dual[j] / rho;
    HermitianStack lowrank_next = svt_mode1(h, cfg.lambda2 * sqrtM / rho);

    double primal_sq = 0.0;
    for (Index j = 0; j < M; ++j) {
      const CMat r = theta[j] - omega_next[j] - lowrank_next[j];
      dual[j] += rho * r;
      primal_sq += r.squaredNorm();
    }
    const double primal = std::sqrt(primal_sq) / primal_scale;
    const double dual_res =
        rho *
        std::sqrt(std::pow(frobenius_distance(omega_next, omega), 2) +
                  std::pow(frobenius_distance(lowrank_next, lowrank), 2)) /
        dual_scale;

    omega = std::move(omega_next);
    lowrank = std::move(lowrank_next);
    res.support = std::move(thresholded.support);
    res.iterations = iter + 1;
    res.primal_residual = primal;
    res.dual_residual = dual_res;

    if (!omega.all_finite() || !lowrank.all_finite() || !dual.all_finite())
      throw numerical_error("ADMM diverged at iteration " + std::to_string(iter + 1));

    if (primal < cfg.tol_primal && dual_res < cfg.tol_dual) {
      res.converged = true;
      break;
    }

    if (cfg.adapt_rho) {
      if (primal > 10.0 * dual_res)
        rho *= 2.0;
      else if (dual_res > 10.0 * primal)
        rho /= 2.0;
    }
  }

  // Clipping can leak tiny values back into zeroed groups; re-zero them so
  // the reported support is exact.
  for (Index k = 0; k < p; ++k) {
    for (Index l = k + 1; l < p; ++l) {
      if (res.support.count({k, l})) continue;
      for (Index j = 0; j < M; ++j) {
        omega[j](k, l) = Complex(0.0, 0.0);
        omega[j](l, k) = Complex(0.0, 0.0);
      }
    }
  }
  for (Index j = 0; j < M; ++j) {
    if (hermitian_eigenvalues(omega[j]).minCoeff() < cfg.varrho - 1e-10) {
      omega[j] = eig_clip(omega[j], cfg.varrho);
      for (Index k = 0; k < p; ++k)
        for (Index l = k + 1; l < p; ++l)
          if (!res.support.count({k, l})) {
            omega[j](k, l) = Complex(0.0, 0.0);
            omega[j](l, k) = Complex(0.0, 0.0);
          }
    }
  }

  res.ranks.reserve(static_cast<size_t>(M));
  for (Index j = 0; j < M; ++j) res.ranks.push_back(slice_rank(lowrank[j]));
  res.omega = std::move(omega);
  res.lowrank = std::move(lowrank);
  res.dual = std::move(dual);
  res.rho_final = rho;
  return res;
}

double admm_objective(const HermitianStack& omega, const HermitianStack& lowrank,
                      const HermitianStack& fhat, const AdmmConfig& cfg) {
  const double sqrtM = std::sqrt(static_cast<double>(fhat.size()));
  double loglik;
  try {
    loglik = whittle_loglik(omega + lowrank, fhat);
  } catch (const numerical_error&) {
    throw numerical_error("objective: Omega + L has a non-SPD slice");
  }
  double group_sum = 0.0;
  for (const auto& [group, norm] : group_norms(omega)) {
    (void)group;
    group_sum += 2.0 * norm;  // ordered pairs (k,l) and (l,k)
  }
  const double nuclear = 0.5 * (unfolding_nuclear_norm(lowrank, 1) +
                                unfolding_nuclear_norm(lowrank, 2));
  return -loglik + cfg.lambda1 * sqrtM * group_sum + cfg.lambda2 * sqrtM * nuclear;
}

}  // namespace tscg
