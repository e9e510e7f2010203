#include "tscg/proximal.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace tscg {

std::map<GroupIndex, double> group_norms(const HermitianStack& stack) {
  std::map<GroupIndex, double> norms;
  const Index p = stack.p();
  for (Index k = 0; k < p; ++k) {
    for (Index l = k + 1; l < p; ++l) {
      double sq = 0.0;
      for (Index j = 0; j < stack.size(); ++j) sq += std::norm(stack[j](k, l));
      norms[{k, l}] = std::sqrt(sq);
    }
  }
  return norms;
}

GroupThresholdResult group_soft_threshold(const HermitianStack& stack, double threshold) {
  if (threshold < 0.0) throw invalid_input("group threshold must be >= 0");
  GroupThresholdResult out;
  out.stack = stack;
  for (const auto& [group, norm] : group_norms(stack)) {
    const auto [k, l] = group;
    if (norm <= threshold) {
      for (Index j = 0; j < out.stack.size(); ++j) {
        out.stack[j](k, l) = Complex(0.0, 0.0);
        out.stack[j](l, k) = Complex(0.0, 0.0);
      }
    } else {
      const double scale = 1.0 - threshold / norm;
      for (Index j = 0; j < out.stack.size(); ++j) {
        out.stack[j](k, l) *= scale;
        out.stack[j](l, k) = std::conj(out.stack[j](k, l));
      }
      out.support.insert(group);
    }
  }
  return out;
}

Unfolding unfold(const HermitianStack& stack, int mode) {
  if (mode != 1 && mode != 2) throw invalid_input("unfold: mode must be 1 or 2");
  const Index p = stack.p();
  const Index M = stack.size();
  Unfolding out;
  out.mode = mode;
  out.matrix.resize(p, p * M);
  for (Index j = 0; j < M; ++j) {
    if (mode == 1)
      out.matrix.middleCols(j * p, p) = stack[j];
    else
      out.matrix.middleCols(j * p, p) = stack[j].transpose();
  }
  return out;
}

HermitianStack fold_mode1(const CMat& matrix, Index p) {
  if (matrix.rows() != p || matrix.cols() % p != 0)
    throw invalid_input("fold_mode1: matrix shape is not p x (p*M)");
  const Index M = matrix.cols() / p;
  HermitianStack out(p, M);
  for (Index j = 0; j < M; ++j) out[j] = matrix.middleCols(j * p, p);
  return out;
}

double unfolding_nuclear_norm(const HermitianStack& stack, int mode) {
  const CMat u = unfold(stack, mode).matrix;
  Eigen::BDCSVD<CMat> svd(u);
  return svd.singularValues().sum();
}

CMat svt_unfolded_mode1(const HermitianStack& stack, double threshold) {
  if (threshold < 0.0) throw invalid_input("SVT threshold must be >= 0");
  const CMat u = unfold(stack, 1).matrix;
  if (threshold == 0.0) return u;
  Eigen::BDCSVD<CMat> svd(u, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw numerical_error("SVD failed on the mode-1 unfolding (p = " +
                          std::to_string(stack.p()) + ", M = " +
                          std::to_string(stack.size()) + ")");
  Vec s = svd.singularValues();
  for (Index i = 0; i < s.size(); ++i) s[i] = std::max(s[i] - threshold, 0.0);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
}

HermitianStack svt_mode1(const HermitianStack& stack, double threshold) {
  if (threshold == 0.0) return stack;
  HermitianStack folded = fold_mode1(svt_unfolded_mode1(stack, threshold), stack.p());
  HermitianStack out(stack.p(), stack.size());
  for (Index j = 0; j < stack.size(); ++j) out.set_symmetrized(j, folded[j]);
  return out;
}

CMat logdet_prox(const CMat& fhat_slice, const CMat& s_slice, double rho) {
  if (rho <= 0.0) throw invalid_input("logdet_prox: rho must be > 0");
  const CMat w = Complex(0.5, 0.0) *
                 ((rho * s_slice - fhat_slice) + (rho * s_slice - fhat_slice).adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(w);
  Vec mu = es.eigenvalues();
  for (Index i = 0; i < mu.size(); ++i)
    mu[i] = (mu[i] + std::sqrt(mu[i] * mu[i] + 4.0 * rho)) / (2.0 * rho);
  return es.eigenvectors() * mu.asDiagonal() * es.eigenvectors().adjoint();
}

CMat eig_clip(const CMat& slice, double floor) {
  Eigen::SelfAdjointEigenSolver<CMat> es(
      Complex(0.5, 0.0) * (slice + slice.adjoint()));
  Vec ev = es.eigenvalues();
  if (ev.minCoeff() >= floor) return Complex(0.5, 0.0) * (slice + slice.adjoint());
  for (Index i = 0; i < ev.size(); ++i) ev[i] = std::max(ev[i], floor);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Index slice_rank(const CMat& slice, double eps_rel) {
  Eigen::BDCSVD<CMat> svd(slice);
  const Vec& s = svd.singularValues();
  if (s.size() == 0 || s[0] <= 0.0) return 0;
  const double cut = eps_rel * s[0];
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s[i] > cut) ++rank;
  return rank;
}

}  // namespace tscg
