#include "tscg/causal.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace tscg {

void Stage3Config::validate() const {
  if (ridge < 0.0) throw config_error("stage-3 ridge must be >= 0");
}

double discrepancy(const HermitianStack& fhat, const HermitianStack& omega,
                   const std::vector<Index>& component,
                   const std::vector<Index>& conditioning, double ridge) {
  if (fhat.size() != omega.size() || fhat.p() != omega.p())
    throw invalid_input("discrepancy: stack shapes differ");
  for (Index v : component)
    if (std::find(conditioning.begin(), conditioning.end(), v) != conditioning.end())
      throw invalid_input("discrepancy: component and conditioning sets overlap");

  const Index M = fhat.size();
  const Index c = static_cast<Index>(conditioning.size());
  double worst = 0.0;
  for (Index j = 0; j < M; ++j) {
    Vec model_var(component.size());
    {
      const CMat inv = omega[j].inverse();
      for (size_t i = 0; i < component.size(); ++i)
        model_var[static_cast<Index>(i)] = inv(component[i], component[i]).real();
    }
    CVec schur = CVec::Zero(static_cast<Index>(component.size()));
    if (c > 0) {
      CMat fmm(c, c);
      for (Index a = 0; a < c; ++a)
        for (Index b = 0; b < c; ++b)
          fmm(a, b) = fhat[j](conditioning[static_cast<size_t>(a)],
                              conditioning[static_cast<size_t>(b)]);
      double trace_scale = fmm.trace().real() / static_cast<double>(c);
      if (trace_scale <= 0.0) trace_scale = 1.0;
      fmm += Complex(ridge * trace_scale, 0.0) * CMat::Identity(c, c);
      Eigen::LLT<CMat> llt(fmm);
      if (llt.info() != Eigen::Success) {
        if (ridge == 0.0)
          throw numerical_error(
              "discrepancy: conditioning block is singular; supply a ridge > 0");
        throw numerical_error("discrepancy: conditioning block factorization failed");
      }
      CMat fmk(c, static_cast<Index>(component.size()));
      for (Index a = 0; a < c; ++a)
        for (size_t i = 0; i < component.size(); ++i)
          fmk(a, static_cast<Index>(i)) =
              fhat[j](conditioning[static_cast<size_t>(a)], component[i]);
      const CMat solved = llt.solve(fmk);
      for (size_t i = 0; i < component.size(); ++i)
        schur[static_cast<Index>(i)] =
            (fmk.col(static_cast<Index>(i)).adjoint() * solved.col(static_cast<Index>(i)))(0);
    }
    for (size_t i = 0; i < component.size(); ++i) {
      const Index k = component[i];
      const Complex gap = fhat[j](k, k) - schur[static_cast<Index>(i)] -
                          Complex(model_var[static_cast<Index>(i)], 0.0);
      worst = std::max(worst, std::abs(gap));
    }
  }
  return worst;
}

OrderingResult order_components(const HermitianStack& fhat, const HermitianStack& omega,
                                const std::vector<std::vector<Index>>& components,
                                double ridge) {
  OrderingResult result;
  result.components = components;
  const int G = static_cast<int>(components.size());
  std::vector<bool> placed(static_cast<size_t>(G), false);
  std::vector<Index> conditioning;
  for (int step = 0; step < G; ++step) {
    std::map<int, double> candidates;
    int best = -1;
    for (int g = 0; g < G; ++g) {
      if (placed[static_cast<size_t>(g)]) continue;
      const double d =
          discrepancy(fhat, omega, components[static_cast<size_t>(g)], conditioning, ridge);
      candidates[g] = d;
      // Strict < keeps exact ties on the smallest component label.
      if (best < 0 || d < candidates[best]) best = g;
    }
    result.discrepancy_trace.push_back(std::move(candidates));
    result.ordering.push_back(best);
    placed[static_cast<size_t>(best)] = true;
    conditioning.insert(conditioning.end(), components[static_cast<size_t>(best)].begin(),
                        components[static_cast<size_t>(best)].end());
    std::sort(conditioning.begin(), conditioning.end());
  }
  return result;
}

Stage3Result estimate_directed(const TimeSeriesPanel& panel, const OrderingResult& ordering,
                               const Stage3Config& cfg) {
  cfg.validate();
  const Index T = panel.T();
  const Index p = panel.p();
  const int G = static_cast<int>(ordering.ordering.size());

  Stage3Result out;
  out.raw.A = Mat::Zero(p, p);
  out.raw.B = Mat::Zero(p, p);

  std::vector<Index> earlier;
  for (int s = 1; s < G; ++s) {
    earlier.insert(earlier.end(),
                   ordering.components[static_cast<size_t>(ordering.ordering[s - 1])].begin(),
                   ordering.components[static_cast<size_t>(ordering.ordering[s - 1])].end());
    std::sort(earlier.begin(), earlier.end());
    const auto& target = ordering.components[static_cast<size_t>(ordering.ordering[s])];
    const Index q = static_cast<Index>(earlier.size());

    Mat y(T - 1, 2 * q);
    for (Index i = 0; i < q; ++i) {
      y.col(i) = panel.data.col(earlier[static_cast<size_t>(i)]).tail(T - 1);
      y.col(q + i) = panel.data.col(earlier[static_cast<size_t>(i)]).head(T - 1);
    }
    Mat x(T - 1, static_cast<Index>(target.size()));
    for (size_t i = 0; i < target.size(); ++i)
      x.col(static_cast<Index>(i)) = panel.data.col(target[i]).tail(T - 1);

    Mat gram = y.transpose() * y;
    const double trace_scale = gram.trace() / static_cast<double>(2 * q);
    gram.diagonal().array() += cfg.ridge * trace_scale;
    Eigen::LLT<Mat> llt(gram);
    if (llt.info() != Eigen::Success) {
      if (cfg.ridge == 0.0)
        throw numerical_error(
            "stage 3: singular regression Gram matrix; supply a ridge > 0");
      throw numerical_error("stage 3: Gram factorization failed");
    }
    const Mat coef = llt.solve(y.transpose() * x).transpose();  // targets x 2q
    for (size_t r = 0; r < target.size(); ++r) {
      for (Index i = 0; i < q; ++i) {
        out.raw.A(target[r], earlier[static_cast<size_t>(i)]) =
            coef(static_cast<Index>(r), i);
        out.raw.B(target[r], earlier[static_cast<size_t>(i)]) =
            coef(static_cast<Index>(r), q + i);
      }
    }
  }

  auto svd_hard_threshold = [&](const Mat& m) -> Mat {
    if (cfg.kappa <= 0.0) return m;
    Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vec s = svd.singularValues();
    for (Index i = 0; i < s.size(); ++i)
      if (s[i] <= cfg.kappa) s[i] = 0.0;
    return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
  };

  std::vector<int> position(ordering.components.size());
  for (size_t s = 0; s < ordering.ordering.size(); ++s)
    position[static_cast<size_t>(ordering.ordering[s])] = static_cast<int>(s);
  std::vector<int> node_position(static_cast<size_t>(p), 0);
  for (size_t g = 0; g < ordering.components.size(); ++g)
    for (Index v : ordering.components[g])
      node_position[static_cast<size_t>(v)] = position[g];

  const Mat a_svd = svd_hard_threshold(out.raw.A);
  const Mat b_svd = svd_hard_threshold(out.raw.B);
  out.coeffs.A = Mat::Zero(p, p);
  out.coeffs.B = Mat::Zero(p, p);
  for (Index k = 0; k < p; ++k) {
    for (Index l = 0; l < p; ++l) {
      if (k == l || node_position[static_cast<size_t>(k)] <= node_position[static_cast<size_t>(l)])
        continue;
      if (std::abs(a_svd(k, l)) > cfg.nu) out.coeffs.A(k, l) = a_svd(k, l);
      if (std::abs(b_svd(k, l)) > cfg.nu) out.coeffs.B(k, l) = b_svd(k, l);
    }
  }

  for (Index k = 0; k < p; ++k) {
    for (Index l = 0; l < p; ++l) {
      const bool in_a = out.coeffs.A(k, l) != 0.0;
      const bool in_b = out.coeffs.B(k, l) != 0.0;
      if (in_a || in_b) out.edges.push_back({l, k, in_a, in_b});
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

}  // namespace tscg
