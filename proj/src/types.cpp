#include "tscg/types.hpp"

#include <cmath>

namespace tscg {

HermitianStack HermitianStack::from_slices(std::vector<CMat> slices) {
  HermitianStack out;
  if (slices.empty()) return out;
  out.p_ = slices.front().rows();
  for (auto& s : slices) {
    if (s.rows() != out.p_ || s.cols() != out.p_)
      throw invalid_input("stack slices must all be square with equal size");
    s = Complex(0.5, 0.0) * (s + s.adjoint().eval());
  }
  out.slices_ = std::move(slices);
  return out;
}

double HermitianStack::frobenius_norm() const {
  double sq = 0.0;
  for (const auto& s : slices_) sq += s.squaredNorm();
  return std::sqrt(sq);
}

double HermitianStack::max_asymmetry() const {
  double worst = 0.0;
  for (const auto& s : slices_)
    worst = std::max(worst, (s - s.adjoint()).cwiseAbs().maxCoeff());
  return worst;
}

bool HermitianStack::all_finite() const {
  for (const auto& s : slices_)
    if (!s.allFinite()) return false;
  return true;
}

HermitianStack operator+(const HermitianStack& a, const HermitianStack& b) {
  HermitianStack out(a.p(), a.size());
  for (Index j = 0; j < a.size(); ++j) out[j] = a[j] + b[j];
  return out;
}

HermitianStack operator-(const HermitianStack& a, const HermitianStack& b) {
  HermitianStack out(a.p(), a.size());
  for (Index j = 0; j < a.size(); ++j) out[j] = a[j] - b[j];
  return out;
}

HermitianStack operator*(double c, const HermitianStack& a) {
  HermitianStack out(a.p(), a.size());
  for (Index j = 0; j < a.size(); ++j) out[j] = Complex(c, 0.0) * a[j];
  return out;
}

double frobenius_distance(const HermitianStack& a, const HermitianStack& b) {
  double sq = 0.0;
  for (Index j = 0; j < a.size(); ++j) sq += (a[j] - b[j]).squaredNorm();
  return std::sqrt(sq);
}

}  // namespace tscg
