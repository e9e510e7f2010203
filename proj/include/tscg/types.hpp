#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace tscg {

using Scalar = double;
using Complex = std::complex<double>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Index = Eigen::Index;

// Thrown on malformed user data (bad CSV cell, non-finite panel entry, ...).
// CLI maps it to exit code 1.
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown on unusable tuning/configuration values. Also exit code 1.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a computation fails numerically (divergence, singular
// system without ridge, non-PD matrix where PD is required). Exit code 2.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stack of M complex p x p matrices, one per frequency; slices are kept
/// Hermitian ((X + X^H)/2 is applied whenever a slice is set from raw data).
class HermitianStack {
 public:
  HermitianStack() = default;
  HermitianStack(Index p, Index slices)
      : p_(p), slices_(static_cast<size_t>(slices), CMat::Zero(p, p)) {}

  static HermitianStack identity(Index p, Index slices) {
    HermitianStack s(p, slices);
    for (auto& m : s.slices_) m = CMat::Identity(p, p);
    return s;
  }

  // Builds a stack from raw slices, symmetrizing each one.
  static HermitianStack from_slices(std::vector<CMat> slices);

  Index p() const { return p_; }
  Index size() const { return static_cast<Index>(slices_.size()); }

  const CMat& operator[](Index j) const { return slices_[static_cast<size_t>(j)]; }
  CMat& operator[](Index j) { return slices_[static_cast<size_t>(j)]; }

  // Assigns (x + x^H)/2 to slice j.
  void set_symmetrized(Index j, const CMat& x) {
    slices_[static_cast<size_t>(j)] = Complex(0.5, 0.0) * (x + x.adjoint());
  }

  const std::vector<CMat>& slices() const { return slices_; }

  double frobenius_norm() const;
  double max_asymmetry() const;
  bool all_finite() const;

 private:
  Index p_ = 0;
  std::vector<CMat> slices_;
};

HermitianStack operator+(const HermitianStack& a, const HermitianStack& b);
HermitianStack operator-(const HermitianStack& a, const HermitianStack& b);
HermitianStack operator*(double c, const HermitianStack& a);

/// Frobenius distance between two stacks of equal shape.
double frobenius_distance(const HermitianStack& a, const HermitianStack& b);

/// Eigenvalues of a Hermitian matrix, ascending. Symmetrizes the input view.
template <typename Derived>
Vec hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& x) {
  const CMat h = Complex(0.5, 0.0) * (x.derived() + x.derived().adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// log det of a Hermitian positive definite matrix via eigenvalues.
/// Throws numerical_error if any eigenvalue is <= 0.
template <typename Derived>
double logdet_hermitian(const Eigen::MatrixBase<Derived>& x) {
  const Vec ev = hermitian_eigenvalues(x);
  double out = 0.0;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev[i] <= 0.0)
      throw numerical_error("logdet requires a positive definite matrix (eigenvalue " +
                            std::to_string(ev[i]) + ")");
    out += std::log(ev[i]);
  }
  return out;
}

}  // namespace tscg
