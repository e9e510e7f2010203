#pragma once

#include "tscg/types.hpp"

#include <vector>

namespace tscg {

/// T x p observation matrix, rows = time points, columns = series.
/// T is even after construction: an odd-length input is truncated by
/// dropping its first row (truncated_odd records that this happened).
struct TimeSeriesPanel {
  Mat data;
  bool truncated_odd = false;

  Index T() const { return data.rows(); }
  Index p() const { return data.cols(); }

  /// Validates and adopts a raw matrix (finite entries, T >= 2, even T).
  static TimeSeriesPanel from_matrix(Mat m);
};

/// Subtracts the column means in place.
void center_columns(TimeSeriesPanel& panel);

/// Scales each column to unit sample variance in place (after centering).
void standardize_columns(TimeSeriesPanel& panel);

/// Blocked layout of the positive Fourier frequencies: M blocks of width
/// 2m+1 covering indices 1..T/2-1, block j centered at index j(2m+1)-m.
struct FrequencyGrid {
  int m = 0;
  int M = 0;
  Index T = 0;
  std::vector<int> central_indices;  // 1-based Fourier indices
  Vec central_freqs;                 // 2*pi*index/T, in (0, pi)
};

/// Builds the grid; throws config_error when M would be zero.
FrequencyGrid make_grid(Index T, int m);

/// Normalized DFT coefficients: row j-1 holds d(w_j) for the 1-based
/// Fourier index j in [T], d(w_j) = T^{-1/2} sum_t x_t exp(-i w_j t).
struct DftFrame {
  CMat coeffs;  // T x p
  Index T() const { return coeffs.rows(); }
  Index p() const { return coeffs.cols(); }
};

DftFrame dft(const TimeSeriesPanel& panel);

/// Inverse of dft(); reconstructs the panel from its coefficients.
Mat inverse_dft(const DftFrame& frame);

/// Averaged periodogram: slice j = (2*pi*(2m+1))^{-1} sum_{n=-m..m} d d^H
/// over the 2m+1 Fourier ordinates of block j. Slices are Hermitian PSD.
HermitianStack averaged_periodogram(const DftFrame& frame, const FrequencyGrid& grid);

/// Whittle log-likelihood sum_j [log det Theta_j - tr(Theta_j fhat_j)].
/// Requires every Theta slice Hermitian positive definite.
double whittle_loglik(const HermitianStack& theta, const HermitianStack& fhat);

}  // namespace tscg
