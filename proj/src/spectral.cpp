#include "tscg/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <string>

namespace tscg {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TimeSeriesPanel TimeSeriesPanel::from_matrix(Mat m) {
  TimeSeriesPanel panel;
  if (m.rows() < 2) throw invalid_input("panel needs at least 2 time points");
  if (m.cols() < 1) throw invalid_input("panel needs at least 1 series");
  if (!m.allFinite()) throw invalid_input("panel contains non-finite entries");
  if (m.rows() % 2 != 0) {
    panel.truncated_odd = true;
    panel.data = m.bottomRows(m.rows() - 1);
  } else {
    panel.data = std::move(m);
  }
  return panel;
}

void center_columns(TimeSeriesPanel& panel) {
  panel.data.rowwise() -= panel.data.colwise().mean();
}

void standardize_columns(TimeSeriesPanel& panel) {
  const Index T = panel.T();
  for (Index k = 0; k < panel.p(); ++k) {
    const double mean = panel.data.col(k).mean();
    const double var = (panel.data.col(k).array() - mean).square().sum() /
                       static_cast<double>(T - 1);
    if (var <= 0.0)
      throw invalid_input("series " + std::to_string(k + 1) +
                          " is constant; cannot standardize");
    panel.data.col(k) = (panel.data.col(k).array() - mean) / std::sqrt(var) + mean;
  }
}

FrequencyGrid make_grid(Index T, int m) {
  if (T < 4 || T % 2 != 0) throw config_error("grid needs an even T >= 4");
  if (m < 0) throw config_error("half-block size m must be >= 0");
  const Index half = T / 2 - 1;
  const Index width = 2 * static_cast<Index>(m) + 1;
  const Index M = half / width;
  if (M < 1)
    throw config_error("no frequency blocks: m = " + std::to_string(m) +
                       " is too large for T = " + std::to_string(T) +
                       " (need 2m+1 <= T/2-1)");
  FrequencyGrid grid;
  grid.m = m;
  grid.M = static_cast<int>(M);
  grid.T = T;
  grid.central_freqs.resize(M);
  for (Index j = 1; j <= M; ++j) {
    const Index idx = j * width - m;
    grid.central_indices.push_back(static_cast<int>(idx));
    grid.central_freqs[j - 1] = kTwoPi * static_cast<double>(idx) / static_cast<double>(T);
  }
  return grid;
}

DftFrame dft(const TimeSeriesPanel& panel) {
  if (!panel.data.allFinite()) throw invalid_input("panel contains non-finite entries");
  const Index T = panel.T();
  const Index p = panel.p();
  DftFrame frame;
  frame.coeffs.resize(T, p);

  Eigen::FFT<double> fft;
  std::vector<double> in(static_cast<size_t>(T));
  std::vector<Complex> out;
  const double scale = 1.0 / std::sqrt(static_cast<double>(T));
  for (Index k = 0; k < p; ++k) {
    for (Index t = 0; t < T; ++t) in[static_cast<size_t>(t)] = panel.data(t, k);
    fft.fwd(out, in);
    // out[j] = sum_{t=0}^{T-1} x_{t+1} e^{-i 2pi j t / T}; the paper's sum
    // runs over t = 1..T, which contributes an extra phase e^{-i w_j}.
    for (Index j = 1; j < T; ++j) {
      const double w = kTwoPi * static_cast<double>(j) / static_cast<double>(T);
      frame.coeffs(j - 1, k) = scale * std::polar(1.0, -w) * out[static_cast<size_t>(j)];
    }
    frame.coeffs(T - 1, k) = scale * out[0];  // w_T = 2pi
  }
  return frame;
}

Mat inverse_dft(const DftFrame& frame) {
  const Index T = frame.T();
  const Index p = frame.p();
  Mat panel(T, p);
  Eigen::FFT<double> fft;
  std::vector<Complex> spec(static_cast<size_t>(T));
  std::vector<Complex> time;
  const double scale = std::sqrt(static_cast<double>(T));
  for (Index k = 0; k < p; ++k) {
    // Undo the phase twist so a standard inverse FFT applies.
    spec[0] = frame.coeffs(T - 1, k);
    for (Index j = 1; j < T; ++j) {
      const double w = kTwoPi * static_cast<double>(j) / static_cast<double>(T);
      spec[static_cast<size_t>(j)] = std::polar(1.0, w) * frame.coeffs(j - 1, k);
    }
    fft.inv(time, spec);
    for (Index t = 0; t < T; ++t)
      panel(t, k) = scale * time[static_cast<size_t>(t)].real();
  }
  return panel;
}

HermitianStack averaged_periodogram(const DftFrame& frame, const FrequencyGrid& grid) {
  if (grid.T != frame.T())
    throw invalid_input("frequency grid was built for a different T");
  const Index p = frame.p();
  HermitianStack stack(p, grid.M);
  const double scale = 1.0 / (kTwoPi * static_cast<double>(2 * grid.m + 1));
  for (int j = 0; j < grid.M; ++j) {
    CMat acc = CMat::Zero(p, p);
    const int center = grid.central_indices[static_cast<size_t>(j)];
    for (int n = -grid.m; n <= grid.m; ++n) {
      const auto d = frame.coeffs.row(center + n - 1);
      acc.noalias() += d.transpose() * d.conjugate();  // d(w) d(w)^H
    }
    stack.set_symmetrized(j, scale * acc);
  }
  return stack;
}

double whittle_loglik(const HermitianStack& theta, const HermitianStack& fhat) {
  if (theta.size() != fhat.size() || theta.p() != fhat.p())
    throw invalid_input("whittle_loglik: shape mismatch");
  double total = 0.0;
  for (Index j = 0; j < theta.size(); ++j) {
    double ld;
    try {
      ld = logdet_hermitian(theta[j]);
    } catch (const numerical_error&) {
      throw numerical_error("whittle_loglik: slice " + std::to_string(j + 1) +
                            " is not positive definite");
    }
    total += ld - (theta[j] * fhat[j]).trace().real();
  }
  return total;
}

}  // namespace tscg
