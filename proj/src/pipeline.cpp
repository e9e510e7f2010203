#include "tscg/pipeline.hpp"

#include "tscg/util.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace tscg {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Largest half-block size still giving at least min_blocks blocks.
int max_half_block(Index T, int min_blocks) {
  const Index half = T / 2 - 1;
  const Index width = half / min_blocks;  // need 2m+1 <= width
  return static_cast<int>((width - 1) / 2);
}

[[noreturn]] void rethrow_with_stage(const std::string& stage, const std::exception& e) {
  const std::string msg = stage + ": " + e.what();
  if (dynamic_cast<const config_error*>(&e)) throw config_error(msg);
  if (dynamic_cast<const invalid_input*>(&e)) throw invalid_input(msg);
  if (dynamic_cast<const std::invalid_argument*>(&e)) throw invalid_input(msg);
  throw numerical_error(msg);
}

}  // namespace

void EstimationConfig::validate() const {
  if (m_const <= 0.0) throw config_error("m_const must be > 0");
  if (m_min_blocks < 1) throw config_error("m_min_blocks must be >= 1");
  if (lambda1_const <= 0.0 || gamma <= 0.0)
    throw config_error("lambda constants must be > 0");
  if (eta <= 0.0 || eta >= 1.0 / 3.0) throw config_error("eta must lie in (0, 1/3)");
  if (kappa_const <= 0.0 || nu_const <= 0.0)
    throw config_error("threshold constants must be > 0");
  if (zeta <= 0.0 || zeta >= 0.5) throw config_error("zeta must lie in (0, 1/2)");
  if (ridge < 0.0) throw config_error("ridge must be >= 0");
  stage3.validate();
}

ResolvedTuning resolve_tuning(Index T, Index p, const EstimationConfig& cfg) {
  cfg.validate();
  if (p < 1) throw config_error("p must be >= 1");
  if (T < 20 || T % 2 != 0) throw config_error("tuning needs an even T >= 20");

  const int m_cap = max_half_block(T, cfg.m_min_blocks);
  if (m_cap < 0)
    throw config_error("T = " + std::to_string(T) + " cannot produce " +
                       std::to_string(cfg.m_min_blocks) + " frequency blocks");
  const double logT = std::log(static_cast<double>(T));
  const double rate_m =
      cfg.m_const * std::cbrt(logT) * std::pow(static_cast<double>(T), 2.0 / 3.0);
  ResolvedTuning tuning;
  tuning.m = std::min(static_cast<int>(std::lround(rate_m)), m_cap);
  tuning.m = std::max(tuning.m, 0);
  tuning.M = static_cast<int>((T / 2 - 1) / (2 * tuning.m + 1));
  tuning.lambda1 =
      cfg.lambda1_const * std::pow(static_cast<double>(T), -1.0 / 3.0 + cfg.eta);
  tuning.lambda2 = cfg.gamma * tuning.lambda1;
  tuning.kappa = cfg.kappa_const * std::pow(static_cast<double>(T), -0.5);
  tuning.nu = cfg.nu_const * std::pow(static_cast<double>(T), -0.5 + cfg.zeta);
  return tuning;
}

RunReport fit(const TimeSeriesPanel& panel, const EstimationConfig& cfg) {
  cfg.validate();
  RunReport report;
  report.config = cfg;
  const auto t_start = std::chrono::steady_clock::now();

  TimeSeriesPanel work = panel;
  if (work.truncated_odd)
    report.warnings.push_back("odd panel length: dropped the first observation");

  HermitianStack fhat;
  FrequencyGrid grid;
  try {
    report.tuning = resolve_tuning(work.T(), work.p(), cfg);
    if (cfg.center) center_columns(work);
    if (cfg.standardize) standardize_columns(work);
    grid = make_grid(work.T(), report.tuning.m);
    fhat = averaged_periodogram(dft(work), grid);
  } catch (const std::exception& e) {
    rethrow_with_stage("stage 1 (spectral)", e);
  }
  report.timings.spectral_sec = seconds_since(t_start);

  const auto t_admm = std::chrono::steady_clock::now();
  AdmmResult admm;
  try {
    AdmmConfig acfg = cfg.admm;
    acfg.lambda1 = report.tuning.lambda1;
    acfg.lambda2 = report.tuning.lambda2;
    acfg.threads = cfg.threads;
    admm = admm_solve(fhat, acfg);
  } catch (const std::exception& e) {
    rethrow_with_stage("stage 1 (ADMM)", e);
  }
  report.admm = {admm.iterations, admm.primal_residual, admm.dual_residual,
                 admm.converged, admm.ranks};
  report.timings.admm_sec = seconds_since(t_admm);

  const auto t_order = std::chrono::steady_clock::now();
  try {
    const auto components = components_from_undirected(work.p(), admm.support);
    report.ordering = order_components(fhat, admm.omega, components, cfg.ridge);
  } catch (const std::exception& e) {
    rethrow_with_stage("stage 2 (ordering)", e);
  }
  report.timings.ordering_sec = seconds_since(t_order);

  const auto t_reg = std::chrono::steady_clock::now();
  Stage3Result stage3;
  try {
    Stage3Config scfg = cfg.stage3;
    scfg.kappa = report.tuning.kappa;
    scfg.nu = report.tuning.nu;
    stage3 = estimate_directed(work, report.ordering, scfg);
  } catch (const std::exception& e) {
    rethrow_with_stage("stage 3 (regression)", e);
  }
  report.timings.regression_sec = seconds_since(t_reg);

  report.estimated.p = work.p();
  report.estimated.undirected = admm.support;
  report.estimated.directed = stage3.edges;
  report.estimated.components = report.ordering.components;
  report.estimated.ordering = report.ordering.ordering;
  report.coeffs = stage3.coeffs;
  report.timings.total_sec = seconds_since(t_start);
  return report;
}

}  // namespace tscg
