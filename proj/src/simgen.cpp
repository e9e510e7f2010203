#include "tscg/simgen.hpp"

#include "tscg/rng.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace tscg {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double spectral_radius(const Mat& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::EigenSolver<Mat> es(m, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// iota . C_check / rho(C_check) with entries of C_check on +-[0.5, 1].
Mat draw_component_var(Rng& rng, Index n) {
  Mat c_check(n, n);
  double radius = 0.0;
  do {
    for (Index r = 0; r < n; ++r)
      for (Index q = 0; q < n; ++q) c_check(r, q) = rng.uniform_two_sided(0.5, 1.0);
    radius = spectral_radius(c_check);
  } while (radius < 1e-12);
  const double iota = rng.uniform(0.5, 1.0);
  return (iota / radius) * c_check;
}

ComponentNoise make_noise(const std::vector<Index>& nodes, Mat C) {
  ComponentNoise noise;
  noise.nodes = nodes;
  const Index n = static_cast<Index>(nodes.size());
  noise.innovation_factor = Mat::Identity(n, n) - C;
  noise.sigma_eps = noise.innovation_factor * noise.innovation_factor.transpose();
  noise.C = std::move(C);
  return noise;
}

std::set<std::pair<Index, Index>> complete_within(
    const std::vector<std::vector<Index>>& components) {
  std::set<std::pair<Index, Index>> edges;
  for (const auto& comp : components)
    for (size_t a = 0; a < comp.size(); ++a)
      for (size_t b = a + 1; b < comp.size(); ++b) edges.insert({comp[a], comp[b]});
  return edges;
}

struct EdgeDraw {
  Index from, to;
  bool in_A, in_B;
};

// Directed edge mask: default both matrices; the ablation draws independent
// coin flips per matrix, rejecting the (0, 0) outcome so the edge survives.
EdgeDraw draw_edge(Rng& rng, Index from, Index to, bool independent_masks) {
  EdgeDraw e{from, to, true, true};
  if (independent_masks) {
    do {
      e.in_A = rng.bernoulli(0.5);
      e.in_B = rng.bernoulli(0.5);
    } while (!e.in_A && !e.in_B);
  }
  return e;
}

}  // namespace

void DesignSpec::validate() const {
  if (p < 2) throw config_error("design needs p >= 2");
  if (T < 2) throw config_error("design needs T >= 2");
  for (double prob : {within_edge_prob, directed_edge_prob, hub_prob, layer1_frac})
    if (prob < 0.0 || prob > 1.0) throw config_error("design probabilities must lie in [0,1]");
  if (burn_in < 0) throw config_error("burn_in must be >= 0");
}

GroundTruth generate_graph(const DesignSpec& spec) {
  spec.validate();
  GroundTruth truth;
  truth.burn_in = spec.burn_in;
  Rng rng(spec.seed);

  std::set<std::pair<Index, Index>> sampled_undirected;
  std::vector<EdgeDraw> edges;
  Index p = spec.p;

  if (spec.design == Design::Fixture) {
    p = 7;
    sampled_undirected = {{0, 2}, {2, 4}, {1, 3}};
    truth.graph.p = p;
    truth.graph.undirected = sampled_undirected;
    truth.graph.components = components_from_undirected(p, sampled_undirected);
    truth.coeffs.A = Mat::Zero(p, p);
    truth.coeffs.B = Mat::Zero(p, p);
    truth.coeffs.A(5, 2) = 0.8;    // 3 -> 6, contemporaneous
    truth.coeffs.B(1, 4) = -0.8;   // 5 -> 2, lagged
    truth.coeffs.A(6, 3) = 0.8;    // 4 -> 7, both
    truth.coeffs.B(6, 3) = -0.8;
    truth.graph.directed = {{2, 5, true, false}, {3, 6, true, true}, {4, 1, false, true}};
    std::sort(truth.graph.directed.begin(), truth.graph.directed.end());

    Mat c1(3, 3);
    c1 << 0.6, 0.2, 0.0, 0.0, 0.6, 0.0, 0.0, 0.0, 0.6;
    Mat s1(3, 3);
    s1 << 1.0, 0.0, 0.0, 0.0, 1.0, 0.5, 0.0, 0.5, 1.0;
    ComponentNoise n1;
    n1.nodes = {0, 2, 4};
    n1.C = c1;
    n1.sigma_eps = s1;
    n1.innovation_factor = Eigen::LLT<Mat>(s1).matrixL();
    truth.noise.push_back(std::move(n1));

    Mat s2(2, 2);
    s2 << 1.0, 0.5, 0.5, 1.0;
    ComponentNoise n2;
    n2.nodes = {1, 3};
    n2.C = Mat::Zero(2, 2);
    n2.sigma_eps = s2;
    n2.innovation_factor = Eigen::LLT<Mat>(s2).matrixL();
    truth.noise.push_back(std::move(n2));

    for (Index v : {Index(5), Index(6)}) {
      ComponentNoise n;
      n.nodes = {v};
      n.C = Mat::Zero(1, 1);
      n.sigma_eps = Mat::Identity(1, 1);
      n.innovation_factor = Mat::Identity(1, 1);
      truth.noise.push_back(std::move(n));
    }
  } else if (spec.design == Design::TwoLayer) {
    const Index layer1 = std::clamp<Index>(
        static_cast<Index>(std::ceil(spec.layer1_frac * static_cast<double>(p) - 1e-9)), 1,
        p - 1);
    for (Index k = 0; k < layer1; ++k)
      for (Index l = k + 1; l < layer1; ++l)
        if (rng.bernoulli(spec.within_edge_prob)) sampled_undirected.insert({k, l});
    for (Index k = layer1; k < p; ++k)
      for (Index l = k + 1; l < p; ++l)
        if (rng.bernoulli(spec.within_edge_prob)) sampled_undirected.insert({k, l});
    for (Index l = 0; l < layer1; ++l)
      for (Index k = layer1; k < p; ++k)
        if (rng.bernoulli(spec.directed_edge_prob))
          edges.push_back(draw_edge(rng, l, k, spec.independent_ab_masks));
  } else {  // RandomOrder
    for (Index k = 0; k < p; ++k)
      for (Index l = k + 1; l < p; ++l)
        if (rng.bernoulli(spec.within_edge_prob)) sampled_undirected.insert({k, l});
    const auto components = components_from_undirected(p, sampled_undirected);
    std::vector<int> comp_of(static_cast<size_t>(p));
    for (size_t g = 0; g < components.size(); ++g)
      for (Index v : components[g]) comp_of[static_cast<size_t>(v)] = static_cast<int>(g);
    std::vector<bool> hub(static_cast<size_t>(p), false);
    for (Index v = 0; v < p; ++v) hub[static_cast<size_t>(v)] = rng.bernoulli(spec.hub_prob);
    for (Index l = 0; l < p; ++l) {
      if (!hub[static_cast<size_t>(l)]) continue;
      for (Index k = 0; k < p; ++k)
        if (comp_of[static_cast<size_t>(k)] > comp_of[static_cast<size_t>(l)] &&
            rng.bernoulli(spec.directed_edge_prob))
          edges.push_back(draw_edge(rng, l, k, spec.independent_ab_masks));
    }
  }

  if (spec.design != Design::Fixture) {
    truth.graph.p = p;
    truth.graph.components = components_from_undirected(p, sampled_undirected);
    // The dense component VAR couples every within-component pair, so the
    // truth's conditional-independence edges are the component cliques.
    truth.graph.undirected = complete_within(truth.graph.components);
    truth.coeffs.A = Mat::Zero(p, p);
    truth.coeffs.B = Mat::Zero(p, p);
    for (const auto& e : edges) {
      if (e.in_A) truth.coeffs.A(e.to, e.from) = rng.uniform_two_sided(0.5, 1.5);
      if (e.in_B) truth.coeffs.B(e.to, e.from) = rng.uniform_two_sided(0.5, 1.5);
      truth.graph.directed.push_back({e.from, e.to, e.in_A, e.in_B});
    }
    std::sort(truth.graph.directed.begin(), truth.graph.directed.end());
    for (const auto& comp : truth.graph.components)
      truth.noise.push_back(make_noise(comp, draw_component_var(rng, static_cast<Index>(comp.size()))));
  }

  std::vector<int> ordering(truth.graph.components.size());
  std::iota(ordering.begin(), ordering.end(), 0);
  truth.graph.ordering = ordering;

  const Mat drive =
      (Mat::Identity(p, p) - truth.coeffs.A).partialPivLu().solve(truth.coeffs.B);
  truth.spectral_radius_x = spectral_radius(drive);
  if (truth.spectral_radius_x >= 0.95) {
    truth.coeffs.B *= 0.95 / truth.spectral_radius_x;
    truth.rescale_applied = true;
    truth.spectral_radius_x = spectral_radius(
        (Mat::Identity(p, p) - truth.coeffs.A).partialPivLu().solve(truth.coeffs.B));
  }
  return truth;
}

namespace {

// Rows for time indices -burn_in+1 .. T; per-component substreams.
Mat noise_rows_with_burnin(const GroundTruth& truth, Index T, std::uint64_t seed) {
  const Index p = truth.graph.p;
  const Index total = truth.burn_in + T;
  Mat rows(total, p);
  for (size_t g = 0; g < truth.noise.size(); ++g) {
    const ComponentNoise& noise = truth.noise[g];
    const Index n = static_cast<Index>(noise.nodes.size());
    Rng rng = Rng::split(seed, static_cast<std::uint64_t>(g));
    Vec state = Vec::Zero(n);
    Vec z(n);
    for (Index t = 0; t < total; ++t) {
      for (Index i = 0; i < n; ++i) z[i] = rng.gaussian();
      state = noise.C * state + noise.innovation_factor * z;
      for (Index i = 0; i < n; ++i) rows(t, noise.nodes[static_cast<size_t>(i)]) = state[i];
    }
  }
  return rows;
}

}  // namespace

Mat simulate_noise(const GroundTruth& truth, Index T, std::uint64_t seed) {
  if (T < 1) throw invalid_input("simulate_noise: T must be >= 1");
  return noise_rows_with_burnin(truth, T, seed).bottomRows(T);
}

TimeSeriesPanel simulate_panel(const GroundTruth& truth, Index T, std::uint64_t seed) {
  if (T < 2) throw invalid_input("simulate_panel: T must be >= 2");
  if (truth.spectral_radius_x >= 1.0)
    throw numerical_error("simulate_panel: rho((I-A)^{-1}B) = " +
                          std::to_string(truth.spectral_radius_x) +
                          " >= 1; the process is not stationary");
  const Index p = truth.graph.p;
  const Mat noise = noise_rows_with_burnin(truth, T, seed);
  const auto solver = (Mat::Identity(p, p) - truth.coeffs.A).partialPivLu();
  Mat x(noise.rows(), p);
  Vec prev = Vec::Zero(p);
  for (Index t = 0; t < noise.rows(); ++t) {
    const Vec current =
        solver.solve(truth.coeffs.B * prev + noise.row(t).transpose());
    x.row(t) = current.transpose();
    prev = current;
  }
  return TimeSeriesPanel::from_matrix(x.bottomRows(T));
}

CMat var1_spectral_density(const Mat& C, const Mat& sigma_eps, double omega) {
  const Index n = C.rows();
  const CMat h = (CMat::Identity(n, n) - std::polar(1.0, -omega) * C.cast<Complex>())
                     .partialPivLu()
                     .solve(CMat::Identity(n, n));
  return (1.0 / kTwoPi) * h * sigma_eps.cast<Complex>() * h.adjoint();
}

CMat var1_inverse_spectral_density(const Mat& C, const Mat& sigma_eps, double omega) {
  const Index n = C.rows();
  const CMat forward = CMat::Identity(n, n) - std::polar(1.0, -omega) * C.cast<Complex>();
  const CMat sigma_inv = sigma_eps.inverse().cast<Complex>();
  return kTwoPi * forward.adjoint() * sigma_inv * forward;
}

}  // namespace tscg
