#ifndef AICOG_SYNTH_HPP
#define AICOG_SYNTH_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "aicog/compgeo.hpp"
#include "aicog/errors.hpp"
#include "aicog/evalsuite.hpp"
#include "aicog/graphio.hpp"
#include "aicog/model.hpp"
#include "aicog/train.hpp"

// Synthetic benchmarks with known memberships: Dirichlet regimes crossed with
// a bilinear (block-model style) and an ILR-distance edge generator, plus
// permutation-aligned recovery scoring.

namespace aicog {

enum class MembershipRegime { Continuous, NearDiscrete };
enum class EdgeGenerator { Bilinear, IlrDistance };

inline const char* regime_name(MembershipRegime r) {
  return r == MembershipRegime::Continuous ? "continuous" : "near_discrete";
}

inline const char* generator_name(EdgeGenerator g) {
  return g == EdgeGenerator::Bilinear ? "bilinear" : "ilr_distance";
}

struct SynthConfig {
  int num_nodes = 800;
  std::size_t num_true_parts = 8;  // K_true
  MembershipRegime regime = MembershipRegime::Continuous;
  EdgeGenerator generator = EdgeGenerator::IlrDistance;
  double target_mean_degree = 20.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (num_true_parts < 2 || static_cast<std::size_t>(num_nodes) <= num_true_parts)
      raise(ErrorCode::BadConfig, "need N > K_true >= 2");
    if (!(target_mean_degree > 0.0) || target_mean_degree >= num_nodes - 1)
      raise(ErrorCode::BadConfig, "target mean degree must lie in (0, N-1)");
  }
};

// Dirichlet(alpha * 1) per node: alpha = 5 in the interior regime, 0.1 in the
// near-discrete one.
inline std::vector<Composition> sample_memberships(const SynthConfig& config) {
  config.validate();
  const double alpha = config.regime == MembershipRegime::Continuous ? 5.0 : 0.1;
  std::mt19937_64 rng(config.seed * 0x9E3779B97F4A7C15ULL + 1);
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<Composition> out;
  out.reserve(config.num_nodes);
  for (int i = 0; i < config.num_nodes; ++i) {
    std::vector<double> draws(config.num_true_parts);
    while (true) {
      bool ok = true;
      for (double& v : draws) {
        v = gamma(rng);
        if (!(v > 0.0)) ok = false;
      }
      if (ok) break;  // exact zeros are ~1e-30 events; redraw the node
    }
    out.push_back(closure(draws));
  }
  return out;
}

namespace detail {

// Bisection for a monotone-increasing density knob; converges when the
// expected mean degree is within 1% of the target.
template <typename MeanDegreeFn>
double bisect_density(MeanDegreeFn&& mean_degree, double lo, double hi, double target,
                      int max_steps = 200) {
  double f_lo = mean_degree(lo);
  double f_hi = mean_degree(hi);
  if (std::abs(f_lo - target) <= 0.01 * target) return lo;
  if (std::abs(f_hi - target) <= 0.01 * target) return hi;
  if (f_lo > target || f_hi < target)
    raise(ErrorCode::TargetUnreachable, "target mean degree outside the reachable range");
  double mid = 0.5 * (lo + hi);
  for (int step = 0; step < max_steps; ++step) {
    mid = 0.5 * (lo + hi);
    const double f_mid = mean_degree(mid);
    if (std::abs(f_mid - target) <= 0.01 * target) return mid;
    if (f_mid < target)
      lo = mid;
    else
      hi = mid;
  }
  raise(ErrorCode::TargetUnreachable, "bisection did not reach the target density");
}

}  // namespace detail

// Bilinear: P(ij) = z_i^T B z_j with B = p_out 1 1^T + (p_in - p_out) I,
// which collapses to p_out + (p_in - p_out) <z_i, z_j> on the simplex.
// IlrDistance: P(ij) = sigmoid(alpha - ||ILR(z_i) - ILR(z_j)||), Helmert basis.
// The density knob (p_out or alpha) is bisected to the target mean degree.
inline Graph generate_graph(const std::vector<Composition>& memberships,
                            const SynthConfig& config) {
  config.validate();
  const int n = config.num_nodes;
  if (static_cast<int>(memberships.size()) != n)
    raise(ErrorCode::DimMismatch, "memberships size != N");
  for (const Composition& z : memberships)
    if (z.size() != config.num_true_parts)
      raise(ErrorCode::DimMismatch, "membership size != K_true");

  const std::size_t num_pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
  std::vector<double> pair_stat(num_pairs);  // <z_i,z_j> or ILR distance

  if (config.generator == EdgeGenerator::Bilinear) {
    std::size_t p = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++p) {
        double dot = 0.0;
        for (std::size_t k = 0; k < config.num_true_parts; ++k)
          dot += memberships[i][k] * memberships[j][k];
        pair_stat[p] = dot;
      }
  } else {
    const IlrBasis basis = helmert_basis(config.num_true_parts);
    Matrix coords(n, config.num_true_parts - 1);
    for (int i = 0; i < n; ++i) {
      const IlrPoint x = ilr(memberships[i], basis);
      for (std::size_t d = 0; d < x.size(); ++d) coords(i, d) = x[d];
    }
    std::size_t p = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++p) pair_stat[p] = pair_distance(coords, i, j);
  }

  const double p_in = 0.9;
  auto edge_prob = [&](double knob, std::size_t p) {
    if (config.generator == EdgeGenerator::Bilinear)
      return knob + (p_in - knob) * pair_stat[p];
    return sigmoid(knob - pair_stat[p]);
  };
  auto expected_mean_degree = [&](double knob) {
    double total = 0.0;
    for (std::size_t p = 0; p < num_pairs; ++p) total += edge_prob(knob, p);
    return 2.0 * total / static_cast<double>(n);
  };

  const double knob =
      config.generator == EdgeGenerator::Bilinear
          ? detail::bisect_density(expected_mean_degree, 0.0, p_in, config.target_mean_degree)
          : detail::bisect_density(expected_mean_degree, -100.0, 100.0,
                                   config.target_mean_degree);

  std::mt19937_64 rng(config.seed * 0x9E3779B97F4A7C15ULL + 2);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Graph g;
  g.num_nodes = n;
  std::size_t p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++p)
      if (unif(rng) < edge_prob(knob, p)) g.edges.emplace_back(i, j);
  return g;
}

struct RecoveryScore {
  double l1 = 0.0;
  double cosine = 0.0;
  double js = 0.0;
  std::vector<std::size_t> permutation;  // learned column -> truth column
};

// Aligns learned components to the truth with a Hungarian assignment on the
// mean per-node absolute column differences, then scores node-averaged L1,
// cosine similarity, and Jensen-Shannon divergence (natural log).
inline RecoveryScore score_recovery(const std::vector<Composition>& learned,
                                    const std::vector<Composition>& truth) {
  if (learned.size() != truth.size() || learned.empty())
    raise(ErrorCode::DimMismatch, "learned/truth node counts disagree");
  const std::size_t n = learned.size();
  const std::size_t k = truth[0].size();
  for (std::size_t i = 0; i < n; ++i)
    if (learned[i].size() != k || truth[i].size() != k)
      raise(ErrorCode::DimMismatch, "learned/truth component counts disagree");

  Matrix cost(k, k, 0.0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) total += std::abs(learned[i][a] - truth[i][b]);
      cost(a, b) = total / static_cast<double>(n);
    }
  RecoveryScore score;
  score.permutation = hungarian_assignment(cost);

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> aligned(k);
    for (std::size_t a = 0; a < k; ++a) aligned[score.permutation[a]] = learned[i][a];
    double l1 = 0.0, dot = 0.0, na = 0.0, nb = 0.0, js = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double l = aligned[c];
      const double t = truth[i][c];
      l1 += std::abs(l - t);
      dot += l * t;
      na += l * l;
      nb += t * t;
      const double m = 0.5 * (l + t);
      js += 0.5 * l * std::log(l / m) + 0.5 * t * std::log(t / m);
    }
    score.l1 += l1;
    score.cosine += dot / (std::sqrt(na) * std::sqrt(nb));
    score.js += js;
  }
  score.l1 /= static_cast<double>(n);
  score.cosine /= static_cast<double>(n);
  score.js /= static_cast<double>(n);
  return score;
}

// Full pipeline: sample memberships, generate the graph, fit with K = K_true,
// score the softmax compositions against the truth.
inline EvalReport run_recovery_experiment(const SynthConfig& config, TrainConfig train_config) {
  config.validate();
  const std::vector<Composition> truth = sample_memberships(config);
  const Graph graph = generate_graph(truth, config);

  train_config.num_parts = config.num_true_parts;
  const ModelState state = fit(graph, train_config);

  std::vector<Composition> learned;
  learned.reserve(truth.size());
  for (int i = 0; i < config.num_nodes; ++i) learned.push_back(node_composition(state, i));

  const RecoveryScore score = score_recovery(learned, truth);

  EvalReport report;
  report.task = "synthetic_recovery";
  report.put_metric("l1", score.l1);
  report.put_metric("cosine", score.cosine);
  report.put_metric("js", score.js);

  ModelState truth_state;  // interiority of the ground truth, for reference
  truth_state.basis_mode = BasisMode::FixedHelmert;
  truth_state.logits = Matrix(config.num_nodes, config.num_true_parts);
  for (int i = 0; i < config.num_nodes; ++i)
    for (std::size_t kk = 0; kk < config.num_true_parts; ++kk)
      truth_state.logits(i, kk) = std::log(truth[i][kk]);
  truth_state.biases.assign(config.num_nodes, 0.0);
  report.extras["interiority_truth"] = interiority_stats(truth_state).metrics;
  report.extras["interiority_learned"] = interiority_stats(state).metrics;
  report.extras["realized_mean_degree"] =
      2.0 * static_cast<double>(graph.edges.size()) / config.num_nodes;

  report.config_echo["N"] = config.num_nodes;
  report.config_echo["K_true"] = config.num_true_parts;
  report.config_echo["regime"] = regime_name(config.regime);
  report.config_echo["generator"] = generator_name(config.generator);
  report.config_echo["target_mean_degree"] = config.target_mean_degree;
  report.config_echo["seed"] = config.seed;
  report.config_echo["iterations"] = train_config.iterations;
  return report;
}

}  // namespace aicog

#endif  // AICOG_SYNTH_HPP
