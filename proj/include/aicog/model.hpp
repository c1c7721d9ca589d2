#ifndef AICOG_MODEL_HPP
#define AICOG_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aicog/compgeo.hpp"
#include "aicog/errors.hpp"
#include "aicog/graphio.hpp"
#include "aicog/linalg.hpp"

// Bernoulli latent-distance model: eta_ij = -||x_i - x_j|| + gamma_i +
// gamma_j, with x_i the ILR embedding of softmax(logits_i). The log-partition
// mass over non-edges is estimated by uniform negative sampling.

namespace aicog {

enum class BasisMode { FixedHelmert, LearnedQR };

inline const char* basis_mode_name(BasisMode m) {
  return m == BasisMode::FixedHelmert ? "helmert" : "learned_qr";
}

inline BasisMode basis_mode_from_name(const std::string& s) {
  if (s == "helmert") return BasisMode::FixedHelmert;
  if (s == "learned_qr") return BasisMode::LearnedQR;
  raise(ErrorCode::ParseError, "unknown basis mode '" + s + "'");
}

struct ModelState {
  Matrix logits;                       // N x K
  std::vector<double> biases;          // N
  BasisMode basis_mode = BasisMode::FixedHelmert;
  std::optional<Matrix> basis_params;  // K x (K-1), present iff LearnedQR

  int num_nodes() const { return static_cast<int>(logits.rows); }
  std::size_t num_parts() const { return logits.cols; }
  std::size_t dim() const { return logits.cols - 1; }
};

// Smoothing inside the pair distance; removes the kink at x_i = x_j and is
// far below any reported precision.
constexpr double kDistanceEps = 1e-12;

inline double stable_softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline IlrBasis current_basis(const ModelState& state) {
  if (state.basis_mode == BasisMode::FixedHelmert) return helmert_basis(state.num_parts());
  if (!state.basis_params) raise(ErrorCode::BadConfig, "LearnedQR state without basis params");
  return learned_basis_from_params(*state.basis_params);
}

// Row i = V^T logits_i. Equals ilr(softmax(logits_i)) because V^T 1 = 0
// swallows the log-sum-exp shift, so the softmax never has to be formed.
inline Matrix embed_all(const ModelState& state, const IlrBasis& basis) {
  if (basis.num_parts() != state.num_parts())
    raise(ErrorCode::DimMismatch, "basis does not match state");
  return matmul(state.logits, basis.columns);
}

inline Matrix embed_all(const ModelState& state) { return embed_all(state, current_basis(state)); }

inline Composition node_composition(const ModelState& state, int node) {
  std::vector<double> row(state.logits.row(node), state.logits.row(node) + state.num_parts());
  return softmax(row);
}

inline double pair_distance(const Matrix& embedding, int i, int j) {
  double s = 0.0;
  const double* xi = embedding.row(i);
  const double* xj = embedding.row(j);
  for (std::size_t d = 0; d < embedding.cols; ++d) {
    const double diff = xi[d] - xj[d];
    s += diff * diff;
  }
  return std::sqrt(s + kDistanceEps * kDistanceEps);
}

inline double log_odds_from_embedding(const Matrix& embedding,
                                      const std::vector<double>& biases, int i, int j) {
  return -pair_distance(embedding, i, j) + biases[i] + biases[j];
}

inline double log_odds(const ModelState& state, int i, int j) {
  if (i == j) raise(ErrorCode::SelfPair, "log-odds of a node with itself");
  const IlrBasis basis = current_basis(state);
  double s = 0.0;
  for (std::size_t d = 0; d < basis.dim(); ++d) {
    double xi = 0.0, xj = 0.0;
    for (std::size_t k = 0; k < basis.num_parts(); ++k) {
      xi += basis.columns(k, d) * state.logits(i, k);
      xj += basis.columns(k, d) * state.logits(j, k);
    }
    const double diff = xi - xj;
    s += diff * diff;
  }
  return -std::sqrt(s + kDistanceEps * kDistanceEps) + state.biases[i] + state.biases[j];
}

// Full negative log-likelihood over all unordered pairs. Test oracle and
// desk-scale diagnostic; O(N^2).
inline double nll_exact(const ModelState& state, const Graph& graph) {
  const Matrix embedding = embed_all(state);
  const auto edge_set = build_edge_set(graph);
  const int n = graph.num_nodes;
  double nll = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double eta = log_odds_from_embedding(embedding, state.biases, i, j);
      const double y = edge_set.count(edge_key(i, j, n)) ? 1.0 : 0.0;
      nll -= y * eta - stable_softplus(eta);
    }
  }
  return nll;
}

// Positive edges plus uniformly sampled non-edges. neg_weight is the inverse
// inclusion ratio (#non-edges / #samples) that makes the sampled objective an
// unbiased estimate of the exact one.
struct PairBatch {
  std::vector<Edge> pos_pairs;
  std::vector<Edge> neg_pairs;
  double neg_weight = 1.0;
};

inline std::uint64_t num_non_edges(const Graph& graph) {
  const std::uint64_t total = static_cast<std::uint64_t>(graph.num_nodes) *
                              static_cast<std::uint64_t>(graph.num_nodes - 1) / 2;
  return total - graph.edges.size();
}

// Negatives are drawn with replacement; on sparse graphs collisions are rare
// and the estimator stays unbiased either way.
inline PairBatch sample_pair_batch(const Graph& graph,
                                   const std::unordered_set<std::uint64_t>& edge_set,
                                   std::size_t num_negatives, std::mt19937_64& rng) {
  PairBatch batch;
  batch.pos_pairs = graph.edges;
  const std::uint64_t non_edges = num_non_edges(graph);
  if (non_edges == 0 || num_negatives == 0) {
    batch.neg_weight = 0.0;
    return batch;
  }
  batch.neg_pairs.reserve(num_negatives);
  std::uniform_int_distribution<int> pick(0, graph.num_nodes - 1);
  while (batch.neg_pairs.size() < num_negatives) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (edge_set.count(edge_key(i, j, graph.num_nodes))) continue;
    batch.neg_pairs.emplace_back(i, j);
  }
  batch.neg_weight = static_cast<double>(non_edges) / static_cast<double>(num_negatives);
  return batch;
}

// -[ sum_pos eta - sum_pos softplus(eta) - neg_weight * sum_neg softplus(eta) ].
// The edge terms are exact; only the non-edge softplus mass is estimated.
inline double nll_sampled(const ModelState& state, const PairBatch& batch) {
  const Matrix embedding = embed_all(state);
  double value = 0.0;
  for (const Edge& e : batch.pos_pairs) {
    const double eta = log_odds_from_embedding(embedding, state.biases, e.first, e.second);
    value -= eta - stable_softplus(eta);
  }
  for (const Edge& e : batch.neg_pairs) {
    const double eta = log_odds_from_embedding(embedding, state.biases, e.first, e.second);
    value += batch.neg_weight * stable_softplus(eta);
  }
  return value;
}

struct GradRecord {
  Matrix d_logits;                       // N x K
  std::vector<double> d_biases;          // N
  std::optional<Matrix> d_basis_params;  // K x (K-1) iff LearnedQR
  double nll = 0.0;                      // sampled objective at the evaluation point
};

// Reverse-mode gradient through the centered-QR basis construction. Given
// dL/dQ, with A = QR the centered params:
//   S    = strict_lower(M - M^T),  M = Q^T dQbar
//   dA   = (Q S + (I - Q Q^T) dQbar) R^{-T}
//   dW   = dA - (1/K) 1 1^T dA    (centering is symmetric)
inline Matrix qr_backward_to_params(const QrResult& qr, const Matrix& d_q) {
  const std::size_t n = qr.r.rows;
  Matrix m = matmul_tn(qr.q, d_q);  // n x n
  Matrix s(n, n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) s(i, j) = m(i, j) - m(j, i);
  // B = Q (S - M) + dQbar
  Matrix sm = s;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sm(i, j) -= m(i, j);
  Matrix b = matmul(qr.q, sm);
  for (std::size_t i = 0; i < b.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j) b(i, j) += d_q(i, j);
  Matrix d_a = solve_rt_right(b, qr.r);
  // Center: gradient of W -> W - (1/K) 1 1^T W is the same centering.
  const std::size_t rows = d_a.rows;
  for (std::size_t j = 0; j < d_a.cols; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < rows; ++i) mean += d_a(i, j);
    mean /= static_cast<double>(rows);
    for (std::size_t i = 0; i < rows; ++i) d_a(i, j) -= mean;
  }
  return d_a;
}

// Analytic gradient of nll_sampled. Accumulates dL/dx per node over all
// pairs, then maps back through x_i = V^T logits_i (and through the QR
// construction onto W when the basis is learned).
inline GradRecord grad(const ModelState& state, const PairBatch& batch) {
  const int n = state.num_nodes();
  const std::size_t dim = state.dim();

  std::optional<QrResult> qr;
  IlrBasis basis;
  if (state.basis_mode == BasisMode::LearnedQR) {
    if (!state.basis_params) raise(ErrorCode::BadConfig, "LearnedQR state without basis params");
    qr = centered_qr_of_params(*state.basis_params);
    basis.kind = BasisKind::Learned;
    basis.columns = qr->q;
  } else {
    basis = helmert_basis(state.num_parts());
  }
  const Matrix embedding = embed_all(state, basis);

  GradRecord rec;
  rec.d_biases.assign(n, 0.0);
  Matrix d_embed(n, dim, 0.0);

  auto accumulate = [&](const Edge& e, bool positive) {
    const int i = e.first, j = e.second;
    const double* xi = embedding.row(i);
    const double* xj = embedding.row(j);
    double sq = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = xi[d] - xj[d];
      sq += diff * diff;
    }
    const double dist = std::sqrt(sq + kDistanceEps * kDistanceEps);
    const double eta = -dist + state.biases[i] + state.biases[j];
    const double sig = sigmoid(eta);
    double g_eta;
    if (positive) {
      rec.nll -= eta - stable_softplus(eta);
      g_eta = sig - 1.0;
    } else {
      rec.nll += batch.neg_weight * stable_softplus(eta);
      g_eta = batch.neg_weight * sig;
    }
    rec.d_biases[i] += g_eta;
    rec.d_biases[j] += g_eta;
    const double scale = -g_eta / dist;
    double* gi = d_embed.row(i);
    double* gj = d_embed.row(j);
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = xi[d] - xj[d];
      gi[d] += scale * diff;
      gj[d] -= scale * diff;
    }
  };
  for (const Edge& e : batch.pos_pairs) accumulate(e, true);
  for (const Edge& e : batch.neg_pairs) accumulate(e, false);

  rec.d_logits = matmul_nt(d_embed, basis.columns);  // dX V^T
  if (qr) {
    const Matrix d_basis = matmul_tn(state.logits, d_embed);  // Z^T dX, K x (K-1)
    rec.d_basis_params = qr_backward_to_params(*qr, d_basis);
  }
  return rec;
}

// Seeded initialization: logits ~ 0.1 * N(0,1), biases 0, W ~ N(0,1).
inline ModelState init_model_state(int num_nodes, std::size_t num_parts, BasisMode mode,
                                   std::mt19937_64& rng) {
  if (num_parts < 2) raise(ErrorCode::KTooSmall, "need K >= 2");
  ModelState state;
  state.basis_mode = mode;
  state.logits = Matrix(num_nodes, num_parts);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& v : state.logits.data) v = 1.0 * gauss(rng);
  state.biases.assign(num_nodes, 0.0);
  if (mode == BasisMode::LearnedQR) {
    Matrix w(num_parts, num_parts - 1);
    for (double& v : w.data) v = gauss(rng);
    state.basis_params = std::move(w);
  }
  return state;
}

// --- checkpoint I/O -------------------------------------------------------
// Single JSON document; doubles serialize as shortest round-trip decimals,
// so save/load/save is byte-stable.

inline nlohmann::json checkpoint_to_json(const ModelState& state, std::uint64_t seed,
                                         std::int64_t iterations) {
  nlohmann::json doc;
  doc["version"] = 1;
  doc["N"] = state.num_nodes();
  doc["K"] = state.num_parts();
  doc["basis_mode"] = basis_mode_name(state.basis_mode);
  doc["logits"] = state.logits.data;
  doc["biases"] = state.biases;
  if (state.basis_params) doc["basis_params"] = state.basis_params->data;
  doc["seed"] = seed;
  doc["iterations"] = iterations;
  return doc;
}

struct Checkpoint {
  ModelState state;
  std::uint64_t seed = 0;
  std::int64_t iterations = 0;
};

inline Checkpoint checkpoint_from_json(const nlohmann::json& doc) {
  if (!doc.contains("version") || doc["version"].get<int>() != 1)
    raise(ErrorCode::ParseError, "unsupported checkpoint version");
  Checkpoint ck;
  const int n = doc.at("N").get<int>();
  const std::size_t k = doc.at("K").get<std::size_t>();
  ck.state.basis_mode = basis_mode_from_name(doc.at("basis_mode").get<std::string>());
  ck.state.logits = Matrix(n, k);
  const auto logits = doc.at("logits").get<std::vector<double>>();
  if (logits.size() != static_cast<std::size_t>(n) * k)
    raise(ErrorCode::ParseError, "checkpoint logits size mismatch");
  ck.state.logits.data = logits;
  ck.state.biases = doc.at("biases").get<std::vector<double>>();
  if (ck.state.biases.size() != static_cast<std::size_t>(n))
    raise(ErrorCode::ParseError, "checkpoint biases size mismatch");
  if (ck.state.basis_mode == BasisMode::LearnedQR) {
    Matrix w(k, k - 1);
    const auto params = doc.at("basis_params").get<std::vector<double>>();
    if (params.size() != k * (k - 1))
      raise(ErrorCode::ParseError, "checkpoint basis params size mismatch");
    w.data = params;
    ck.state.basis_params = std::move(w);
  }
  ck.seed = doc.at("seed").get<std::uint64_t>();
  ck.iterations = doc.at("iterations").get<std::int64_t>();
  return ck;
}

inline void save_checkpoint(const ModelState& state, std::uint64_t seed,
                            std::int64_t iterations, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::IoError, "cannot write checkpoint: " + path);
  out << checkpoint_to_json(state, seed, iterations).dump(2) << "\n";
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot read checkpoint: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ParseError, std::string("checkpoint JSON: ") + e.what());
  }
  return checkpoint_from_json(doc);
}

}  // namespace aicog

#endif  // AICOG_MODEL_HPP
