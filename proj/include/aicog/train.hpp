#ifndef AICOG_TRAIN_HPP
#define AICOG_TRAIN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <random>
#include <vector>

#include "aicog/errors.hpp"
#include "aicog/model.hpp"

namespace aicog {

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::int64_t step_count = 0;
  double lr = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// One bias-corrected Adam update over a flat parameter block.
inline void adam_step(std::vector<double>& params, const std::vector<double>& grads,
                      AdamState& opt) {
  if (params.size() != grads.size())
    raise(ErrorCode::ShapeMismatch, "params/grads size disagree");
  if (opt.first_moment.empty()) {
    opt.first_moment.assign(params.size(), 0.0);
    opt.second_moment.assign(params.size(), 0.0);
  }
  if (opt.first_moment.size() != params.size())
    raise(ErrorCode::ShapeMismatch, "optimizer state size disagrees with params");
  opt.step_count += 1;
  const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step_count));
  const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step_count));
  for (std::size_t p = 0; p < params.size(); ++p) {
    const double g = grads[p];
    opt.first_moment[p] = opt.beta1 * opt.first_moment[p] + (1.0 - opt.beta1) * g;
    opt.second_moment[p] = opt.beta2 * opt.second_moment[p] + (1.0 - opt.beta2) * g * g;
    const double m_hat = opt.first_moment[p] / bc1;
    const double v_hat = opt.second_moment[p] / bc2;
    params[p] -= opt.lr * m_hat / (std::sqrt(v_hat) + opt.eps);
  }
}

struct TrainConfig {
  std::int64_t iterations = 5000;
  double lr = 1e-2;
  double neg_ratio = 5.0;  // negatives per iteration = neg_ratio * |E|
  std::uint64_t seed = 0;
  std::size_t num_parts = 9;  // K; embedding dimension is K-1
  BasisMode basis_mode = BasisMode::FixedHelmert;
  std::int64_t log_every = 0;  // 0 disables progress lines

  void validate() const {
    if (iterations <= 0) raise(ErrorCode::BadConfig, "iterations must be > 0");
    if (!(lr > 0.0)) raise(ErrorCode::BadConfig, "lr must be > 0");
    if (!(neg_ratio > 0.0)) raise(ErrorCode::BadConfig, "neg_ratio must be > 0");
    if (num_parts < 2) raise(ErrorCode::KTooSmall, "K must be >= 2");
  }
};

namespace detail {

inline std::vector<double> flatten_params(const ModelState& state) {
  std::vector<double> flat;
  flat.reserve(state.logits.data.size() + state.biases.size() +
               (state.basis_params ? state.basis_params->data.size() : 0));
  flat.insert(flat.end(), state.logits.data.begin(), state.logits.data.end());
  flat.insert(flat.end(), state.biases.begin(), state.biases.end());
  if (state.basis_params)
    flat.insert(flat.end(), state.basis_params->data.begin(), state.basis_params->data.end());
  return flat;
}

inline std::vector<double> flatten_grads(const GradRecord& rec) {
  std::vector<double> flat;
  flat.reserve(rec.d_logits.data.size() + rec.d_biases.size() +
               (rec.d_basis_params ? rec.d_basis_params->data.size() : 0));
  flat.insert(flat.end(), rec.d_logits.data.begin(), rec.d_logits.data.end());
  flat.insert(flat.end(), rec.d_biases.begin(), rec.d_biases.end());
  if (rec.d_basis_params)
    flat.insert(flat.end(), rec.d_basis_params->data.begin(), rec.d_basis_params->data.end());
  return flat;
}

inline void unflatten_params(const std::vector<double>& flat, ModelState& state) {
  std::size_t off = 0;
  std::copy(flat.begin(), flat.begin() + state.logits.data.size(), state.logits.data.begin());
  off += state.logits.data.size();
  std::copy(flat.begin() + off, flat.begin() + off + state.biases.size(), state.biases.begin());
  off += state.biases.size();
  if (state.basis_params)
    std::copy(flat.begin() + off, flat.end(), state.basis_params->data.begin());
}

}  // namespace detail

// Deterministic training loop: sample a fresh pair batch, take one Adam step,
// repeat. Logits, biases, and basis params share a single optimizer state.
inline ModelState fit(const Graph& graph, const TrainConfig& config) {
  config.validate();
  if (graph.num_nodes < 2 || graph.edges.empty())
    raise(ErrorCode::EmptyGraph, "training needs a graph with at least one edge");

  std::mt19937_64 rng(config.seed);
  ModelState state =
      init_model_state(graph.num_nodes, config.num_parts, config.basis_mode, rng);
  const auto edge_set = build_edge_set(graph);
  const std::size_t num_neg = static_cast<std::size_t>(
      std::llround(config.neg_ratio * static_cast<double>(graph.edges.size())));

  AdamState opt;
  opt.lr = config.lr;
  for (std::int64_t it = 1; it <= config.iterations; ++it) {
    const PairBatch batch = sample_pair_batch(graph, edge_set, num_neg, rng);
    const GradRecord rec = grad(state, batch);
    std::vector<double> flat = detail::flatten_params(state);
    const std::vector<double> flat_grads = detail::flatten_grads(rec);
    adam_step(flat, flat_grads, opt);
    detail::unflatten_params(flat, state);
    if (config.log_every > 0 && it % config.log_every == 0)
      std::cerr << "iter=" << it << " nll_est=" << rec.nll << "\n";
  }
  return state;
}

}  // namespace aicog

#endif  // AICOG_TRAIN_HPP
