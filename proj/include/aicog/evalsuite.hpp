#ifndef AICOG_EVALSUITE_HPP
#define AICOG_EVALSUITE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aicog/compgeo.hpp"
#include "aicog/errors.hpp"
#include "aicog/graphio.hpp"
#include "aicog/linalg.hpp"
#include "aicog/model.hpp"

// Evaluation protocols: link prediction from learned log-odds, the
// multinomial node-classification probe, subcompositional robustness,
// interiority statistics, and single-balance probes.

namespace aicog {

inline const std::set<std::string>& metric_vocabulary() {
  static const std::set<std::string> vocab = {
      "auc_roc",       "auc_pr",        "micro_f1",     "macro_f1",
      "entropy_mean",  "max_comp_mean", "near_corner_frac", "eff_roles_mean",
      "probe_acc_1d",  "anova_f",       "mutual_info",  "l1",
      "cosine",        "js"};
  return vocab;
}

struct EvalReport {
  std::string task;
  std::map<std::string, double> metrics;
  std::vector<std::map<std::string, double>> per_seed;
  nlohmann::json config_echo = nlohmann::json::object();
  nlohmann::json extras = nlohmann::json::object();

  void put_metric(const std::string& name, double value) {
    if (!metric_vocabulary().count(name))
      raise(ErrorCode::BadConfig, "metric '" + name + "' not in the report vocabulary");
    metrics[name] = value;
  }
};

inline nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json doc;
  doc["task"] = report.task;
  doc["metrics"] = report.metrics;
  doc["per_seed"] = report.per_seed;
  doc["config_echo"] = report.config_echo;
  for (auto it = report.extras.begin(); it != report.extras.end(); ++it)
    doc[it.key()] = it.value();
  return doc;
}

// Mann-Whitney AUC with average ranks for ties.
inline double auc_roc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) raise(ErrorCode::DimMismatch, "scores/labels length");
  const std::size_t n = scores.size();
  std::size_t num_pos = 0;
  for (int y : labels) num_pos += y ? 1 : 0;
  if (num_pos == 0 || num_pos == n)
    raise(ErrorCode::OneClassOnly, "AUC-ROC needs both classes");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t t = i; t <= j; ++t)
      if (labels[order[t]]) rank_sum_pos += avg_rank;
    i = j + 1;
  }
  const double np = static_cast<double>(num_pos);
  const double nn = static_cast<double>(n - num_pos);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

// Area under precision-recall by step-wise interpolation over descending
// score thresholds, equal scores handled as one group.
inline double auc_pr(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) raise(ErrorCode::DimMismatch, "scores/labels length");
  const std::size_t n = scores.size();
  std::size_t num_pos = 0;
  for (int y : labels) num_pos += y ? 1 : 0;
  if (num_pos == 0) raise(ErrorCode::NoPositives, "AUC-PR needs at least one positive");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  double area = 0.0;
  double tp = 0.0, fp = 0.0, prev_recall = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    for (std::size_t t = i; t <= j; ++t) {
      if (labels[order[t]])
        tp += 1.0;
      else
        fp += 1.0;
    }
    const double recall = tp / static_cast<double>(num_pos);
    const double precision = tp / (tp + fp);
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j + 1;
  }
  return area;
}

// Scores are the learned log-odds on test positives and negatives; no
// auxiliary classifier.
inline EvalReport link_predict_eval(const ModelState& state, const LinkSplit& split) {
  const Matrix embedding = embed_all(state);
  std::vector<double> scores;
  std::vector<int> labels;
  scores.reserve(split.test_pos.size() + split.test_neg.size());
  for (const Edge& e : split.test_pos) {
    scores.push_back(log_odds_from_embedding(embedding, state.biases, e.first, e.second));
    labels.push_back(1);
  }
  for (const Edge& e : split.test_neg) {
    scores.push_back(log_odds_from_embedding(embedding, state.biases, e.first, e.second));
    labels.push_back(0);
  }
  EvalReport report;
  report.task = "link_prediction";
  report.put_metric("auc_roc", auc_roc(scores, labels));
  report.put_metric("auc_pr", auc_pr(scores, labels));
  return report;
}

// Stratified 60/20/20 node split over the labeled nodes.
struct ProbeSplit {
  std::vector<int> train, val, test;
  double train_ratio = 0.60, val_ratio = 0.20, test_ratio = 0.20;
  bool stratified = true;
  std::uint64_t seed = 0;
};

inline ProbeSplit make_probe_split(const LabelTable& labels, std::uint64_t seed) {
  ProbeSplit split;
  split.seed = seed;
  std::mt19937_64 rng(seed);
  std::vector<std::vector<int>> by_class(labels.num_classes);
  for (int node : labels.labeled_nodes()) by_class[labels.labels[node]].push_back(node);
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    const std::size_t n = members.size();
    std::size_t n_train = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(split.train_ratio * static_cast<double>(n))));
    n_train = std::min(n_train, n);
    std::size_t n_val = static_cast<std::size_t>(
        std::llround(split.val_ratio * static_cast<double>(n)));
    n_val = std::min(n_val, n - n_train);
    for (std::size_t i = 0; i < n; ++i) {
      if (i < n_train)
        split.train.push_back(members[i]);
      else if (i < n_train + n_val)
        split.val.push_back(members[i]);
      else
        split.test.push_back(members[i]);
    }
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.val.begin(), split.val.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

namespace detail {

struct SoftmaxModel {
  Matrix weights;               // d x C
  std::vector<double> biases;   // C
};

inline int predict_class(const SoftmaxModel& model, const double* x, std::size_t d) {
  const std::size_t c = model.biases.size();
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t cls = 0; cls < c; ++cls) {
    double s = model.biases[cls];
    for (std::size_t f = 0; f < d; ++f) s += x[f] * model.weights(f, cls);
    if (s > best_score) {
      best_score = s;
      best = static_cast<int>(cls);
    }
  }
  return best;
}

// Full-batch gradient descent on the L2-penalized softmax objective with a
// halve-on-increase learning rate.
inline SoftmaxModel train_softmax_regression(const Matrix& features,
                                             const std::vector<int>& label_of,
                                             const std::vector<int>& train_ids,
                                             int num_classes, double l2, int iterations,
                                             double lr0) {
  const std::size_t d = features.cols;
  const std::size_t c = static_cast<std::size_t>(num_classes);
  const std::size_t n = train_ids.size();
  SoftmaxModel model;
  model.weights = Matrix(d, c, 0.0);
  model.biases.assign(c, 0.0);

  auto loss_and_grad = [&](const SoftmaxModel& m, Matrix* gw, std::vector<double>* gb) {
    if (gw) {
      *gw = Matrix(d, c, 0.0);
      gb->assign(c, 0.0);
    }
    double loss = 0.0;
    std::vector<double> logits(c), probs(c);
    for (int id : train_ids) {
      const double* x = features.row(id);
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t cls = 0; cls < c; ++cls) {
        logits[cls] = m.biases[cls];
        for (std::size_t f = 0; f < d; ++f) logits[cls] += x[f] * m.weights(f, cls);
        mx = std::max(mx, logits[cls]);
      }
      double total = 0.0;
      for (std::size_t cls = 0; cls < c; ++cls) {
        probs[cls] = std::exp(logits[cls] - mx);
        total += probs[cls];
      }
      const int y = label_of[id];
      loss -= std::log(probs[y] / total);
      if (gw) {
        for (std::size_t cls = 0; cls < c; ++cls) {
          const double delta = probs[cls] / total - (static_cast<int>(cls) == y ? 1.0 : 0.0);
          (*gb)[cls] += delta;
          for (std::size_t f = 0; f < d; ++f) (*gw)(f, cls) += delta * x[f];
        }
      }
    }
    loss /= static_cast<double>(n);
    double penalty = 0.0;
    for (double w : m.weights.data) penalty += w * w;
    loss += 0.5 * l2 * penalty;
    if (gw) {
      for (std::size_t p = 0; p < gw->data.size(); ++p)
        gw->data[p] = gw->data[p] / static_cast<double>(n) + l2 * m.weights.data[p];
      for (double& g : *gb) g /= static_cast<double>(n);
    }
    return loss;
  };

  double lr = lr0;
  Matrix gw;
  std::vector<double> gb;
  double loss = loss_and_grad(model, &gw, &gb);
  for (int it = 0; it < iterations; ++it) {
    SoftmaxModel candidate = model;
    for (std::size_t p = 0; p < candidate.weights.data.size(); ++p)
      candidate.weights.data[p] -= lr * gw.data[p];
    for (std::size_t cls = 0; cls < c; ++cls) candidate.biases[cls] -= lr * gb[cls];
    Matrix new_gw;
    std::vector<double> new_gb;
    const double new_loss = loss_and_grad(candidate, &new_gw, &new_gb);
    if (new_loss > loss) {
      lr *= 0.5;  // reject the step, retry smaller
      if (lr < 1e-15) break;
      continue;
    }
    model = std::move(candidate);
    gw = std::move(new_gw);
    gb = std::move(new_gb);
    loss = new_loss;
  }
  return model;
}

struct F1Scores {
  double micro = 0.0;
  double macro = 0.0;
};

inline F1Scores f1_scores(const std::vector<int>& truth, const std::vector<int>& predicted,
                          int num_classes) {
  std::vector<double> tp(num_classes, 0.0), fp(num_classes, 0.0), fn(num_classes, 0.0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == predicted[i])
      tp[truth[i]] += 1.0;
    else {
      fp[predicted[i]] += 1.0;
      fn[truth[i]] += 1.0;
    }
  }
  double tp_all = 0.0, fp_all = 0.0, fn_all = 0.0;
  std::set<int> active;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    active.insert(truth[i]);
    active.insert(predicted[i]);
  }
  double macro_sum = 0.0;
  for (int cls : active) {
    tp_all += tp[cls];
    fp_all += fp[cls];
    fn_all += fn[cls];
    const double p = tp[cls] + fp[cls] > 0.0 ? tp[cls] / (tp[cls] + fp[cls]) : 0.0;
    const double r = tp[cls] + fn[cls] > 0.0 ? tp[cls] / (tp[cls] + fn[cls]) : 0.0;
    macro_sum += p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  }
  F1Scores out;
  const double mp = tp_all + fp_all > 0.0 ? tp_all / (tp_all + fp_all) : 0.0;
  const double mr = tp_all + fn_all > 0.0 ? tp_all / (tp_all + fn_all) : 0.0;
  out.micro = mp + mr > 0.0 ? 2.0 * mp * mr / (mp + mr) : 0.0;
  out.macro = active.empty() ? 0.0 : macro_sum / static_cast<double>(active.size());
  return out;
}

inline double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace detail

inline std::vector<double> default_l2_grid() { return {1e-3, 1e-2, 1e-1, 1.0, 10.0}; }

// Multinomial logistic regression over fixed features; lambda picked by
// validation micro-F1, test micro/macro-F1 reported.
inline EvalReport multinomial_probe(const Matrix& features, const LabelTable& labels,
                                    const ProbeSplit& split,
                                    const std::vector<double>& l2_grid = default_l2_grid()) {
  if (features.cols < 1) raise(ErrorCode::DimMismatch, "features need at least one column");
  std::set<int> train_classes;
  for (int id : split.train) train_classes.insert(labels.labels[id]);
  if (train_classes.size() < 2)
    raise(ErrorCode::DegenerateSplit, "probe needs at least 2 classes in train");

  auto evaluate = [&](const detail::SoftmaxModel& model, const std::vector<int>& ids) {
    std::vector<int> truth, predicted;
    truth.reserve(ids.size());
    predicted.reserve(ids.size());
    for (int id : ids) {
      truth.push_back(labels.labels[id]);
      predicted.push_back(detail::predict_class(model, features.row(id), features.cols));
    }
    return detail::f1_scores(truth, predicted, labels.num_classes);
  };

  double best_val = -1.0;
  double best_lambda = l2_grid.empty() ? 0.0 : l2_grid.front();
  detail::SoftmaxModel best_model;
  nlohmann::json grid_echo = nlohmann::json::array();
  for (double lambda : l2_grid) {
    const detail::SoftmaxModel model = detail::train_softmax_regression(
        features, labels.labels, split.train, labels.num_classes, lambda, 2000, 0.1);
    const double val_micro = split.val.empty() ? evaluate(model, split.train).micro
                                               : evaluate(model, split.val).micro;
    grid_echo.push_back({{"lambda", lambda}, {"val_micro_f1", val_micro}});
    if (val_micro > best_val) {
      best_val = val_micro;
      best_lambda = lambda;
      best_model = model;
    }
  }

  const detail::F1Scores test_scores = evaluate(best_model, split.test);
  EvalReport report;
  report.task = "node_classification";
  report.put_metric("micro_f1", test_scores.micro);
  report.put_metric("macro_f1", test_scores.macro);
  report.extras["chosen_lambda"] = best_lambda;
  report.extras["l2_grid"] = grid_echo;
  return report;
}

// Random component-removal robustness: subcompose softmax(logits), re-embed
// with the Helmert basis on |S| parts, rescale distances by the median ratio
// when calibration is on, and score with the same latent-distance decoder.
inline EvalReport subcomp_eval(const ModelState& state, const LinkSplit& split,
                               const std::vector<std::size_t>& keep_sizes,
                               int masks_per_size, bool calibrate, std::uint64_t seed) {
  const std::size_t num_parts = state.num_parts();
  for (std::size_t keep : keep_sizes)
    if (keep < 2 || keep > num_parts)
      raise(ErrorCode::BadKeepSize, "keep size must lie in [2, K]");
  if (masks_per_size < 1) raise(ErrorCode::BadConfig, "need at least one mask");

  std::vector<Edge> pairs = split.test_pos;
  pairs.insert(pairs.end(), split.test_neg.begin(), split.test_neg.end());
  std::vector<int> labels(split.test_pos.size(), 1);
  labels.resize(pairs.size(), 0);

  const Matrix full_embedding = embed_all(state);
  std::vector<double> full_dists(pairs.size());
  std::vector<double> full_scores(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    full_dists[p] = pair_distance(full_embedding, pairs[p].first, pairs[p].second);
    full_scores[p] = -full_dists[p] + state.biases[pairs[p].first] + state.biases[pairs[p].second];
  }
  const double full_roc = auc_roc(full_scores, labels);
  const double full_pr = auc_pr(full_scores, labels);
  const double full_median = detail::median(full_dists);

  // Only nodes that appear in evaluation pairs need re-embedding.
  std::vector<int> eval_nodes;
  {
    std::set<int> uniq;
    for (const Edge& e : pairs) {
      uniq.insert(e.first);
      uniq.insert(e.second);
    }
    eval_nodes.assign(uniq.begin(), uniq.end());
  }
  std::vector<int> slot_of(state.num_nodes(), -1);
  for (std::size_t s = 0; s < eval_nodes.size(); ++s) slot_of[eval_nodes[s]] = static_cast<int>(s);

  EvalReport report;
  report.task = "subcompositional_eval";
  report.extras["full"] = {{"auc_roc", full_roc}, {"auc_pr", full_pr}};
  nlohmann::json per_keep = nlohmann::json::array();

  for (std::size_t keep_size : keep_sizes) {
    const IlrBasis sub_basis = helmert_basis(keep_size);
    double roc_sum = 0.0, pr_sum = 0.0;
    for (int mask = 0; mask < masks_per_size; ++mask) {
      std::mt19937_64 rng(seed + 1000003ULL * keep_size + static_cast<std::uint64_t>(mask));
      std::vector<std::size_t> all(num_parts);
      std::iota(all.begin(), all.end(), 0);
      std::shuffle(all.begin(), all.end(), rng);
      std::vector<std::size_t> keep(all.begin(), all.begin() + keep_size);
      std::sort(keep.begin(), keep.end());

      Matrix sub_embedding(eval_nodes.size(), keep_size - 1);
      for (std::size_t s = 0; s < eval_nodes.size(); ++s) {
        const Composition z = node_composition(state, eval_nodes[s]);
        const IlrPoint y = ilr(subcompose(z, keep), sub_basis);
        for (std::size_t d = 0; d + 1 < keep_size; ++d) sub_embedding(s, d) = y[d];
      }

      std::vector<double> sub_dists(pairs.size());
      for (std::size_t p = 0; p < pairs.size(); ++p)
        sub_dists[p] =
            pair_distance(sub_embedding, slot_of[pairs[p].first], slot_of[pairs[p].second]);
      double alpha = 1.0;
      if (calibrate) {
        const double sub_median = detail::median(sub_dists);
        if (sub_median > 0.0) alpha = full_median / sub_median;
      }
      std::vector<double> scores(pairs.size());
      for (std::size_t p = 0; p < pairs.size(); ++p)
        scores[p] = -alpha * sub_dists[p] + state.biases[pairs[p].first] +
                    state.biases[pairs[p].second];

      std::map<std::string, double> mask_metrics;
      mask_metrics["auc_roc"] = auc_roc(scores, labels);
      mask_metrics["auc_pr"] = auc_pr(scores, labels);
      roc_sum += mask_metrics["auc_roc"];
      pr_sum += mask_metrics["auc_pr"];
      report.per_seed.push_back(std::move(mask_metrics));
    }
    const double roc_mean = roc_sum / masks_per_size;
    const double pr_mean = pr_sum / masks_per_size;
    per_keep.push_back({{"keep", keep_size},
                        {"mean_auc_roc", roc_mean},
                        {"mean_auc_pr", pr_mean},
                        {"retention_auc_roc", roc_mean / full_roc},
                        {"retention_auc_pr", pr_mean / full_pr}});
  }
  report.extras["per_keep"] = per_keep;

  // Headline metrics: the first keep size.
  report.put_metric("auc_roc", per_keep[0]["mean_auc_roc"].get<double>());
  report.put_metric("auc_pr", per_keep[0]["mean_auc_pr"].get<double>());
  return report;
}

// Entropy, max component, near-corner fraction, effective number of roles.
inline EvalReport interiority_stats(const ModelState& state, double threshold = 0.9) {
  const int n = state.num_nodes();
  double entropy_sum = 0.0, max_sum = 0.0, eff_sum = 0.0;
  int near_corner = 0;
  for (int i = 0; i < n; ++i) {
    const Composition z = node_composition(state, i);
    double entropy = 0.0, max_comp = 0.0;
    for (double v : z.values) {
      entropy -= v * std::log(v);
      max_comp = std::max(max_comp, v);
    }
    entropy_sum += entropy;
    max_sum += max_comp;
    eff_sum += std::exp(entropy);
    if (max_comp > threshold) ++near_corner;
  }
  EvalReport report;
  report.task = "interiority";
  report.put_metric("entropy_mean", entropy_sum / n);
  report.put_metric("max_comp_mean", max_sum / n);
  report.put_metric("near_corner_frac", static_cast<double>(near_corner) / n);
  report.put_metric("eff_roles_mean", eff_sum / n);
  report.config_echo["threshold"] = threshold;
  return report;
}

namespace detail {

inline double anova_f(const std::vector<double>& values, const std::vector<int>& groups,
                      int num_groups) {
  const std::size_t n = values.size();
  std::vector<double> sum(num_groups, 0.0);
  std::vector<std::size_t> count(num_groups, 0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum[groups[i]] += values[i];
    count[groups[i]] += 1;
    total += values[i];
  }
  const double grand_mean = total / static_cast<double>(n);
  double between = 0.0, within = 0.0;
  int active_groups = 0;
  for (int g = 0; g < num_groups; ++g)
    if (count[g] > 0) ++active_groups;
  for (std::size_t i = 0; i < n; ++i) {
    const double group_mean = sum[groups[i]] / static_cast<double>(count[groups[i]]);
    within += (values[i] - group_mean) * (values[i] - group_mean);
  }
  for (int g = 0; g < num_groups; ++g) {
    if (count[g] == 0) continue;
    const double group_mean = sum[g] / static_cast<double>(count[g]);
    between += static_cast<double>(count[g]) * (group_mean - grand_mean) * (group_mean - grand_mean);
  }
  if (active_groups < 2 || n <= static_cast<std::size_t>(active_groups)) return 0.0;
  const double ms_between = between / (active_groups - 1);
  const double ms_within = within / (static_cast<double>(n) - active_groups);
  if (ms_within <= 0.0) return ms_between > 0.0 ? 1e12 : 0.0;
  return std::min(ms_between / ms_within, 1e12);
}

// Equal-frequency bin index via interpolated quantile edges; ties share a bin.
inline std::vector<int> quantile_bins(const std::vector<double>& values, int bins) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  std::vector<double> edges;
  for (int k = 1; k < bins; ++k) {
    const double pos = static_cast<double>(k) / bins * static_cast<double>(m - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    const double edge =
        lo + 1 < m ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]) : sorted[lo];
    edges.push_back(edge);
  }
  std::vector<int> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    int b = 0;
    for (double e : edges)
      if (values[i] > e) ++b;
    out[i] = b;
  }
  return out;
}

inline double plugin_mutual_information(const std::vector<int>& bins, int num_bins,
                                        const std::vector<int>& labels, int num_labels) {
  const double n = static_cast<double>(bins.size());
  Matrix joint(num_bins, num_labels, 0.0);
  std::vector<double> pb(num_bins, 0.0), pl(num_labels, 0.0);
  for (std::size_t i = 0; i < bins.size(); ++i) {
    joint(bins[i], labels[i]) += 1.0;
    pb[bins[i]] += 1.0;
    pl[labels[i]] += 1.0;
  }
  double mi = 0.0;
  for (int b = 0; b < num_bins; ++b) {
    for (int l = 0; l < num_labels; ++l) {
      const double pxy = joint(b, l) / n;
      if (pxy <= 0.0) continue;
      mi += pxy * std::log(pxy / ((pb[b] / n) * (pl[l] / n)));
    }
  }
  return mi;
}

}  // namespace detail

// Picks the ILR coordinate with the largest ANOVA F w.r.t. the labels, then
// reports a 1D multinomial probe accuracy, the F statistic, and the plug-in
// mutual information of the quantile-binned coordinate.
inline EvalReport balance_probe(const ModelState& state, const LabelTable& labels,
                                int bins = 16) {
  const std::vector<int> nodes = labels.labeled_nodes();
  if (nodes.empty()) raise(ErrorCode::NoLabels, "balance probe needs labeled nodes");
  if (labels.num_classes < 2)
    raise(ErrorCode::NoLabels, "balance probe needs at least 2 classes");

  const Matrix embedding = embed_all(state);
  const std::size_t dim = state.dim();

  std::vector<int> node_labels(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) node_labels[i] = labels.labels[nodes[i]];

  double best_f = -1.0;
  std::size_t best_coord = 0;
  for (std::size_t d = 0; d < dim; ++d) {
    std::vector<double> coord(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) coord[i] = embedding(nodes[i], d);
    const double f = detail::anova_f(coord, node_labels, labels.num_classes);
    if (f > best_f) {
      best_f = f;
      best_coord = d;
    }
  }

  std::vector<double> coord(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) coord[i] = embedding(nodes[i], best_coord);

  // 1D multiclass probe over the selected coordinate.
  Matrix feature(state.num_nodes(), 1, 0.0);
  for (int i = 0; i < state.num_nodes(); ++i) feature(i, 0) = embedding(i, best_coord);
  const ProbeSplit split = make_probe_split(labels, 0);
  const EvalReport probe = multinomial_probe(feature, labels, split);

  const std::vector<int> coord_bins = detail::quantile_bins(coord, bins);
  const double mi =
      detail::plugin_mutual_information(coord_bins, bins, node_labels, labels.num_classes);

  EvalReport report;
  report.task = "balance_probe";
  report.put_metric("probe_acc_1d", probe.metrics.at("micro_f1"));
  report.put_metric("anova_f", best_f);
  report.put_metric("mutual_info", mi);
  report.extras["coordinate"] = best_coord;
  report.config_echo["bins"] = bins;
  return report;
}

}  // namespace aicog

#endif  // AICOG_EVALSUITE_HPP
