// Command-line front end: training, link prediction, node classification,
// subcompositional evaluation, synthetic recovery, balance probes, and
// trajectory exports. All reports are JSON, all tabular exports CSV, and
// every command is deterministic given its full flag set.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aicog/compgeo.hpp"
#include "aicog/evalsuite.hpp"
#include "aicog/graphio.hpp"
#include "aicog/interpret.hpp"
#include "aicog/model.hpp"
#include "aicog/synth.hpp"
#include "aicog/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace aicog;

namespace {

struct CommonOpts {
  std::string edges_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool largest_component_only = false;
};

struct TrainOpts {
  std::int64_t iterations = 5000;
  double lr = 1e-2;
  double neg_ratio = 5.0;
  std::int64_t log_every = 0;
  std::string basis = "helmert";
};

void add_common_options(CLI::App* cmd, CommonOpts& opts, bool needs_edges = true) {
  auto* edges = cmd->add_option("--edges", opts.edges_path, "Edge list file (u v per line)");
  if (needs_edges) edges->required();
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--seed", opts.seed, "Base random seed");
  cmd->add_flag("--largest-component", opts.largest_component_only,
                "Restrict the input graph to its largest connected component");
}

void add_train_options(CLI::App* cmd, TrainOpts& opts) {
  cmd->add_option("--iters", opts.iterations, "Training iterations")->check(CLI::PositiveNumber);
  cmd->add_option("--lr", opts.lr, "Adam learning rate")->check(CLI::PositiveNumber);
  cmd->add_option("--neg-ratio", opts.neg_ratio, "Negative samples per edge per iteration")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--log-every", opts.log_every, "Progress line period (0 = silent)");
  cmd->add_option("--basis", opts.basis, "ILR basis: helmert or learned")
      ->check(CLI::IsMember({"helmert", "learned"}));
}

TrainConfig make_train_config(const TrainOpts& opts, std::size_t num_parts,
                              std::uint64_t seed) {
  TrainConfig config;
  config.iterations = opts.iterations;
  config.lr = opts.lr;
  config.neg_ratio = opts.neg_ratio;
  config.log_every = opts.log_every;
  config.num_parts = num_parts;
  config.seed = seed;
  config.basis_mode =
      opts.basis == "learned" ? BasisMode::LearnedQR : BasisMode::FixedHelmert;
  return config;
}

json train_config_echo(const TrainOpts& opts) {
  return {{"iters", opts.iterations},
          {"lr", opts.lr},
          {"neg_ratio", opts.neg_ratio},
          {"log_every", opts.log_every},
          {"basis", opts.basis}};
}

Graph load_graph(const CommonOpts& opts) {
  Graph g = load_edge_list(opts.edges_path);
  if (opts.largest_component_only) {
    const int before = g.num_nodes;
    g = largest_component(g);
    if (g.num_nodes < before)
      std::cerr << "largest component: " << g.num_nodes << " of " << before << " nodes, "
                << g.edges.size() << " edges\n";
  }
  return g;
}

void write_report(const json& doc, const std::string& out_dir,
                  const std::string& name = "report.json") {
  fs::create_directories(out_dir);
  const fs::path path = fs::path(out_dir) / name;
  std::ofstream out(path);
  if (!out) raise(ErrorCode::IoError, "cannot write " + path.string());
  out << doc.dump(2) << "\n";
  std::cout << path.string() << "\n";
}

std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> out;
  if (steps <= 1) {
    out.push_back(lo);
    return out;
  }
  for (int i = 0; i < steps; ++i)
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / (steps - 1));
  return out;
}

void write_features_csv(const Matrix& embedding, const std::vector<std::string>& names,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::IoError, "cannot write " + path);
  out << "id";
  for (std::size_t d = 0; d < embedding.cols; ++d) out << ",x_" << d;
  out << "\n";
  for (std::size_t i = 0; i < embedding.rows; ++i) {
    if (names.empty())
      out << i;
    else
      out << names[i];
    for (std::size_t d = 0; d < embedding.cols; ++d)
      out << "," << format_double(embedding(i, d));
    out << "\n";
  }
}

// Dyadic operator features (average, Hadamard, weighted-L1, weighted-L2) for
// externally supplied node pairs, mirroring the usual embedding-method
// pipeline for link prediction classifiers.
void write_pair_features_csv(const Matrix& embedding, const Graph& graph,
                             const std::string& pairs_path, const std::string& out_path) {
  std::unordered_map<std::string, int> id_of;
  for (std::size_t i = 0; i < graph.node_names.size(); ++i)
    id_of.emplace(graph.node_names[i], static_cast<int>(i));

  std::ifstream in(pairs_path);
  if (!in) raise(ErrorCode::IoError, "cannot open pairs file: " + pairs_path);
  std::ofstream out(out_path);
  if (!out) raise(ErrorCode::IoError, "cannot write " + out_path);

  const std::size_t d = embedding.cols;
  out << "u,v";
  for (const char* op : {"avg", "had", "wl1", "wl2"})
    for (std::size_t f = 0; f < d; ++f) out << "," << op << "_" << f;
  out << "\n";

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t start = line.find_first_not_of(" \t\r\n");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!(ss >> a >> b))
      raise(ErrorCode::ParseError, "pairs line " + std::to_string(line_no));
    auto resolve = [&](const std::string& name) {
      const auto it = id_of.find(name);
      if (it == id_of.end()) raise(ErrorCode::UnknownNode, "pair node '" + name + "'");
      return it->second;
    };
    const int u = resolve(a), v = resolve(b);
    out << a << "," << b;
    const double* xu = embedding.row(u);
    const double* xv = embedding.row(v);
    for (std::size_t f = 0; f < d; ++f) out << "," << format_double(0.5 * (xu[f] + xv[f]));
    for (std::size_t f = 0; f < d; ++f) out << "," << format_double(xu[f] * xv[f]);
    for (std::size_t f = 0; f < d; ++f)
      out << "," << format_double(std::abs(xu[f] - xv[f]));
    for (std::size_t f = 0; f < d; ++f)
      out << "," << format_double((xu[f] - xv[f]) * (xu[f] - xv[f]));
    out << "\n";
  }
}

// Swap in a varimax-rotated view of the current basis. A rotated basis is a
// valid parameter matrix for the learned-QR construction (QR of an
// orthonormal matrix returns it unchanged), so the state stays well-formed.
void apply_varimax_view(ModelState& state) {
  const IlrBasis rotated = varimax_rotate(current_basis(state));
  state.basis_mode = BasisMode::LearnedQR;
  state.basis_params = rotated.columns;
}

int cmd_train(const CommonOpts& common, const TrainOpts& topts, std::size_t num_parts) {
  const Graph graph = load_graph(common);
  const TrainConfig config = make_train_config(topts, num_parts, common.seed);
  const ModelState state = fit(graph, config);

  fs::create_directories(common.out_dir);
  const fs::path ck_path = fs::path(common.out_dir) / "checkpoint.json";
  save_checkpoint(state, common.seed, config.iterations, ck_path.string());
  std::cout << ck_path.string() << "\n";

  json report;
  report["task"] = "train";
  report["config_echo"] = train_config_echo(topts);
  report["config_echo"]["K"] = num_parts;
  report["config_echo"]["seed"] = common.seed;
  report["config_echo"]["edges"] = common.edges_path;
  report["config_echo"]["largest_component"] = common.largest_component_only;
  report["num_nodes"] = graph.num_nodes;
  report["num_edges"] = graph.edges.size();
  write_report(report, common.out_dir);
  return 0;
}

int cmd_linkpred(const CommonOpts& common, const TrainOpts& topts,
                 const std::vector<int>& dims, int num_seeds, double fraction) {
  const Graph graph = load_graph(common);

  json report;
  report["task"] = "link_prediction";
  report["config_echo"] = train_config_echo(topts);
  report["config_echo"]["dims"] = dims;
  report["config_echo"]["seeds"] = num_seeds;
  report["config_echo"]["fraction"] = fraction;
  report["config_echo"]["seed"] = common.seed;
  report["config_echo"]["edges"] = common.edges_path;
  report["config_echo"]["largest_component"] = common.largest_component_only;

  json per_seed = json::array();
  json per_dim = json::array();
  double headline_roc = 0.0, headline_pr = 0.0;
  for (std::size_t di = 0; di < dims.size(); ++di) {
    const int dim = dims[di];
    if (dim < 1) raise(ErrorCode::BadConfig, "dimension must be >= 1");
    double roc_sum = 0.0, pr_sum = 0.0;
    for (int s = 0; s < num_seeds; ++s) {
      const std::uint64_t run_seed = common.seed + static_cast<std::uint64_t>(s);
      const LinkSplit split = connected_link_split(graph, fraction, run_seed);
      const TrainConfig config =
          make_train_config(topts, static_cast<std::size_t>(dim) + 1, run_seed);
      const ModelState state = fit(split.residual, config);
      const EvalReport eval = link_predict_eval(state, split);
      roc_sum += eval.metrics.at("auc_roc");
      pr_sum += eval.metrics.at("auc_pr");
      per_seed.push_back({{"D", dim},
                          {"seed", run_seed},
                          {"auc_roc", eval.metrics.at("auc_roc")},
                          {"auc_pr", eval.metrics.at("auc_pr")}});
      std::cerr << "D=" << dim << " seed=" << run_seed
                << " auc_roc=" << eval.metrics.at("auc_roc")
                << " auc_pr=" << eval.metrics.at("auc_pr") << "\n";
    }
    const double roc_mean = roc_sum / num_seeds;
    const double pr_mean = pr_sum / num_seeds;
    per_dim.push_back(
        {{"D", dim}, {"mean_auc_roc", roc_mean}, {"mean_auc_pr", pr_mean}});
    if (di == 0) {
      headline_roc = roc_mean;
      headline_pr = pr_mean;
    }
  }
  report["per_seed"] = per_seed;
  report["per_dim"] = per_dim;
  report["metrics"] = {{"auc_roc", headline_roc}, {"auc_pr", headline_pr}};
  write_report(report, common.out_dir);
  return 0;
}

int cmd_nodeclass(const CommonOpts& common, const TrainOpts& topts,
                  const std::string& labels_path, int dim,
                  const std::string& export_features,
                  const std::string& pairs_path, const std::string& export_pairs) {
  const Graph graph = load_graph(common);
  const LabelTable labels = load_labels(labels_path, graph);
  if (labels.num_classes < 2) raise(ErrorCode::DegenerateSplit, "need at least 2 classes");

  const TrainConfig config =
      make_train_config(topts, static_cast<std::size_t>(dim) + 1, common.seed);
  const ModelState state = fit(graph, config);
  const Matrix features = embed_all(state);

  if (!export_features.empty()) {
    fs::create_directories(common.out_dir);
    const fs::path path = fs::path(common.out_dir) / export_features;
    write_features_csv(features, graph.node_names, path.string());
    std::cout << path.string() << "\n";
  }
  if (!export_pairs.empty()) {
    if (pairs_path.empty())
      raise(ErrorCode::BadConfig, "--export-pair-features needs --pairs");
    fs::create_directories(common.out_dir);
    const fs::path path = fs::path(common.out_dir) / export_pairs;
    write_pair_features_csv(features, graph, pairs_path, path.string());
    std::cout << path.string() << "\n";
  }

  const ProbeSplit split = make_probe_split(labels, common.seed);
  EvalReport eval = multinomial_probe(features, labels, split);
  eval.config_echo = train_config_echo(topts);
  eval.config_echo["D"] = dim;
  eval.config_echo["seed"] = common.seed;
  eval.config_echo["edges"] = common.edges_path;
  eval.config_echo["labels"] = labels_path;
  write_report(report_to_json(eval), common.out_dir);
  return 0;
}

int cmd_subcomp(const CommonOpts& common, const TrainOpts& topts,
                const std::string& checkpoint_path, std::uint64_t split_seed,
                double fraction, std::size_t num_parts,
                const std::vector<std::size_t>& keeps, int masks, bool calibrate) {
  const Graph graph = load_graph(common);
  const LinkSplit split = connected_link_split(graph, fraction, split_seed);

  ModelState state;
  if (!checkpoint_path.empty()) {
    state = load_checkpoint(checkpoint_path).state;
    if (state.num_nodes() != graph.num_nodes)
      raise(ErrorCode::DimMismatch, "checkpoint node count does not match the graph");
  } else {
    const TrainConfig config = make_train_config(topts, num_parts, split_seed);
    state = fit(split.residual, config);
  }

  EvalReport eval = subcomp_eval(state, split, keeps, masks, calibrate, common.seed);
  eval.config_echo = train_config_echo(topts);
  eval.config_echo["K"] = state.num_parts();
  eval.config_echo["keeps"] = keeps;
  eval.config_echo["masks"] = masks;
  eval.config_echo["calibrate"] = calibrate;
  eval.config_echo["fraction"] = fraction;
  eval.config_echo["split_seed"] = split_seed;
  eval.config_echo["seed"] = common.seed;
  eval.config_echo["edges"] = common.edges_path;
  eval.config_echo["checkpoint"] = checkpoint_path;
  write_report(report_to_json(eval), common.out_dir);
  return 0;
}

int cmd_synth(const CommonOpts& common, const TrainOpts& topts, const std::string& generator,
              const std::string& regime, int n, std::size_t k, double degree,
              const std::string& export_truth) {
  SynthConfig config;
  config.num_nodes = n;
  config.num_true_parts = k;
  config.generator = generator == "bilinear" ? EdgeGenerator::Bilinear
                                             : EdgeGenerator::IlrDistance;
  config.regime = regime == "near_discrete" ? MembershipRegime::NearDiscrete
                                            : MembershipRegime::Continuous;
  config.target_mean_degree = degree;
  config.seed = common.seed;
  config.validate();

  if (!export_truth.empty()) {
    const auto truth = sample_memberships(config);
    fs::create_directories(common.out_dir);
    const fs::path path = fs::path(common.out_dir) / export_truth;
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write " + path.string());
    out << "node";
    for (std::size_t c = 0; c < k; ++c) out << ",comp_" << c;
    out << "\n";
    for (std::size_t i = 0; i < truth.size(); ++i) {
      out << i;
      for (std::size_t c = 0; c < k; ++c) out << "," << format_double(truth[i][c]);
      out << "\n";
    }
    std::cout << path.string() << "\n";
  }

  const TrainConfig train_config = make_train_config(topts, k, common.seed);
  EvalReport eval = run_recovery_experiment(config, train_config);
  eval.config_echo["train"] = train_config_echo(topts);
  write_report(report_to_json(eval), common.out_dir);
  return 0;
}

int cmd_probe(const CommonOpts& common, const TrainOpts& topts,
              const std::string& labels_path, const std::string& checkpoint_path,
              std::size_t num_parts, bool varimax, int bins) {
  const Graph graph = load_graph(common);
  const LabelTable labels = load_labels(labels_path, graph);

  ModelState state;
  if (!checkpoint_path.empty()) {
    state = load_checkpoint(checkpoint_path).state;
    if (state.num_nodes() != graph.num_nodes)
      raise(ErrorCode::DimMismatch, "checkpoint node count does not match the graph");
  } else {
    const TrainConfig config = make_train_config(topts, num_parts, common.seed);
    state = fit(graph, config);
  }
  if (varimax) apply_varimax_view(state);

  EvalReport eval = balance_probe(state, labels, bins);
  eval.config_echo["varimax"] = varimax;
  eval.config_echo["seed"] = common.seed;
  eval.config_echo["edges"] = common.edges_path;
  eval.config_echo["labels"] = labels_path;
  eval.config_echo["checkpoint"] = checkpoint_path;

  fs::create_directories(common.out_dir);
  const BalanceLoadings loadings = export_loadings(state, false);  // already the probed view
  const fs::path loadings_path = fs::path(common.out_dir) / "loadings.csv";
  write_loadings_csv(loadings, loadings_path.string());
  std::cout << loadings_path.string() << "\n";

  const std::size_t coord = eval.extras.at("coordinate").get<std::size_t>();
  const fs::path coord_path = fs::path(common.out_dir) / "coordinate_by_label.csv";
  write_coordinate_by_label_csv(embed_all(state), coord, labels, graph.node_names,
                                coord_path.string());
  std::cout << coord_path.string() << "\n";

  write_report(report_to_json(eval), common.out_dir);
  return 0;
}

int cmd_trajectory(const CommonOpts& common, const TrainOpts& topts,
                   const std::string& checkpoint_path, std::size_t num_parts, int node,
                   std::size_t a, std::size_t b, double smin, double smax, int steps) {
  const Graph graph = load_graph(common);
  ModelState state;
  if (!checkpoint_path.empty()) {
    state = load_checkpoint(checkpoint_path).state;
    if (state.num_nodes() != graph.num_nodes)
      raise(ErrorCode::DimMismatch, "checkpoint node count does not match the graph");
  } else {
    const TrainConfig config = make_train_config(topts, num_parts, common.seed);
    state = fit(graph, config);
  }

  const TrajectoryPath path = export_trajectory(state, node, a, b, linspace(smin, smax, steps));
  fs::create_directories(common.out_dir);
  const fs::path csv_path = fs::path(common.out_dir) / "trajectory.csv";
  write_trajectory_csv(path, csv_path.string());
  std::cout << csv_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compositional graph embeddings in Aitchison geometry"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Optional config file; flags take precedence");

  CommonOpts common;
  TrainOpts topts;

  // train
  auto* train_cmd = app.add_subcommand("train", "Fit embeddings and write a checkpoint");
  std::size_t train_k = 9;
  add_common_options(train_cmd, common);
  add_train_options(train_cmd, topts);
  train_cmd->add_option("--K", train_k, "Number of simplex components (D = K-1)")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));

  // linkpred
  auto* linkpred_cmd = app.add_subcommand("linkpred", "Connected split + train + evaluate");
  std::vector<int> dims = {8};
  int num_seeds = 5;
  double fraction = 0.5;
  add_common_options(linkpred_cmd, common);
  add_train_options(linkpred_cmd, topts);
  linkpred_cmd->add_option("--dims", dims, "Embedding dimensions D (K = D+1)")->delimiter(',');
  linkpred_cmd->add_option("--seeds", num_seeds, "Number of runs")->check(CLI::PositiveNumber);
  linkpred_cmd->add_option("--fraction", fraction, "Fraction of edges removed for testing")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));

  // nodeclass
  auto* nodeclass_cmd =
      app.add_subcommand("nodeclass", "Full-graph training + classification probe");
  std::string labels_path, export_features, pairs_path, export_pairs;
  int nodeclass_dim = 16;
  add_common_options(nodeclass_cmd, common);
  add_train_options(nodeclass_cmd, topts);
  nodeclass_cmd->add_option("--labels", labels_path, "Label file (node<TAB>label)")->required();
  nodeclass_cmd->add_option("--D", nodeclass_dim, "Embedding dimension (K = D+1)")
      ->check(CLI::PositiveNumber);
  nodeclass_cmd->add_option("--export-features", export_features,
                            "Write node embeddings CSV (file name inside --out)");
  nodeclass_cmd->add_option("--pairs", pairs_path, "Node-pair file for dyadic features");
  nodeclass_cmd->add_option("--export-pair-features", export_pairs,
                            "Write dyadic operator features CSV for --pairs");

  // subcomp
  auto* subcomp_cmd =
      app.add_subcommand("subcomp", "Subcompositional link-prediction robustness");
  std::string checkpoint_path;
  std::uint64_t split_seed = 0;
  std::size_t subcomp_k = 65;
  std::vector<std::size_t> keeps = {33};
  int masks = 50;
  bool calibrate = true;
  add_common_options(subcomp_cmd, common);
  add_train_options(subcomp_cmd, topts);
  subcomp_cmd->add_option("--checkpoint", checkpoint_path,
                          "Reuse a trained checkpoint instead of training");
  subcomp_cmd->add_option("--split-seed", split_seed, "Seed of the connected link split");
  subcomp_cmd->add_option("--K", subcomp_k, "Components when training from scratch");
  subcomp_cmd->add_option("--keep", keeps, "Kept component counts K'")->delimiter(',');
  subcomp_cmd->add_option("--masks", masks, "Random masks per keep size")
      ->check(CLI::PositiveNumber);
  subcomp_cmd->add_flag("--calibrate,!--no-calibrate", calibrate,
                        "Median-distance calibration of subcomposed scores");
  subcomp_cmd->add_option("--fraction", fraction, "Split fraction")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Synthetic membership recovery");
  std::string generator = "ilr", regime = "continuous", export_truth;
  int synth_n = 800;
  std::size_t synth_k = 8;
  double synth_degree = 20.0;
  add_common_options(synth_cmd, common, /*needs_edges=*/false);
  add_train_options(synth_cmd, topts);
  synth_cmd->add_option("--generator", generator, "Edge generator")
      ->check(CLI::IsMember({"ilr", "bilinear"}));
  synth_cmd->add_option("--regime", regime, "Membership regime")
      ->check(CLI::IsMember({"continuous", "near_discrete"}));
  synth_cmd->add_option("--N", synth_n, "Number of nodes")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--K", synth_k, "True component count")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
  synth_cmd->add_option("--degree", synth_degree, "Target mean degree")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--export-truth", export_truth, "Write true memberships CSV");

  // probe
  auto* probe_cmd = app.add_subcommand("probe", "Most label-associated balance statistics");
  std::string probe_labels, probe_checkpoint;
  std::size_t probe_k = 9;
  bool probe_varimax = false;
  int bins = 16;
  add_common_options(probe_cmd, common);
  add_train_options(probe_cmd, topts);
  probe_cmd->add_option("--labels", probe_labels, "Label file")->required();
  probe_cmd->add_option("--checkpoint", probe_checkpoint, "Reuse a trained checkpoint");
  probe_cmd->add_option("--K", probe_k, "Components when training from scratch")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
  probe_cmd->add_flag("--varimax", probe_varimax, "Probe the varimax-rotated basis view");
  probe_cmd->add_option("--bins", bins, "Quantile bins for mutual information")
      ->check(CLI::PositiveNumber);

  // trajectory
  auto* traj_cmd = app.add_subcommand("trajectory", "Paired log-ratio trajectory export");
  std::string traj_checkpoint;
  std::size_t traj_k = 9;
  int traj_node = 0;
  std::size_t comp_a = 0, comp_b = 1;
  double smin = -2.0, smax = 2.0;
  int steps = 41;
  add_common_options(traj_cmd, common);
  add_train_options(traj_cmd, topts);
  traj_cmd->add_option("--checkpoint", traj_checkpoint, "Reuse a trained checkpoint");
  traj_cmd->add_option("--K", traj_k, "Components when training from scratch")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
  traj_cmd->add_option("--node", traj_node, "Node id (dense, 0-based)");
  traj_cmd->add_option("--a", comp_a, "Component boosted by e^s (0-based)");
  traj_cmd->add_option("--b", comp_b, "Component damped by e^-s (0-based)");
  traj_cmd->add_option("--smin", smin, "Smallest trade-off strength");
  traj_cmd->add_option("--smax", smax, "Largest trade-off strength");
  traj_cmd->add_option("--steps", steps, "Grid size")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version exit clean, bad flags exit 1
  }

  try {
    if (train_cmd->parsed()) return cmd_train(common, topts, train_k);
    if (linkpred_cmd->parsed())
      return cmd_linkpred(common, topts, dims, num_seeds, fraction);
    if (nodeclass_cmd->parsed())
      return cmd_nodeclass(common, topts, labels_path, nodeclass_dim, export_features,
                           pairs_path, export_pairs);
    if (subcomp_cmd->parsed())
      return cmd_subcomp(common, topts, checkpoint_path, split_seed, fraction, subcomp_k,
                         keeps, masks, calibrate);
    if (synth_cmd->parsed())
      return cmd_synth(common, topts, generator, regime, synth_n, synth_k, synth_degree,
                       export_truth);
    if (probe_cmd->parsed())
      return cmd_probe(common, topts, probe_labels, probe_checkpoint, probe_k,
                       probe_varimax, bins);
    if (traj_cmd->parsed())
      return cmd_trajectory(common, topts, traj_checkpoint, traj_k, traj_node, comp_a,
                            comp_b, smin, smax, steps);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_numeric() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
