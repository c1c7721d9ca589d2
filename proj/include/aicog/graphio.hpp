#ifndef AICOG_GRAPHIO_HPP
#define AICOG_GRAPHIO_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "aicog/errors.hpp"

namespace aicog {

using Edge = std::pair<int, int>;  // normalized i < j

// Simple undirected graph: node count plus a deduplicated, sorted edge list.
// node_names carries the original string ids when the graph came from a file
// (dense id k <-> node_names[k]); empty for synthetic graphs.
struct Graph {
  int num_nodes = 0;
  std::vector<Edge> edges;
  std::vector<std::string> node_names;

  std::size_t num_edges() const { return edges.size(); }
};

inline std::uint64_t edge_key(int i, int j, int num_nodes) {
  return static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(num_nodes) +
         static_cast<std::uint64_t>(j);
}

inline std::unordered_set<std::uint64_t> build_edge_set(const Graph& g) {
  std::unordered_set<std::uint64_t> s;
  s.reserve(g.edges.size() * 2);
  for (const Edge& e : g.edges) s.insert(edge_key(e.first, e.second, g.num_nodes));
  return s;
}

inline std::vector<std::vector<int>> adjacency_lists(const Graph& g) {
  std::vector<std::vector<int>> adj(g.num_nodes);
  for (const Edge& e : g.edges) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  return adj;
}

inline bool is_connected(const Graph& g) {
  if (g.num_nodes == 0) return false;
  const auto adj = adjacency_lists(g);
  std::vector<char> seen(g.num_nodes, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == g.num_nodes;
}

inline void validate_graph(const Graph& g) {
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(g.edges.size() * 2);
  for (const Edge& e : g.edges) {
    if (e.first == e.second) raise(ErrorCode::ParseError, "self-loop in graph");
    if (e.first > e.second) raise(ErrorCode::ParseError, "edge not normalized");
    if (e.first < 0 || e.second >= g.num_nodes)
      raise(ErrorCode::ParseError, "edge references unknown node");
    if (!seen.insert(edge_key(e.first, e.second, g.num_nodes)).second)
      raise(ErrorCode::ParseError, "duplicate edge");
  }
}

// One edge per line, whitespace-separated string ids, '#' comment lines.
// Ids are mapped to dense integers in first-appearance order; duplicates and
// self-loops are dropped with a counted warning on stderr.
inline Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open edge list: " + path);

  Graph g;
  std::unordered_map<std::string, int> id_of;
  int dropped_self = 0, dropped_dup = 0;

  std::string line;
  int line_no = 0;
  std::set<std::pair<int, int>> dedup;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r\n");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::istringstream ss(line);
    std::string a, b, extra;
    if (!(ss >> a >> b) || (ss >> extra))
      raise(ErrorCode::ParseError,
            "line " + std::to_string(line_no) + ": expected 'u v' in " + path);
    auto intern = [&](const std::string& name) {
      auto it = id_of.find(name);
      if (it != id_of.end()) return it->second;
      const int id = static_cast<int>(g.node_names.size());
      id_of.emplace(name, id);
      g.node_names.push_back(name);
      return id;
    };
    int u = intern(a), v = intern(b);
    if (u == v) {
      ++dropped_self;
      continue;
    }
    if (u > v) std::swap(u, v);
    if (!dedup.insert({u, v}).second) {
      ++dropped_dup;
      continue;
    }
  }
  g.num_nodes = static_cast<int>(g.node_names.size());
  g.edges.assign(dedup.begin(), dedup.end());
  if (dropped_self > 0 || dropped_dup > 0)
    std::cerr << "warning: dropped " << dropped_self << " self-loop(s) and " << dropped_dup
              << " duplicate edge(s) from " << path << "\n";
  if (g.edges.empty()) raise(ErrorCode::EmptyGraph, "no edges in " + path);
  return g;
}

// Partial node -> class map with class ids made dense in 0..C-1.
struct LabelTable {
  std::vector<int> labels;  // size num_nodes, -1 where unlabeled
  int num_classes = 0;
  std::vector<std::string> class_names;

  std::vector<int> labeled_nodes() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] >= 0) out.push_back(static_cast<int>(i));
    return out;
  }
};

inline LabelTable load_labels(const std::string& path, const Graph& graph) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open label file: " + path);
  std::unordered_map<std::string, int> id_of;
  for (std::size_t i = 0; i < graph.node_names.size(); ++i)
    id_of.emplace(graph.node_names[i], static_cast<int>(i));

  LabelTable table;
  table.labels.assign(graph.num_nodes, -1);
  std::unordered_map<std::string, int> class_of;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r\n");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::istringstream ss(line);
    std::string node, label, extra;
    if (!(ss >> node >> label) || (ss >> extra))
      raise(ErrorCode::ParseError,
            "line " + std::to_string(line_no) + ": expected 'node<TAB>label' in " + path);
    auto it = id_of.find(node);
    if (it == id_of.end())
      raise(ErrorCode::UnknownNode,
            "line " + std::to_string(line_no) + ": node '" + node + "' not in graph");
    auto cit = class_of.find(label);
    int cls;
    if (cit == class_of.end()) {
      cls = static_cast<int>(table.class_names.size());
      class_of.emplace(label, cls);
      table.class_names.push_back(label);
    } else {
      cls = cit->second;
    }
    table.labels[it->second] = cls;
  }
  table.num_classes = static_cast<int>(table.class_names.size());
  return table;
}

// Connected 50%-style split: residual graph stays connected, removed edges
// plus an equal number of sampled non-edges form the test set.
struct LinkSplit {
  Graph residual;
  std::vector<Edge> test_pos;
  std::vector<Edge> test_neg;
};

// Protects a random spanning tree (union-find over shuffled edges), removes
// min(floor(fraction*|E|), |E|-(N-1)) of the remaining edges as test
// positives, and rejection-samples the same number of distinct non-edges as
// test negatives. Deterministic for a fixed seed.
inline LinkSplit connected_link_split(const Graph& graph, double fraction,
                                      std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    raise(ErrorCode::BadConfig, "fraction must lie in (0,1)");
  if (!is_connected(graph)) raise(ErrorCode::Disconnected, "input graph is not connected");

  const int n = graph.num_nodes;
  const std::size_t num_edges = graph.edges.size();
  std::mt19937_64 rng(seed);

  std::vector<std::size_t> order(num_edges);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  // Union-find spanning tree over the shuffled edge order.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<char> in_tree(num_edges, 0);
  for (std::size_t idx : order) {
    const Edge& e = graph.edges[idx];
    const int ra = find(e.first), rb = find(e.second);
    if (ra != rb) {
      parent[ra] = rb;
      in_tree[idx] = 1;
    }
  }

  std::vector<std::size_t> removable;
  for (std::size_t idx = 0; idx < num_edges; ++idx)
    if (!in_tree[idx]) removable.push_back(idx);

  const std::size_t requested = static_cast<std::size_t>(fraction * static_cast<double>(num_edges));
  std::size_t num_test = std::min(requested, removable.size());
  if (num_test < requested)
    std::cerr << "warning: only " << removable.size() << " non-tree edges available, removing "
              << num_test << " instead of " << requested << "\n";

  std::shuffle(removable.begin(), removable.end(), rng);

  LinkSplit split;
  std::vector<char> removed(num_edges, 0);
  for (std::size_t t = 0; t < num_test; ++t) removed[removable[t]] = 1;
  for (std::size_t idx = 0; idx < num_edges; ++idx) {
    if (removed[idx])
      split.test_pos.push_back(graph.edges[idx]);
    else
      split.residual.edges.push_back(graph.edges[idx]);
  }
  split.residual.num_nodes = n;
  split.residual.node_names = graph.node_names;

  // Negatives: distinct uniform non-edges of the *original* graph. When the
  // graph is so dense that fewer non-edges exist than removed edges, take all
  // of them and warn, mirroring the positive-side degradation above.
  const std::uint64_t total_pairs =
      static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2;
  const std::uint64_t non_edges = total_pairs - num_edges;
  const std::size_t num_neg = static_cast<std::size_t>(
      std::min<std::uint64_t>(non_edges, static_cast<std::uint64_t>(num_test)));
  if (num_neg < num_test)
    std::cerr << "warning: only " << non_edges << " non-edges available for " << num_test
              << " test positives\n";
  const auto edge_set = build_edge_set(graph);
  std::unordered_set<std::uint64_t> chosen;
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uint64_t attempts = 0;
  const std::uint64_t max_attempts = 1000 * total_pairs + 1000;
  while (split.test_neg.size() < num_neg) {
    if (++attempts > max_attempts)
      raise(ErrorCode::TooDense, "rejection sampling of test negatives stalled");
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    const std::uint64_t key = edge_key(i, j, n);
    if (edge_set.count(key) || !chosen.insert(key).second) continue;
    split.test_neg.emplace_back(i, j);
  }

  // Contract checks: residual connectivity, exact edge partition, negative
  // disjointness.
  if (!is_connected(split.residual))
    raise(ErrorCode::Disconnected, "internal: residual lost connectivity");
  if (split.residual.edges.size() + split.test_pos.size() != num_edges)
    raise(ErrorCode::BadConfig, "internal: edge partition mismatch");
  for (const Edge& e : split.test_neg)
    if (edge_set.count(edge_key(e.first, e.second, n)))
      raise(ErrorCode::BadConfig, "internal: negative overlaps an edge");
  return split;
}

// Restriction to the largest connected component, nodes re-indexed densely in
// ascending original order. Needed to run connected-split protocols on
// real-world graphs that have satellite components.
inline Graph largest_component(const Graph& graph) {
  const auto adj = adjacency_lists(graph);
  std::vector<int> comp(graph.num_nodes, -1);
  int num_comp = 0;
  std::vector<int> comp_size;
  for (int s = 0; s < graph.num_nodes; ++s) {
    if (comp[s] >= 0) continue;
    const int c = num_comp++;
    comp_size.push_back(0);
    std::vector<int> stack = {s};
    comp[s] = c;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      ++comp_size[c];
      for (int v : adj[u]) {
        if (comp[v] < 0) {
          comp[v] = c;
          stack.push_back(v);
        }
      }
    }
  }
  const int best =
      static_cast<int>(std::max_element(comp_size.begin(), comp_size.end()) - comp_size.begin());

  Graph out;
  std::vector<int> new_id(graph.num_nodes, -1);
  for (int v = 0; v < graph.num_nodes; ++v) {
    if (comp[v] == best) {
      new_id[v] = out.num_nodes++;
      if (!graph.node_names.empty()) out.node_names.push_back(graph.node_names[v]);
    }
  }
  for (const Edge& e : graph.edges)
    if (comp[e.first] == best)
      out.edges.emplace_back(new_id[e.first], new_id[e.second]);
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

}  // namespace aicog

#endif  // AICOG_GRAPHIO_HPP
