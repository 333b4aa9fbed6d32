#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace multiverse {

// Bijection between external string labels and dense internal ids [0, n).
class NodeIndex {
 public:
  int add(const std::string& label);
  std::optional<int> find(const std::string& label) const;
  const std::string& label(int id) const { return labels_[static_cast<std::size_t>(id)]; }
  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> ids_;
};

struct ParsedEdge {
  std::string src;
  std::string dst;
  double weight = 1.0;
};

struct ParseStats {
  std::size_t dropped_self_loops = 0;
  std::size_t merged_duplicates = 0;
};

// One edge per line: "src dst [weight]", '#' comments, tabs or spaces.
// Duplicate undirected pairs keep the first weight; self-loops are dropped
// and counted. Malformed lines and non-positive weights throw with the
// offending line number.
std::vector<ParsedEdge> parse_edge_list(std::istream& in, ParseStats* stats = nullptr);
std::vector<ParsedEdge> parse_edge_list(const std::string& text, ParseStats* stats = nullptr);

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 1.0;
};

// Symmetric zero-diagonal adjacency in CSR form over the union node set.
// Neighbor lists are sorted by node id.
class Layer {
 public:
  Layer() = default;
  // Edges are deduplicated (first weight wins); self-loops rejected upstream.
  Layer(int n, std::span<const Edge> edges);

  int dim() const { return static_cast<int>(offsets_.size()) - 1; }
  std::size_t edge_count() const { return edge_count_; }
  int degree(int u) const { return offsets_[u + 1] - offsets_[u]; }
  double weighted_degree(int u) const;
  std::span<const int> neighbors(int u) const;
  std::span<const double> weights(int u) const;
  bool has_edge(int u, int v) const;
  double edge_weight(int u, int v) const;  // 0 when absent

  // Undirected edges with u < v, sorted.
  std::vector<Edge> edges() const;

 private:
  std::vector<int> offsets_{0};
  std::vector<int> neighbors_;
  std::vector<double> weights_;
  std::size_t edge_count_ = 0;
};

struct MultiplexGraph {
  NodeIndex nodes;
  std::vector<Layer> layers;

  int node_count() const { return nodes.size(); }
  int layer_count() const { return static_cast<int>(layers.size()); }
  bool has_edge_any_layer(int u, int v) const;
};

// Union node set across layers; nodes missing from a layer stay isolated
// there. Throws on empty input.
MultiplexGraph build_multiplex(const std::vector<std::vector<ParsedEdge>>& layer_edges);

// Variant that reuses an existing node index, for rebuilding after splits.
MultiplexGraph build_multiplex(NodeIndex nodes, const std::vector<std::vector<Edge>>& layer_edges);

// Bipartite edge set between two node universes, stored once (the per-layer
// replication happens at transition-matrix time).
class BipartiteEdges {
 public:
  BipartiteEdges() = default;
  BipartiteEdges(int n_left, int n_right, std::span<const std::pair<int, int>> pairs);

  std::size_t count() const { return pairs_.size(); }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  bool contains(int left, int right) const;
  std::span<const int> right_neighbors(int left) const;
  std::span<const int> left_neighbors(int right) const;

 private:
  std::vector<std::pair<int, int>> pairs_;  // sorted, unique
  std::vector<int> left_offsets_{0};
  std::vector<int> left_adj_;
  std::vector<int> right_offsets_{0};
  std::vector<int> right_adj_;
};

struct MultiHetGraph {
  MultiplexGraph mplex1;
  MultiplexGraph mplex2;
  BipartiteEdges bipartite;
  std::size_t dropped_bipartite = 0;
};

// Bipartite labels resolve left against m1 and right against m2;
// unresolvable endpoints are dropped and counted. Throws when no edge
// resolves.
MultiHetGraph build_multihet(MultiplexGraph m1, MultiplexGraph m2,
                             const std::vector<ParsedEdge>& bipartite);

// Variant taking already-resolved internal id pairs.
MultiHetGraph build_multihet(MultiplexGraph m1, MultiplexGraph m2,
                             std::span<const std::pair<int, int>> bipartite);

// Column-stochastic normalization of a layer, CSC layout. Zero-degree
// columns stay all-zero and are reported for downstream handling.
struct ColumnNormalized {
  std::vector<int> col_offsets;
  std::vector<int> rows;
  std::vector<double> values;
  std::vector<int> zero_degree_columns;
};

ColumnNormalized column_normalize(const Layer& layer);

// Layer file round trip: "src dst weight" per edge, weight omitted when 1.
void save_edge_list(std::ostream& out, const Layer& layer, const NodeIndex& nodes);

}  // namespace multiverse
