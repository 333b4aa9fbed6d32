#include "multiverse/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace multiverse {

int NodeIndex::add(const std::string& label) {
  auto [it, inserted] = ids_.try_emplace(label, static_cast<int>(labels_.size()));
  if (inserted) labels_.push_back(label);
  return it->second;
}

std::optional<int> NodeIndex::find(const std::string& label) const {
  auto it = ids_.find(label);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

}  // namespace

std::vector<ParsedEdge> parse_edge_list(std::istream& in, ParseStats* stats) {
  std::vector<ParsedEdge> edges;
  // key: canonical (min,max) label pair
  std::unordered_map<std::string, std::size_t> seen;
  ParseStats local;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty() || fields[0][0] == '#') continue;
    if (fields.size() < 2 || fields.size() > 3) {
      throw std::runtime_error("edge list parse error at line " + std::to_string(line_no) +
                               ": expected 'src dst [weight]'");
    }
    double weight = 1.0;
    if (fields.size() == 3) {
      const std::string& w = fields[2];
      const char* first = w.data();
      const char* last = w.data() + w.size();
      auto [ptr, ec] = std::from_chars(first, last, weight);
      if (ec != std::errc() || ptr != last) {
        throw std::runtime_error("edge list parse error at line " + std::to_string(line_no) +
                                 ": weight '" + w + "' is not a number");
      }
      if (!(weight > 0.0)) {
        throw std::runtime_error("edge list parse error at line " + std::to_string(line_no) +
                                 ": weight must be positive");
      }
    }
    if (fields[0] == fields[1]) {
      ++local.dropped_self_loops;
      continue;
    }
    const std::string key = fields[0] < fields[1] ? fields[0] + "\x1f" + fields[1]
                                                  : fields[1] + "\x1f" + fields[0];
    if (seen.count(key)) {
      ++local.merged_duplicates;
      continue;
    }
    seen.emplace(key, edges.size());
    edges.push_back(ParsedEdge{fields[0], fields[1], weight});
  }
  if (stats) *stats = local;
  return edges;
}

std::vector<ParsedEdge> parse_edge_list(const std::string& text, ParseStats* stats) {
  std::istringstream in(text);
  return parse_edge_list(in, stats);
}

Layer::Layer(int n, std::span<const Edge> edges) {
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw std::out_of_range("layer edge endpoint out of range");
    if (e.u == e.v) continue;  // zero diagonal
    auto& row = adj[static_cast<std::size_t>(e.u)];
    bool dup = false;
    for (const auto& [j, w] : row) {
      if (j == e.v) {
        dup = true;
        break;
      }
    }
    if (dup) continue;  // first weight wins
    adj[static_cast<std::size_t>(e.u)].emplace_back(e.v, e.weight);
    adj[static_cast<std::size_t>(e.v)].emplace_back(e.u, e.weight);
    ++edge_count_;
  }
  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int u = 0; u < n; ++u) {
    auto& row = adj[static_cast<std::size_t>(u)];
    std::sort(row.begin(), row.end());
    offsets_[static_cast<std::size_t>(u) + 1] =
        offsets_[static_cast<std::size_t>(u)] + static_cast<int>(row.size());
    for (const auto& [j, w] : row) {
      neighbors_.push_back(j);
      weights_.push_back(w);
    }
  }
}

double Layer::weighted_degree(int u) const {
  double sum = 0.0;
  for (double w : weights(u)) sum += w;
  return sum;
}

std::span<const int> Layer::neighbors(int u) const {
  return {neighbors_.data() + offsets_[u], static_cast<std::size_t>(degree(u))};
}

std::span<const double> Layer::weights(int u) const {
  return {weights_.data() + offsets_[u], static_cast<std::size_t>(degree(u))};
}

bool Layer::has_edge(int u, int v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

double Layer::edge_weight(int u, int v) const {
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return 0.0;
  return weights_[offsets_[u] + static_cast<int>(it - nb.begin())];
}

std::vector<Edge> Layer::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (int u = 0; u < dim(); ++u) {
    auto nb = neighbors(u);
    auto ws = weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (u < nb[k]) out.push_back(Edge{u, nb[k], ws[k]});
    }
  }
  return out;
}

bool MultiplexGraph::has_edge_any_layer(int u, int v) const {
  for (const Layer& layer : layers) {
    if (layer.has_edge(u, v)) return true;
  }
  return false;
}

MultiplexGraph build_multiplex(const std::vector<std::vector<ParsedEdge>>& layer_edges) {
  if (layer_edges.empty()) throw std::invalid_argument("multiplex needs at least one layer");
  MultiplexGraph g;
  std::size_t total = 0;
  for (const auto& edges : layer_edges) {
    for (const ParsedEdge& e : edges) {
      g.nodes.add(e.src);
      g.nodes.add(e.dst);
      ++total;
    }
  }
  if (total == 0) throw std::invalid_argument("multiplex has no edges");
  const int n = g.nodes.size();
  for (const auto& edges : layer_edges) {
    std::vector<Edge> resolved;
    resolved.reserve(edges.size());
    for (const ParsedEdge& e : edges) {
      resolved.push_back(Edge{*g.nodes.find(e.src), *g.nodes.find(e.dst), e.weight});
    }
    g.layers.emplace_back(n, resolved);
  }
  return g;
}

MultiplexGraph build_multiplex(NodeIndex nodes, const std::vector<std::vector<Edge>>& layer_edges) {
  if (layer_edges.empty()) throw std::invalid_argument("multiplex needs at least one layer");
  MultiplexGraph g;
  g.nodes = std::move(nodes);
  const int n = g.nodes.size();
  for (const auto& edges : layer_edges) g.layers.emplace_back(n, edges);
  return g;
}

BipartiteEdges::BipartiteEdges(int n_left, int n_right,
                               std::span<const std::pair<int, int>> pairs) {
  pairs_.assign(pairs.begin(), pairs.end());
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  for (const auto& [l, r] : pairs_) {
    if (l < 0 || l >= n_left || r < 0 || r >= n_right)
      throw std::out_of_range("bipartite endpoint out of range");
  }
  left_offsets_.assign(static_cast<std::size_t>(n_left) + 1, 0);
  right_offsets_.assign(static_cast<std::size_t>(n_right) + 1, 0);
  for (const auto& [l, r] : pairs_) {
    ++left_offsets_[static_cast<std::size_t>(l) + 1];
    ++right_offsets_[static_cast<std::size_t>(r) + 1];
  }
  for (std::size_t i = 1; i < left_offsets_.size(); ++i) left_offsets_[i] += left_offsets_[i - 1];
  for (std::size_t i = 1; i < right_offsets_.size(); ++i)
    right_offsets_[i] += right_offsets_[i - 1];
  left_adj_.resize(pairs_.size());
  right_adj_.resize(pairs_.size());
  std::vector<int> lpos(left_offsets_.begin(), left_offsets_.end() - 1);
  std::vector<int> rpos(right_offsets_.begin(), right_offsets_.end() - 1);
  for (const auto& [l, r] : pairs_) {
    left_adj_[lpos[static_cast<std::size_t>(l)]++] = r;
    right_adj_[rpos[static_cast<std::size_t>(r)]++] = l;
  }
}

bool BipartiteEdges::contains(int left, int right) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), std::make_pair(left, right));
}

std::span<const int> BipartiteEdges::right_neighbors(int left) const {
  return {left_adj_.data() + left_offsets_[left],
          static_cast<std::size_t>(left_offsets_[left + 1] - left_offsets_[left])};
}

std::span<const int> BipartiteEdges::left_neighbors(int right) const {
  return {right_adj_.data() + right_offsets_[right],
          static_cast<std::size_t>(right_offsets_[right + 1] - right_offsets_[right])};
}

MultiHetGraph build_multihet(MultiplexGraph m1, MultiplexGraph m2,
                             const std::vector<ParsedEdge>& bipartite) {
  std::vector<std::pair<int, int>> resolved;
  std::size_t dropped = 0;
  for (const ParsedEdge& e : bipartite) {
    auto l = m1.nodes.find(e.src);
    auto r = m2.nodes.find(e.dst);
    if (!l || !r) {
      ++dropped;
      continue;
    }
    resolved.emplace_back(*l, *r);
  }
  if (resolved.empty()) throw std::invalid_argument("no resolvable bipartite edges");
  MultiHetGraph g = build_multihet(std::move(m1), std::move(m2), resolved);
  g.dropped_bipartite = dropped;
  return g;
}

MultiHetGraph build_multihet(MultiplexGraph m1, MultiplexGraph m2,
                             std::span<const std::pair<int, int>> bipartite) {
  if (bipartite.empty()) throw std::invalid_argument("no resolvable bipartite edges");
  MultiHetGraph g;
  g.bipartite = BipartiteEdges(m1.node_count(), m2.node_count(), bipartite);
  g.mplex1 = std::move(m1);
  g.mplex2 = std::move(m2);
  return g;
}

ColumnNormalized column_normalize(const Layer& layer) {
  const int n = layer.dim();
  ColumnNormalized out;
  out.col_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int j = 0; j < n; ++j) {
    const double degw = layer.weighted_degree(j);
    auto nb = layer.neighbors(j);
    auto ws = layer.weights(j);
    if (degw <= 0.0) {
      out.zero_degree_columns.push_back(j);
    } else {
      // symmetric adjacency: column j entries are j's neighbor rows
      for (std::size_t k = 0; k < nb.size(); ++k) {
        out.rows.push_back(nb[k]);
        out.values.push_back(ws[k] / degw);
      }
    }
    out.col_offsets[static_cast<std::size_t>(j) + 1] = static_cast<int>(out.rows.size());
  }
  return out;
}

void save_edge_list(std::ostream& out, const Layer& layer, const NodeIndex& nodes) {
  for (const Edge& e : layer.edges()) {
    out << nodes.label(e.u) << '\t' << nodes.label(e.v);
    if (e.weight != 1.0) {
      std::ostringstream w;
      w.precision(17);
      w << e.weight;
      out << '\t' << w.str();
    }
    out << '\n';
  }
}

}  // namespace multiverse
