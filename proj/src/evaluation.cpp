#include "multiverse/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace multiverse {

namespace {

std::pair<int, int> canonical(int u, int v) { return u < v ? std::make_pair(u, v) : std::make_pair(v, u); }

struct PairHash {
  std::size_t operator()(const std::pair<int, int>& p) const {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(p.first) << 32) ^
                                      static_cast<std::uint32_t>(p.second));
  }
};

using PairSet = std::unordered_set<std::pair<int, int>, PairHash>;

}  // namespace

void SplitConfig::validate() const {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("test_fraction must be in (0,1)");
}

EdgeSplit connected_split(const Layer& layer, const SplitConfig& cfg) {
  cfg.validate();
  const int n = layer.dim();
  Rng rng(Rng::derive(cfg.rng_seed, 0x5b1d));

  // components via BFS
  std::vector<int> component(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<int>> members;
  for (int start = 0; start < n; ++start) {
    if (component[static_cast<std::size_t>(start)] != -1) continue;
    const int c = static_cast<int>(members.size());
    members.emplace_back();
    std::vector<int> queue{start};
    component[static_cast<std::size_t>(start)] = c;
    while (!queue.empty()) {
      const int u = queue.back();
      queue.pop_back();
      members.back().push_back(u);
      for (int v : layer.neighbors(u)) {
        if (component[static_cast<std::size_t>(v)] == -1) {
          component[static_cast<std::size_t>(v)] = c;
          queue.push_back(v);
        }
      }
    }
  }

  // Broder random-walk cover per component: the entry edge of each first
  // visit joins the protected spanning forest.
  PairSet protected_edges;
  for (const auto& comp : members) {
    if (comp.size() < 2) continue;
    std::vector<bool> visited(static_cast<std::size_t>(n), false);
    int current = comp[rng.next_below(comp.size())];
    visited[static_cast<std::size_t>(current)] = true;
    std::size_t covered = 1;
    while (covered < comp.size()) {
      auto nb = layer.neighbors(current);
      const int next = nb[rng.next_below(nb.size())];
      if (!visited[static_cast<std::size_t>(next)]) {
        visited[static_cast<std::size_t>(next)] = true;
        ++covered;
        protected_edges.insert(canonical(current, next));
      }
      current = next;
    }
  }

  const std::vector<Edge> edges = layer.edges();
  std::vector<std::size_t> removable;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!protected_edges.count(canonical(edges[i].u, edges[i].v))) removable.push_back(i);
  }
  const std::size_t want = static_cast<std::size_t>(
      std::floor(cfg.test_fraction * static_cast<double>(edges.size())));
  const std::size_t take = std::min(want, removable.size());

  // partial Fisher-Yates
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + rng.next_below(removable.size() - i);
    std::swap(removable[i], removable[j]);
  }
  std::vector<bool> is_test(edges.size(), false);
  for (std::size_t i = 0; i < take; ++i) is_test[removable[i]] = true;

  EdgeSplit split;
  split.requested_test_count = want;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    (is_test[i] ? split.test : split.train).push_back(edges[i]);
  }
  return split;
}

namespace {

std::vector<std::pair<int, int>> sample_pairs(std::size_t count, const PairSet& exclude,
                                              const std::function<std::pair<int, int>()>& draw,
                                              const std::function<bool(std::pair<int, int>)>& ok) {
  std::vector<std::pair<int, int>> out;
  PairSet chosen;
  std::size_t attempts = 0;
  const std::size_t budget = 1000 * std::max<std::size_t>(count, 1);
  while (out.size() < count) {
    if (attempts++ >= budget)
      throw std::runtime_error("could not sample enough non-edges (graph too dense)");
    const auto pair = draw();
    if (pair.first < 0) continue;  // rejected draw (e.g. u == v)
    if (!ok(pair) || exclude.count(pair) || chosen.count(pair)) continue;
    chosen.insert(pair);
    out.push_back(pair);
  }
  return out;
}

}  // namespace

std::vector<std::pair<int, int>> sample_non_edges(const MultiplexGraph& g, std::size_t count,
                                                  Rng& rng,
                                                  std::span<const std::pair<int, int>> exclude) {
  const int n = g.node_count();
  if (n < 2) throw std::invalid_argument("graph too small for non-edges");
  PairSet excl;
  for (auto p : exclude) excl.insert(canonical(p.first, p.second));
  auto draw = [&]() -> std::pair<int, int> {
    const int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    const int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    if (u == v) return {-1, -1};
    return canonical(u, v);
  };
  auto ok = [&](std::pair<int, int> p) { return !g.has_edge_any_layer(p.first, p.second); };
  return sample_pairs(count, excl, draw, ok);
}

std::vector<std::pair<int, int>> sample_non_edges_bipartite(
    const BipartiteEdges& bip, int n_left, int n_right, std::size_t count, Rng& rng,
    std::span<const std::pair<int, int>> exclude) {
  if (n_left < 1 || n_right < 1) throw std::invalid_argument("empty bipartite side");
  PairSet excl;
  for (auto p : exclude) excl.insert(p);
  auto draw = [&]() -> std::pair<int, int> {
    const int l = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_left)));
    const int r = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_right)));
    return {l, r};
  };
  auto ok = [&](std::pair<int, int> p) { return !bip.contains(p.first, p.second); };
  return sample_pairs(count, excl, draw, ok);
}

void LogisticClassifier::fit(const std::vector<std::vector<double>>& features,
                             std::span<const int> labels) {
  if (features.size() != labels.size() || features.empty())
    throw std::invalid_argument("features and labels must be non-empty and equal length");
  std::size_t positives = 0;
  for (int y : labels) positives += static_cast<std::size_t>(y != 0);
  if (positives == 0 || positives == labels.size())
    throw std::invalid_argument("logistic fit needs both classes");

  const std::size_t count = features.size();
  const std::size_t dim = features[0].size();
  for (const auto& f : features) {
    if (f.size() != dim) throw std::invalid_argument("inconsistent feature dimensions");
  }

  mean_.assign(dim, 0.0);
  scale_.assign(dim, 0.0);
  for (const auto& f : features) {
    for (std::size_t j = 0; j < dim; ++j) mean_[j] += f[j];
  }
  for (std::size_t j = 0; j < dim; ++j) mean_[j] /= static_cast<double>(count);
  for (const auto& f : features) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = f[j] - mean_[j];
      scale_[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    scale_[j] = std::sqrt(scale_[j] / static_cast<double>(count));
    if (scale_[j] < 1e-12) scale_[j] = 1.0;  // constant feature
  }

  double w_pos = 1.0, w_neg = 1.0;
  if (params_.class_weights) {
    w_pos = static_cast<double>(count) / (2.0 * static_cast<double>(positives));
    w_neg = static_cast<double>(count) / (2.0 * static_cast<double>(count - positives));
  }

  std::vector<std::vector<double>> x(count, std::vector<double>(dim));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < dim; ++j) x[i][j] = (features[i][j] - mean_[j]) / scale_[j];
  }

  weights_.assign(dim, 0.0);
  intercept_ = 0.0;
  std::vector<double> grad(dim);
  for (int epoch = 0; epoch < params_.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    double weight_total = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      double z = intercept_;
      for (std::size_t j = 0; j < dim; ++j) z += weights_[j] * x[i][j];
      const double p = 1.0 / (1.0 + std::exp(-z));
      const double cw = labels[i] ? w_pos : w_neg;
      const double err = cw * (p - (labels[i] ? 1.0 : 0.0));
      for (std::size_t j = 0; j < dim; ++j) grad[j] += err * x[i][j];
      grad_b += err;
      weight_total += cw;
    }
    for (std::size_t j = 0; j < dim; ++j) {
      weights_[j] -= params_.lr * (grad[j] / weight_total + params_.l2 * weights_[j]);
    }
    intercept_ -= params_.lr * grad_b / weight_total;
  }
}

double LogisticClassifier::score(std::span<const double> features) const {
  if (features.size() != weights_.size())
    throw std::invalid_argument("feature dimension does not match fitted model");
  double z = intercept_;
  for (std::size_t j = 0; j < features.size(); ++j) {
    z += weights_[j] * (features[j] - mean_[j]) / scale_[j];
  }
  return 1.0 / (1.0 + std::exp(-z));
}

LogisticClassifier train_logistic(const std::vector<std::vector<double>>& features,
                                  std::span<const int> labels, const LogisticParams& params) {
  LogisticClassifier clf(params);
  clf.fit(features, labels);
  return clf;
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size() || scores.empty())
    throw std::invalid_argument("scores and labels must be non-empty and equal length");
  std::size_t positives = 0;
  for (int y : labels) positives += static_cast<std::size_t>(y != 0);
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0)
    throw std::invalid_argument("roc_auc needs both classes");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // average ranks over tied blocks
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]]) rank_sum_pos += avg_rank;
    }
    i = j + 1;
  }
  const double p = static_cast<double>(positives);
  const double n = static_cast<double>(negatives);
  return (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * n);
}

double precision_at_k(std::span<const double> scores, std::span<const int> labels, std::size_t k) {
  if (scores.size() != labels.size()) throw std::invalid_argument("length mismatch");
  if (k == 0) throw std::invalid_argument("K must be positive");
  if (k > scores.size()) throw std::invalid_argument("K exceeds the number of scored pairs");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::size_t hits = 0;
  for (std::size_t i = 0; i < k; ++i) hits += static_cast<std::size_t>(labels[order[i]] != 0);
  return static_cast<double>(hits) / static_cast<double>(k);
}

void EvalReport::write_tsv(std::ostream& out) const {
  for (const auto& note : notes) out << "# " << note << '\n';
  out << "method\toperator\tmetric\tvalue\tseed\tparams\n";
  char buf[32];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f", row.value);
    out << row.method << '\t' << row.feature << '\t' << row.metric << '\t' << buf << '\t'
        << row.seed << '\t' << row.params << '\n';
  }
}

std::unique_ptr<BinaryClassifier> PipelineConfig::new_classifier(bool class_weighted) const {
  if (make_classifier) return make_classifier();
  LogisticParams params = classifier;
  params.class_weights = class_weighted;
  return std::make_unique<LogisticClassifier>(params);
}

namespace {

std::vector<std::vector<double>> operator_features(const EmbeddingMatrix& w, OperatorKind kind,
                                                   std::span<const std::pair<int, int>> pairs,
                                                   bool halved_average) {
  std::vector<std::vector<double>> out;
  out.reserve(pairs.size());
  for (auto [u, v] : pairs) {
    out.push_back(apply_operator(kind, w.row(u), w.row(v), halved_average));
  }
  return out;
}

std::vector<std::vector<double>> heuristic_features(const MultiplexGraph& g, HeuristicKind kind,
                                                    std::span<const std::pair<int, int>> pairs) {
  std::vector<std::vector<double>> out;
  out.reserve(pairs.size());
  for (auto [u, v] : pairs) {
    out.push_back({heuristic_average(kind, u, v, g)});
  }
  return out;
}

double auc_for(const PipelineConfig& cfg, const std::vector<std::vector<double>>& train_x,
               std::span<const int> train_y, const std::vector<std::vector<double>>& test_x,
               std::span<const int> test_y) {
  auto clf = cfg.new_classifier(false);
  clf->fit(train_x, train_y);
  std::vector<double> scores;
  scores.reserve(test_x.size());
  for (const auto& f : test_x) scores.push_back(clf->score(f));
  return roc_auc(scores, test_y);
}

std::string fraction_tag(const SplitConfig& cfg) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "test_fraction=%g", cfg.test_fraction);
  return buf;
}

}  // namespace

EvalReport evaluate_link_prediction(const MultiplexGraph& g, const PipelineConfig& cfg) {
  cfg.split.validate();
  EvalReport report;
  report.notes.push_back("classifier: logistic regression (pluggable)");

  // per-layer connected splits
  std::vector<std::vector<Edge>> train_layers;
  PairSet train_pairs, test_pairs;
  for (int alpha = 0; alpha < g.layer_count(); ++alpha) {
    SplitConfig layer_cfg = cfg.split;
    layer_cfg.rng_seed = Rng::derive(cfg.seed, 100 + static_cast<std::uint64_t>(alpha));
    EdgeSplit split = connected_split(g.layers[static_cast<std::size_t>(alpha)], layer_cfg);
    for (const Edge& e : split.train) train_pairs.insert(canonical(e.u, e.v));
    for (const Edge& e : split.test) test_pairs.insert(canonical(e.u, e.v));
    train_layers.push_back(std::move(split.train));
  }
  // union-level evaluation: a pair still present in some train layer is not
  // a test positive
  for (auto it = test_pairs.begin(); it != test_pairs.end();) {
    it = train_pairs.count(*it) ? test_pairs.erase(it) : ++it;
  }
  if (test_pairs.empty()) throw std::runtime_error("connected split produced no test edges");

  MultiplexGraph train_graph = build_multiplex(g.nodes, train_layers);

  TrainParams train_cfg = cfg.train;
  train_cfg.rng_seed = Rng::derive(cfg.seed, 1);
  SimilarityMatrix sim = similarity_matrix(train_graph, cfg.rwr, train_cfg.workers);
  EmbeddingMatrix w = train(sim, train_cfg);

  std::vector<std::pair<int, int>> train_pos(train_pairs.begin(), train_pairs.end());
  std::sort(train_pos.begin(), train_pos.end());
  std::vector<std::pair<int, int>> test_pos(test_pairs.begin(), test_pairs.end());
  std::sort(test_pos.begin(), test_pos.end());

  Rng neg_rng(Rng::derive(cfg.seed, 2));
  auto train_neg = sample_non_edges(g, train_pos.size(), neg_rng);
  auto test_neg = sample_non_edges(g, test_pos.size(), neg_rng, train_neg);

  LabeledEdgeSet train_set, test_set;
  for (auto p : train_pos) train_set.add(p, 1);
  for (auto p : train_neg) train_set.add(p, 0);
  for (auto p : test_pos) test_set.add(p, 1);
  for (auto p : test_neg) test_set.add(p, 0);

  const std::string params = fraction_tag(cfg.split);
  for (OperatorKind kind : all_operators()) {
    auto train_x = operator_features(w, kind, train_set.pairs, cfg.halved_average);
    auto test_x = operator_features(w, kind, test_set.pairs, cfg.halved_average);
    const double auc = auc_for(cfg, train_x, train_set.labels, test_x, test_set.labels);
    report.rows.push_back({"multiverse", operator_name(kind), "roc_auc", auc, cfg.seed, params});
  }
  for (HeuristicKind kind : all_heuristics()) {
    auto train_x = heuristic_features(train_graph, kind, train_set.pairs);
    auto test_x = heuristic_features(train_graph, kind, test_set.pairs);
    const double auc = auc_for(cfg, train_x, train_set.labels, test_x, test_set.labels);
    report.rows.push_back({"heuristic", heuristic_name(kind), "roc_auc", auc, cfg.seed, params});
  }
  return report;
}

namespace {

// pair index k in [0, n(n-1)/2) -> (u, v), u < v, row-major over u.
// offset(u) = number of pairs whose first node is below u.
std::pair<int, int> decode_pair(std::uint64_t k, int n) {
  auto offset = [n](std::uint64_t u) {
    return u * static_cast<std::uint64_t>(n - 1) - u * (u - 1) / 2;
  };
  std::uint64_t lo = 0, hi = static_cast<std::uint64_t>(n) - 1;
  while (lo < hi) {  // largest u with offset(u) <= k
    const std::uint64_t mid = (lo + hi + 1) / 2;
    if (offset(mid) <= k) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return {static_cast<int>(lo), static_cast<int>(lo + 1 + (k - offset(lo)))};
}

}  // namespace

EvalReport evaluate_network_reconstruction(const MultiplexGraph& g, double subset_fraction,
                                           const PipelineConfig& cfg) {
  if (!(subset_fraction > 0.0 && subset_fraction <= 1.0))
    throw std::invalid_argument("subset_fraction must be in (0,1]");
  const int n = g.node_count();
  if (n < 2) throw std::invalid_argument("reconstruction needs at least two nodes");
  EvalReport report;
  report.notes.push_back(
      "classifier: class-weighted logistic regression substitutes the usual random forest");

  TrainParams train_cfg = cfg.train;
  train_cfg.rng_seed = Rng::derive(cfg.seed, 1);
  SimilarityMatrix sim = similarity_matrix(g, cfg.rwr, train_cfg.workers);
  EmbeddingMatrix w = train(sim, train_cfg);

  const std::uint64_t universe = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t want = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::llround(subset_fraction * static_cast<double>(universe))));

  char params_buf[64];
  std::vector<double> operator_sums(all_operators().size(), 0.0);
  int evaluated_layers = 0;

  for (int alpha = 0; alpha < g.layer_count(); ++alpha) {
    Rng rng(Rng::derive(cfg.seed, 200 + static_cast<std::uint64_t>(alpha)));
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(want);
    if (want == universe) {
      for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
      }
    } else {
      std::unordered_set<std::uint64_t> chosen;
      while (chosen.size() < want) {
        const std::uint64_t k = rng.next_below(universe);
        if (chosen.insert(k).second) pairs.push_back(decode_pair(k, n));
      }
    }
    const Layer& layer = g.layers[static_cast<std::size_t>(alpha)];
    std::vector<int> labels;
    labels.reserve(pairs.size());
    std::size_t true_edges = 0;
    for (auto [u, v] : pairs) {
      const int y = layer.has_edge(u, v) ? 1 : 0;
      true_edges += static_cast<std::size_t>(y);
      labels.push_back(y);
    }
    if (true_edges == 0 || true_edges == pairs.size()) {
      report.notes.push_back("layer " + std::to_string(alpha + 1) +
                             " skipped: subset lacks a class");
      continue;
    }
    ++evaluated_layers;
    std::snprintf(params_buf, sizeof(params_buf), "layer=%d;subset=%g", alpha + 1, subset_fraction);
    std::size_t op_idx = 0;
    for (OperatorKind kind : all_operators()) {
      auto features = operator_features(w, kind, pairs, cfg.halved_average);
      auto clf = cfg.new_classifier(true);
      clf->fit(features, labels);
      std::vector<double> scores;
      scores.reserve(features.size());
      for (const auto& f : features) scores.push_back(clf->score(f));
      const double prec = precision_at_k(scores, labels, true_edges);
      report.rows.push_back(
          {"multiverse", operator_name(kind), "precision_at_k", prec, cfg.seed, params_buf});
      operator_sums[op_idx++] += prec;
    }
  }
  if (evaluated_layers > 0) {
    std::snprintf(params_buf, sizeof(params_buf), "layer=avg;subset=%g", subset_fraction);
    std::size_t op_idx = 0;
    for (OperatorKind kind : all_operators()) {
      report.rows.push_back({"multiverse", operator_name(kind), "precision_at_k",
                             operator_sums[op_idx++] / evaluated_layers, cfg.seed, params_buf});
    }
  }
  return report;
}

EvalReport evaluate_mh_link_prediction(const MultiHetGraph& g, const PipelineConfig& cfg) {
  cfg.split.validate();
  if (g.bipartite.count() == 0) throw std::invalid_argument("bipartite edge set is empty");
  EvalReport report;
  report.notes.push_back("classifier: logistic regression substitutes the usual random forest");

  // uniform bipartite holdout, multiplex layers untouched
  std::vector<std::pair<int, int>> all_bip = g.bipartite.pairs();
  Rng split_rng(Rng::derive(cfg.seed, 300));
  const std::size_t take = static_cast<std::size_t>(
      std::floor(cfg.split.test_fraction * static_cast<double>(all_bip.size())));
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + split_rng.next_below(all_bip.size() - i);
    std::swap(all_bip[i], all_bip[j]);
  }
  std::vector<std::pair<int, int>> test_pos(all_bip.begin(), all_bip.begin() + take);
  std::vector<std::pair<int, int>> train_pos(all_bip.begin() + take, all_bip.end());
  if (train_pos.empty() || test_pos.empty())
    throw std::runtime_error("bipartite holdout left an empty side");
  std::sort(test_pos.begin(), test_pos.end());
  std::sort(train_pos.begin(), train_pos.end());

  MultiHetGraph train_graph = build_multihet(g.mplex1, g.mplex2, train_pos);

  TrainParams train_cfg = cfg.train;
  train_cfg.rng_seed = Rng::derive(cfg.seed, 1);
  SimilarityMatrix sim = similarity_matrix(train_graph, cfg.rwr, train_cfg.workers);
  EmbeddingMatrix w = train(sim, train_cfg);

  const int n_left = g.mplex1.node_count();
  const int n_right = g.mplex2.node_count();
  Rng neg_rng(Rng::derive(cfg.seed, 2));
  auto train_neg =
      sample_non_edges_bipartite(g.bipartite, n_left, n_right, train_pos.size(), neg_rng);
  auto test_neg = sample_non_edges_bipartite(g.bipartite, n_left, n_right, test_pos.size(),
                                             neg_rng, train_neg);

  // features read multiplex-2 rows at offset n_left
  auto shifted = [&](std::span<const std::pair<int, int>> pairs) {
    std::vector<std::pair<int, int>> out;
    out.reserve(pairs.size());
    for (auto [l, r] : pairs) out.emplace_back(l, n_left + r);
    return out;
  };
  LabeledEdgeSet train_set, test_set;
  for (auto p : shifted(train_pos)) train_set.add(p, 1);
  for (auto p : shifted(train_neg)) train_set.add(p, 0);
  for (auto p : shifted(test_pos)) test_set.add(p, 1);
  for (auto p : shifted(test_neg)) test_set.add(p, 0);

  const std::string params = fraction_tag(cfg.split) + ";scope=bipartite";
  for (OperatorKind kind : all_operators()) {
    auto train_x = operator_features(w, kind, train_set.pairs, cfg.halved_average);
    auto test_x = operator_features(w, kind, test_set.pairs, cfg.halved_average);
    const double auc = auc_for(cfg, train_x, train_set.labels, test_x, test_set.labels);
    report.rows.push_back({"multiverse", operator_name(kind), "roc_auc", auc, cfg.seed, params});
  }
  return report;
}

}  // namespace multiverse
