#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "multiverse/edge_features.hpp"
#include "multiverse/embedding.hpp"
#include "multiverse/graph.hpp"
#include "multiverse/rng.hpp"
#include "multiverse/rwr.hpp"

namespace multiverse {

struct SplitConfig {
  double test_fraction = 0.3;
  std::uint64_t rng_seed = 0;
  enum class Scope { per_layer, bipartite_only };
  Scope scope = Scope::per_layer;

  void validate() const;
};

struct EdgeSplit {
  std::vector<Edge> train;
  std::vector<Edge> test;
  std::size_t requested_test_count = 0;  // before the spanning-forest cap
  bool capped() const { return test.size() < requested_test_count; }
};

// Broder random-walk spanning forest per component protects connectivity;
// the test set is floor(test_fraction |E|) edges sampled uniformly from the
// unprotected remainder (capped by the forest size, reported via the
// requested count).
EdgeSplit connected_split(const Layer& layer, const SplitConfig& cfg);

// Uniform rejection sampling of node pairs absent from every layer,
// excluding `exclude` and previous draws. Throws once attempts exceed
// 1000 * count.
std::vector<std::pair<int, int>> sample_non_edges(const MultiplexGraph& g, std::size_t count,
                                                  Rng& rng,
                                                  std::span<const std::pair<int, int>> exclude = {});

// Bipartite scope: (left, right) pairs absent from the bipartite edge set.
std::vector<std::pair<int, int>> sample_non_edges_bipartite(
    const BipartiteEdges& bip, int n_left, int n_right, std::size_t count, Rng& rng,
    std::span<const std::pair<int, int>> exclude = {});

struct LabeledEdgeSet {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> labels;

  void add(std::pair<int, int> pair, int label) {
    pairs.push_back(pair);
    labels.push_back(label);
  }
  std::size_t size() const { return pairs.size(); }
};

class BinaryClassifier {
 public:
  virtual ~BinaryClassifier() = default;
  virtual void fit(const std::vector<std::vector<double>>& features,
                   std::span<const int> labels) = 0;
  virtual double score(std::span<const double> features) const = 0;  // in [0, 1]
};

struct LogisticParams {
  int epochs = 300;
  double lr = 0.1;
  double l2 = 1e-4;
  bool class_weights = false;
};

// Full-batch gradient descent on standardized features with L2 penalty and
// optional inverse-frequency class weights.
class LogisticClassifier : public BinaryClassifier {
 public:
  explicit LogisticClassifier(LogisticParams params = {}) : params_(params) {}
  void fit(const std::vector<std::vector<double>>& features,
           std::span<const int> labels) override;
  double score(std::span<const double> features) const override;

 private:
  LogisticParams params_;
  std::vector<double> weights_;
  std::vector<double> mean_;
  std::vector<double> scale_;
  double intercept_ = 0.0;
};

using ClassifierFactory = std::function<std::unique_ptr<BinaryClassifier>()>;

// Fit a fresh logistic model on labeled feature vectors.
LogisticClassifier train_logistic(const std::vector<std::vector<double>>& features,
                                  std::span<const int> labels, const LogisticParams& params = {});

// Rank-based (Mann-Whitney) ROC-AUC with average ranks for ties. Throws
// unless both classes are present.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

// Fraction of true labels among the K highest scores; ties keep input order.
double precision_at_k(std::span<const double> scores, std::span<const int> labels, std::size_t k);

struct EvalReportRow {
  std::string method;
  std::string feature;   // operator or heuristic name; may carry a layer tag
  std::string metric;
  double value = 0.0;
  std::uint64_t seed = 0;
  std::string params;
};

struct EvalReport {
  std::vector<EvalReportRow> rows;
  std::vector<std::string> notes;

  void write_tsv(std::ostream& out) const;
};

struct PipelineConfig {
  RwrParams rwr;
  TrainParams train;
  SplitConfig split;
  LogisticParams classifier;
  std::uint64_t seed = 0;          // derives all stage seeds
  bool halved_average = false;
  ClassifierFactory make_classifier;  // empty -> LogisticClassifier

  std::unique_ptr<BinaryClassifier> new_classifier(bool class_weighted) const;
};

// Removes 30% of the links in each layer with a connected split, embeds the
// train multiplex, and reports ROC-AUC per embedding operator and per
// layer-averaged heuristic (union-level positives, non-edges absent from
// every layer).
EvalReport evaluate_link_prediction(const MultiplexGraph& g, const PipelineConfig& cfg);

// Embeds the full multiplex, samples subset_fraction of each layer's pair
// universe, fits the classifier on those pairs and reports the training
// precision@K (K = true edges in the subset) per operator per layer plus
// the layer average.
EvalReport evaluate_network_reconstruction(const MultiplexGraph& g, double subset_fraction,
                                           const PipelineConfig& cfg);

// Removes test_fraction of the bipartite edges only, embeds the train
// multiplex-heterogeneous graph, and reports bipartite ROC-AUC per operator.
EvalReport evaluate_mh_link_prediction(const MultiHetGraph& g, const PipelineConfig& cfg);

}  // namespace multiverse
