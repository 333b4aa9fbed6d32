#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "multiverse/graph.hpp"

namespace multiverse {

struct RwrParams {
  double r = 0.7;            // restart probability, in (0,1)
  double delta = 0.5;        // inter-layer jump probability
  std::vector<double> tau;   // restart layer weights; empty -> uniform 1/L
  double lambda = 0.5;       // inter-multiplex jump probability
  double eta = 0.5;          // restart split between multiplexes (multi-seed only)
  double tol = 1e-10;        // L1 convergence threshold
  int max_iter = 1000;

  void validate() const;
  // tau for a multiplex with `layers` layers; checks the sum when explicit.
  std::vector<double> tau_for(int layers) const;
};

// Column-stochastic walk operator over all (node, layer) instances.
// Supra index layout: multiplex 1 first, layer-major (alpha * n + i), then
// multiplex 2 offset by n * L1 when heterogeneous.
struct SupraTransition {
  int dim = 0;
  std::vector<std::int64_t> col_offsets;
  std::vector<int> rows;
  std::vector<double> values;
  int n = 0;        // multiplex 1 node count
  int layers1 = 0;  // multiplex 1 layer count
  int m = 0;        // multiplex 2 node count (0 for pure multiplex)
  int layers2 = 0;

  bool heterogeneous() const { return m > 0; }
  int collapsed_count() const { return n + m; }
  int supra_of_m1(int node, int layer) const { return layer * n + node; }
  int supra_of_m2(int node, int layer) const { return n * layers1 + layer * m + node; }

  // y = T * x
  void apply(std::span<const double> x, std::span<double> y) const;
};

// Intra-multiplex walk: with probability 1-delta move within the layer,
// with probability delta jump uniformly to a counterpart in another layer.
// Nodes isolated in one layer send their whole column mass to inter-layer
// jumps; nodes isolated in every layer get a self-loop column. delta acts
// as 0 when L = 1.
SupraTransition build_supra_transition_m(const MultiplexGraph& g, const RwrParams& p);

// Adds the bipartite coupling: from a node with bipartite neighbors, jump
// across with probability lambda (uniform over neighbors, then uniform over
// the destination multiplex's layers); otherwise behave intra-multiplex.
SupraTransition build_supra_transition_mh(const MultiHetGraph& g, const RwrParams& p);

struct RwrConvergenceError : std::runtime_error {
  double residual;
  RwrConvergenceError(const std::string& what, double res)
      : std::runtime_error(what), residual(res) {}
};

// Restart vector for a seed set of collapsed node ids. Mass tau_alpha goes
// to each seed's instance per layer; with seeds in both multiplexes eta
// goes to multiplex 1's seeds and 1-eta to multiplex 2's.
std::vector<double> restart_vector(const SupraTransition& t, std::span<const int> seeds,
                                   const RwrParams& p);

// Power iteration p <- (1-r) T p + r p0 until the L1 step norm drops below
// tol. Throws RwrConvergenceError at max_iter.
std::vector<double> rwr_power(const SupraTransition& t, std::span<const double> p0,
                              const RwrParams& p);

// Steady state for a single collapsed seed node.
std::vector<double> rwr(int seed, const SupraTransition& t, const RwrParams& p);

// Collapse a supra distribution by summing a node's instances across layers.
std::vector<double> aggregate_layers(std::span<const double> supra, int n, int layers);
std::vector<double> aggregate_layers(std::span<const double> supra, const SupraTransition& t);

// Row-stochastic node-to-node proximity; row v is the layer-aggregated RWR
// steady state seeded at v.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(
      static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0) {}

  int row_count() const { return rows_; }
  int col_count() const { return cols_; }
  std::span<const double> row(int v) const {
    return {data_.data() + static_cast<std::size_t>(v) * cols_, static_cast<std::size_t>(cols_)};
  }
  std::span<double> row(int v) {
    return {data_.data() + static_cast<std::size_t>(v) * cols_, static_cast<std::size_t>(cols_)};
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// One RWR run per seed; rows are independent and computed on `workers`
// threads, gathered by seed order.
SimilarityMatrix similarity_matrix(const MultiplexGraph& g, const RwrParams& p, int workers = 1);
SimilarityMatrix similarity_matrix(const MultiHetGraph& g, const RwrParams& p, int workers = 1);

// Sparse dump: one "node neighbor probability" triple per line, nonzero
// entries only, row by row.
void save_similarity(std::ostream& out, const SimilarityMatrix& sim,
                     std::span<const std::string> labels);

}  // namespace multiverse
