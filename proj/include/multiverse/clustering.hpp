#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "multiverse/embedding.hpp"

namespace multiverse {

struct ClusteringParams {
  int k = 500;
  int max_iter = 100;
  std::uint64_t rng_seed = 0;
  int restarts = 5;
};

struct ClusterAssignment {
  int k = 0;
  int dim = 0;
  std::vector<int> labels;        // length n, values in [0, k)
  std::vector<double> centroids;  // k x dim, unit rows
  double objective = 0.0;         // total cosine to assigned centroids

  std::span<const double> centroid(int c) const {
    return {centroids.data() + static_cast<std::size_t>(c) * dim, static_cast<std::size_t>(dim)};
  }
};

// Spherical k-means on the unit-normalized embedding rows: greedy cosine
// assignment, normalized-mean centroid updates, kmeans++-style seeding,
// empty clusters reseeded from the worst-fitting point. Best of `restarts`
// runs by objective. Throws on zero rows or k > n.
ClusterAssignment spherical_kmeans(const EmbeddingMatrix& w, const ClusteringParams& p,
                                   std::vector<double>* objective_trace = nullptr);

// Co-clustered labels for a queried node, grouped by node type tag.
std::string cluster_report(const ClusterAssignment& assignment,
                           std::span<const std::string> labels,
                           std::span<const std::string> type_tags, const std::string& query);

// "label cluster_id" lines.
void save_assignment(std::ostream& out, const ClusterAssignment& assignment,
                     std::span<const std::string> labels);

}  // namespace multiverse
