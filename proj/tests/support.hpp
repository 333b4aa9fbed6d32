// Test-only oracles and graph generators, independent of the library's
// computation paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "multiverse/graph.hpp"
#include "multiverse/rng.hpp"
#include "multiverse/rwr.hpp"

namespace support {

inline std::vector<double> dense_from_transition(const multiverse::SupraTransition& t) {
  std::vector<double> dense(static_cast<std::size_t>(t.dim) * t.dim, 0.0);
  for (int j = 0; j < t.dim; ++j) {
    for (std::int64_t k = t.col_offsets[j]; k < t.col_offsets[j + 1]; ++k) {
      dense[static_cast<std::size_t>(t.rows[k]) * t.dim + j] = t.values[k];
    }
  }
  return dense;
}

// Gaussian elimination with partial pivoting for A x = b.
inline std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row) {
      if (std::abs(a[static_cast<std::size_t>(row) * n + col]) >
          std::abs(a[static_cast<std::size_t>(pivot) * n + col]))
        pivot = row;
    }
    if (std::abs(a[static_cast<std::size_t>(pivot) * n + col]) < 1e-300)
      throw std::runtime_error("singular system");
    if (pivot != col) {
      for (int j = 0; j < n; ++j)
        std::swap(a[static_cast<std::size_t>(col) * n + j],
                  a[static_cast<std::size_t>(pivot) * n + j]);
      std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(pivot)]);
    }
    const double diag = a[static_cast<std::size_t>(col) * n + col];
    for (int row = col + 1; row < n; ++row) {
      const double factor = a[static_cast<std::size_t>(row) * n + col] / diag;
      if (factor == 0.0) continue;
      for (int j = col; j < n; ++j)
        a[static_cast<std::size_t>(row) * n + j] -= factor * a[static_cast<std::size_t>(col) * n + j];
      b[static_cast<std::size_t>(row)] -= factor * b[static_cast<std::size_t>(col)];
    }
  }
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  for (int row = n - 1; row >= 0; --row) {
    double acc = b[static_cast<std::size_t>(row)];
    for (int j = row + 1; j < n; ++j) acc -= a[static_cast<std::size_t>(row) * n + j] * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(row)] = acc / a[static_cast<std::size_t>(row) * n + row];
  }
  return x;
}

// Steady state by solving (I - (1-r) T) p = r p0 directly.
inline std::vector<double> rwr_linear_solve(const multiverse::SupraTransition& t,
                                            std::span<const double> p0, double r) {
  const int n = t.dim;
  std::vector<double> a = dense_from_transition(t);
  for (auto& v : a) v *= -(1.0 - r);
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i) * n + i] += 1.0;
  std::vector<double> b(p0.begin(), p0.end());
  for (auto& v : b) v *= r;
  return solve_dense(std::move(a), std::move(b));
}

// Exhaustive pairwise-comparison ROC-AUC.
inline double auc_pairwise(std::span<const double> scores, std::span<const int> labels) {
  double wins = 0.0;
  std::size_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    ++pos;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  for (std::size_t j = 0; j < scores.size(); ++j) neg += static_cast<std::size_t>(!labels[j]);
  return wins / (static_cast<double>(pos) * static_cast<double>(neg));
}

// --- graph generators ------------------------------------------------------

inline std::vector<multiverse::Edge> clique_edges(int first, int count) {
  std::vector<multiverse::Edge> edges;
  for (int u = first; u < first + count; ++u) {
    for (int v = u + 1; v < first + count; ++v) edges.push_back({u, v, 1.0});
  }
  return edges;
}

inline std::vector<multiverse::Edge> erdos_renyi_edges(int n, double p, multiverse::Rng& rng) {
  std::vector<multiverse::Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.next_double() < p) edges.push_back({u, v, 1.0});
    }
  }
  return edges;
}

inline multiverse::NodeIndex numbered_nodes(int n) {
  multiverse::NodeIndex idx;
  for (int i = 0; i < n; ++i) idx.add("n" + std::to_string(i));
  return idx;
}

inline multiverse::MultiplexGraph make_multiplex(int n,
                                                 std::vector<std::vector<multiverse::Edge>> layers) {
  return multiverse::build_multiplex(numbered_nodes(n), layers);
}

// Random connected-ish multiplex: each layer is ER(p) plus a random spanning
// chain to keep things interesting (connectivity not guaranteed).
inline multiverse::MultiplexGraph random_multiplex(int n, int layer_count, double p,
                                                   multiverse::Rng& rng) {
  std::vector<std::vector<multiverse::Edge>> layers;
  for (int alpha = 0; alpha < layer_count; ++alpha) {
    layers.push_back(erdos_renyi_edges(n, p, rng));
  }
  // node n-1 might be missing everywhere; anchor one edge so the union covers all ids
  if (n >= 2) layers[0].push_back({0, n - 1, 1.0});
  return make_multiplex(n, std::move(layers));
}

}  // namespace support
