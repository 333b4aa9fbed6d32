#include "multiverse/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "multiverse/rng.hpp"

namespace multiverse {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct RunResult {
  std::vector<int> labels;
  std::vector<double> centroids;
  double objective = -1e300;
};

RunResult run_once(const std::vector<double>& points, int n, int d, const ClusteringParams& p,
                   Rng& rng, std::vector<double>* trace) {
  const int k = p.k;
  auto point = [&](int i) {
    return std::span<const double>(points.data() + static_cast<std::size_t>(i) * d,
                                   static_cast<std::size_t>(d));
  };

  // kmeans++-style seeding on cosine distance
  std::vector<double> centroids(static_cast<std::size_t>(k) * d);
  auto centroid = [&](int c) {
    return std::span<double>(centroids.data() + static_cast<std::size_t>(c) * d,
                             static_cast<std::size_t>(d));
  };
  std::vector<double> best_cos(static_cast<std::size_t>(n), -1.0);
  {
    const int first = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    std::copy(point(first).begin(), point(first).end(), centroid(0).begin());
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        best_cos[static_cast<std::size_t>(i)] =
            std::max(best_cos[static_cast<std::size_t>(i)], dot(point(i), centroid(c - 1)));
        const double dist = 1.0 - best_cos[static_cast<std::size_t>(i)];
        total += dist * dist;
      }
      int pick = -1;
      if (total > 0.0) {
        const double x = rng.next_double() * total;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
          const double dist = 1.0 - best_cos[static_cast<std::size_t>(i)];
          acc += dist * dist;
          if (acc >= x) {
            pick = i;
            break;
          }
        }
      }
      if (pick < 0) pick = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      std::copy(point(pick).begin(), point(pick).end(), centroid(c).begin());
    }
  }

  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  std::vector<double> cos_to_own(static_cast<std::size_t>(n), 0.0);
  double objective = 0.0;
  for (int iter = 0; iter < p.max_iter; ++iter) {
    // assignment to max cosine
    bool changed = false;
    objective = 0.0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_sim = -2.0;
      for (int c = 0; c < k; ++c) {
        const double sim = dot(point(i), centroid(c));
        if (sim > best_sim) {
          best_sim = sim;
          best = c;
        }
      }
      if (labels[static_cast<std::size_t>(i)] != best) {
        labels[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
      cos_to_own[static_cast<std::size_t>(i)] = best_sim;
      objective += best_sim;
    }
    if (trace) trace->push_back(objective);
    if (!changed && iter > 0) break;

    // centroid update: normalized means
    std::vector<double> sums(static_cast<std::size_t>(k) * d, 0.0);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) {
      const int c = labels[static_cast<std::size_t>(i)];
      ++counts[static_cast<std::size_t>(c)];
      auto pi = point(i);
      for (int j = 0; j < d; ++j) sums[static_cast<std::size_t>(c) * d + j] += pi[j];
    }
    std::vector<bool> reseeded(static_cast<std::size_t>(n), false);
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) {
        // reseed from the point with the worst fit to its own centroid
        int worst = -1;
        double worst_cos = 2.0;
        for (int i = 0; i < n; ++i) {
          if (reseeded[static_cast<std::size_t>(i)]) continue;
          if (cos_to_own[static_cast<std::size_t>(i)] < worst_cos) {
            worst_cos = cos_to_own[static_cast<std::size_t>(i)];
            worst = i;
          }
        }
        reseeded[static_cast<std::size_t>(worst)] = true;
        std::copy(point(worst).begin(), point(worst).end(), centroid(c).begin());
        continue;
      }
      double norm = 0.0;
      for (int j = 0; j < d; ++j) {
        const double x = sums[static_cast<std::size_t>(c) * d + j];
        norm += x * x;
      }
      norm = std::sqrt(norm);
      if (norm < 1e-12) continue;  // antipodal cancellation: keep previous centroid
      for (int j = 0; j < d; ++j)
        centroid(c)[j] = sums[static_cast<std::size_t>(c) * d + j] / norm;
    }
  }

  // objective of the returned (labels, centroids) pair; when the loop ended
  // via max_iter the centroids moved after the last assignment
  objective = 0.0;
  for (int i = 0; i < n; ++i)
    objective += dot(point(i), centroid(labels[static_cast<std::size_t>(i)]));

  return {std::move(labels), std::move(centroids), objective};
}

}  // namespace

ClusterAssignment spherical_kmeans(const EmbeddingMatrix& w, const ClusteringParams& p,
                                   std::vector<double>* objective_trace) {
  const int n = w.node_count();
  const int d = w.dim();
  if (p.k < 1 || p.k > n) throw std::invalid_argument("k must be in [1, n]");
  if (p.max_iter < 1) throw std::invalid_argument("max_iter must be positive");
  if (p.restarts < 1) throw std::invalid_argument("restarts must be positive");

  // project rows onto the unit sphere
  std::vector<double> points(static_cast<std::size_t>(n) * d);
  for (int i = 0; i < n; ++i) {
    auto row = w.row(i);
    double norm = std::sqrt(dot(row, row));
    if (!(norm > 0.0)) throw std::invalid_argument("zero embedding row cannot be normalized");
    for (int j = 0; j < d; ++j) points[static_cast<std::size_t>(i) * d + j] = row[j] / norm;
  }

  RunResult best;
  for (int run = 0; run < p.restarts; ++run) {
    Rng rng(Rng::derive(p.rng_seed, static_cast<std::uint64_t>(run)));
    std::vector<double> trace;
    RunResult result = run_once(points, n, d, p, rng, objective_trace ? &trace : nullptr);
    if (result.objective > best.objective) {
      best = std::move(result);
      if (objective_trace) *objective_trace = std::move(trace);
    }
  }

  ClusterAssignment out;
  out.k = p.k;
  out.dim = d;
  out.labels = std::move(best.labels);
  out.centroids = std::move(best.centroids);
  out.objective = best.objective;
  return out;
}

std::string cluster_report(const ClusterAssignment& assignment,
                           std::span<const std::string> labels,
                           std::span<const std::string> type_tags, const std::string& query) {
  if (labels.size() != assignment.labels.size())
    throw std::invalid_argument("label count does not match assignment");
  if (!type_tags.empty() && type_tags.size() != labels.size())
    throw std::invalid_argument("type tag count does not match assignment");
  int query_id = -1;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == query) {
      query_id = static_cast<int>(i);
      break;
    }
  }
  if (query_id < 0) throw std::invalid_argument("unknown node label '" + query + "'");
  const int cluster = assignment.labels[static_cast<std::size_t>(query_id)];

  std::map<std::string, std::vector<std::string>> groups;
  std::size_t size = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (assignment.labels[i] != cluster) continue;
    ++size;
    const std::string tag = type_tags.empty() ? "node" : type_tags[i];
    groups[tag].push_back(labels[i]);
  }
  std::ostringstream out;
  out << "cluster " << cluster << " (size " << size << ") containing '" << query << "'\n";
  for (auto& [tag, names] : groups) {
    std::sort(names.begin(), names.end());
    out << "  " << tag << ":";
    for (const auto& name : names) out << ' ' << name;
    out << '\n';
  }
  return out.str();
}

void save_assignment(std::ostream& out, const ClusterAssignment& assignment,
                     std::span<const std::string> labels) {
  if (labels.size() != assignment.labels.size())
    throw std::invalid_argument("label count does not match assignment");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << labels[i] << '\t' << assignment.labels[i] << '\n';
  }
}

}  // namespace multiverse
