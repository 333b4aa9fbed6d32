#include "multiverse/rwr.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

namespace multiverse {

void RwrParams::validate() const {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("restart probability r must be in (0,1)");
  if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("delta must be in [0,1]");
  if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must be in [0,1]");
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta must be in [0,1]");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");
}

std::vector<double> RwrParams::tau_for(int layers) const {
  if (tau.empty())
    return std::vector<double>(static_cast<std::size_t>(layers), 1.0 / layers);
  if (static_cast<int>(tau.size()) != layers)
    throw std::invalid_argument("tau length does not match layer count");
  double sum = 0.0;
  for (double t : tau) {
    if (t < 0.0) throw std::invalid_argument("tau entries must be non-negative");
    sum += t;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("tau must sum to 1");
  return tau;
}

void SupraTransition::apply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (int j = 0; j < dim; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    for (std::int64_t k = col_offsets[j]; k < col_offsets[j + 1]; ++k) {
      y[rows[k]] += values[k] * xj;
    }
  }
}

namespace {

struct ColumnBuilder {
  std::vector<std::pair<int, double>> entries;
  void add(int row, double value) {
    if (value != 0.0) entries.emplace_back(row, value);
  }
};

// Intra-multiplex transition entries for one multiplex, with supra indices
// shifted by `offset` and node offsets within layers of size n.
void emit_multiplex_columns(const MultiplexGraph& g, const RwrParams& p, int offset,
                            double column_scale, const std::vector<ColumnNormalized>& normalized,
                            const std::vector<bool>& isolated_everywhere,
                            int layer, int node, ColumnBuilder& col) {
  const int n = g.node_count();
  const int L = g.layer_count();
  const double delta = (L == 1) ? 0.0 : p.delta;
  const ColumnNormalized& M = normalized[static_cast<std::size_t>(layer)];
  const bool zero_degree =
      M.col_offsets[node + 1] == M.col_offsets[node];

  if (isolated_everywhere[static_cast<std::size_t>(node)]) {
    // restart dominates; keep the operator stochastic with a self loop
    col.add(offset + layer * n + node, column_scale);
    return;
  }
  if (zero_degree) {
    // whole column mass goes to inter-layer jumps
    const double jump = column_scale / (L - 1);
    for (int beta = 0; beta < L; ++beta) {
      if (beta == layer) continue;
      col.add(offset + beta * n + node, jump);
    }
    return;
  }
  const double within = column_scale * (1.0 - delta);
  for (int k = M.col_offsets[node]; k < M.col_offsets[node + 1]; ++k) {
    col.add(offset + layer * n + M.rows[k], within * M.values[k]);
  }
  if (delta > 0.0) {
    const double jump = column_scale * delta / (L - 1);
    for (int beta = 0; beta < L; ++beta) {
      if (beta == layer) continue;
      col.add(offset + beta * n + node, jump);
    }
  }
}

std::vector<bool> find_isolated_everywhere(const MultiplexGraph& g) {
  std::vector<bool> isolated(static_cast<std::size_t>(g.node_count()), true);
  for (const Layer& layer : g.layers) {
    for (int i = 0; i < g.node_count(); ++i) {
      if (layer.degree(i) > 0) isolated[static_cast<std::size_t>(i)] = false;
    }
  }
  return isolated;
}

std::vector<ColumnNormalized> normalize_layers(const MultiplexGraph& g) {
  std::vector<ColumnNormalized> out;
  out.reserve(g.layers.size());
  for (const Layer& layer : g.layers) out.push_back(column_normalize(layer));
  return out;
}

SupraTransition assemble(int dim, std::vector<ColumnBuilder>& columns) {
  SupraTransition t;
  t.dim = dim;
  t.col_offsets.assign(static_cast<std::size_t>(dim) + 1, 0);
  std::size_t nnz = 0;
  for (const auto& c : columns) nnz += c.entries.size();
  t.rows.reserve(nnz);
  t.values.reserve(nnz);
  for (int j = 0; j < dim; ++j) {
    auto& entries = columns[static_cast<std::size_t>(j)].entries;
    std::sort(entries.begin(), entries.end());
    for (const auto& [row, value] : entries) {
      t.rows.push_back(row);
      t.values.push_back(value);
    }
    t.col_offsets[static_cast<std::size_t>(j) + 1] = static_cast<std::int64_t>(t.rows.size());
  }
  return t;
}

}  // namespace

SupraTransition build_supra_transition_m(const MultiplexGraph& g, const RwrParams& p) {
  p.validate();
  const int n = g.node_count();
  const int L = g.layer_count();
  const int dim = n * L;
  auto normalized = normalize_layers(g);
  auto isolated = find_isolated_everywhere(g);

  std::vector<ColumnBuilder> columns(static_cast<std::size_t>(dim));
  for (int alpha = 0; alpha < L; ++alpha) {
    for (int i = 0; i < n; ++i) {
      emit_multiplex_columns(g, p, 0, 1.0, normalized, isolated, alpha, i,
                             columns[static_cast<std::size_t>(alpha * n + i)]);
    }
  }
  SupraTransition t = assemble(dim, columns);
  t.n = n;
  t.layers1 = L;
  return t;
}

SupraTransition build_supra_transition_mh(const MultiHetGraph& g, const RwrParams& p) {
  p.validate();
  const int n = g.mplex1.node_count();
  const int L1 = g.mplex1.layer_count();
  const int m = g.mplex2.node_count();
  const int L2 = g.mplex2.layer_count();
  const int offset2 = n * L1;
  const int dim = n * L1 + m * L2;

  auto norm1 = normalize_layers(g.mplex1);
  auto norm2 = normalize_layers(g.mplex2);
  auto iso1 = find_isolated_everywhere(g.mplex1);
  auto iso2 = find_isolated_everywhere(g.mplex2);

  std::vector<ColumnBuilder> columns(static_cast<std::size_t>(dim));
  for (int alpha = 0; alpha < L1; ++alpha) {
    for (int i = 0; i < n; ++i) {
      ColumnBuilder& col = columns[static_cast<std::size_t>(alpha * n + i)];
      auto bridge = g.bipartite.right_neighbors(i);
      const double lambda = bridge.empty() ? 0.0 : p.lambda;
      if (lambda > 0.0) {
        const double jump = lambda / (static_cast<double>(bridge.size()) * L2);
        for (int j : bridge) {
          for (int beta = 0; beta < L2; ++beta) col.add(offset2 + beta * m + j, jump);
        }
      }
      if (lambda < 1.0) {
        emit_multiplex_columns(g.mplex1, p, 0, 1.0 - lambda, norm1, iso1, alpha, i, col);
      }
    }
  }
  for (int beta = 0; beta < L2; ++beta) {
    for (int j = 0; j < m; ++j) {
      ColumnBuilder& col = columns[static_cast<std::size_t>(offset2 + beta * m + j)];
      auto bridge = g.bipartite.left_neighbors(j);
      const double lambda = bridge.empty() ? 0.0 : p.lambda;
      if (lambda > 0.0) {
        const double jump = lambda / (static_cast<double>(bridge.size()) * L1);
        for (int i : bridge) {
          for (int alpha = 0; alpha < L1; ++alpha) col.add(alpha * n + i, jump);
        }
      }
      if (lambda < 1.0) {
        emit_multiplex_columns(g.mplex2, p, offset2, 1.0 - lambda, norm2, iso2, beta, j, col);
      }
    }
  }
  SupraTransition t = assemble(dim, columns);
  t.n = n;
  t.layers1 = L1;
  t.m = m;
  t.layers2 = L2;
  return t;
}

std::vector<double> restart_vector(const SupraTransition& t, std::span<const int> seeds,
                                   const RwrParams& p) {
  if (seeds.empty()) throw std::invalid_argument("seed set is empty");
  std::vector<double> p0(static_cast<std::size_t>(t.dim), 0.0);
  std::vector<int> in_m1, in_m2;
  for (int s : seeds) {
    if (s < 0 || s >= t.collapsed_count()) throw std::out_of_range("seed id out of range");
    (s < t.n ? in_m1 : in_m2).push_back(s);
  }
  const bool mixed = !in_m1.empty() && !in_m2.empty();
  const double mass1 = mixed ? p.eta : (in_m1.empty() ? 0.0 : 1.0);
  const double mass2 = mixed ? 1.0 - p.eta : (in_m2.empty() ? 0.0 : 1.0);
  if (!in_m1.empty() && mass1 > 0.0) {
    auto tau = p.tau_for(t.layers1);
    const double per_seed = mass1 / static_cast<double>(in_m1.size());
    for (int s : in_m1) {
      for (int alpha = 0; alpha < t.layers1; ++alpha)
        p0[t.supra_of_m1(s, alpha)] += per_seed * tau[static_cast<std::size_t>(alpha)];
    }
  }
  if (!in_m2.empty() && mass2 > 0.0) {
    auto tau = p.tau_for(t.layers2);
    const double per_seed = mass2 / static_cast<double>(in_m2.size());
    for (int s : in_m2) {
      for (int beta = 0; beta < t.layers2; ++beta)
        p0[t.supra_of_m2(s - t.n, beta)] += per_seed * tau[static_cast<std::size_t>(beta)];
    }
  }
  return p0;
}

std::vector<double> rwr_power(const SupraTransition& t, std::span<const double> p0,
                              const RwrParams& p) {
  p.validate();
  std::vector<double> cur(p0.begin(), p0.end());
  std::vector<double> next(static_cast<std::size_t>(t.dim), 0.0);
  for (int iter = 0; iter < p.max_iter; ++iter) {
    t.apply(cur, next);
    double diff = 0.0;
    for (int i = 0; i < t.dim; ++i) {
      next[i] = (1.0 - p.r) * next[i] + p.r * p0[i];
      diff += std::abs(next[i] - cur[i]);
    }
    cur.swap(next);
    if (diff < p.tol) return cur;
  }
  double residual = 0.0;
  t.apply(cur, next);
  for (int i = 0; i < t.dim; ++i)
    residual += std::abs((1.0 - p.r) * next[i] + p.r * p0[i] - cur[i]);
  throw RwrConvergenceError("rwr did not converge within " + std::to_string(p.max_iter) +
                                " iterations (residual " + std::to_string(residual) + ")",
                            residual);
}

std::vector<double> rwr(int seed, const SupraTransition& t, const RwrParams& p) {
  const int seeds[1] = {seed};
  return rwr_power(t, restart_vector(t, seeds, p), p);
}

std::vector<double> aggregate_layers(std::span<const double> supra, int n, int layers) {
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int alpha = 0; alpha < layers; ++alpha) {
    for (int i = 0; i < n; ++i) out[i] += supra[static_cast<std::size_t>(alpha) * n + i];
  }
  return out;
}

std::vector<double> aggregate_layers(std::span<const double> supra, const SupraTransition& t) {
  auto first = aggregate_layers(supra.subspan(0, static_cast<std::size_t>(t.n) * t.layers1),
                                t.n, t.layers1);
  if (!t.heterogeneous()) return first;
  auto second = aggregate_layers(supra.subspan(static_cast<std::size_t>(t.n) * t.layers1),
                                 t.m, t.layers2);
  first.insert(first.end(), second.begin(), second.end());
  return first;
}

namespace {

SimilarityMatrix similarity_from_transition(const SupraTransition& t, const RwrParams& p,
                                            int workers) {
  const int count = t.collapsed_count();
  SimilarityMatrix sim(count, count);
  workers = std::max(1, workers);
  std::atomic<int> next_seed{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto work = [&]() {
    for (;;) {
      const int seed = next_seed.fetch_add(1);
      if (seed >= count) return;
      try {
        auto steady = rwr(seed, t, p);
        auto collapsed = aggregate_layers(steady, t);
        std::copy(collapsed.begin(), collapsed.end(), sim.row(seed).begin());
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) {
          error = std::make_exception_ptr(
              std::runtime_error("rwr failed for seed " + std::to_string(seed) + ": " + e.what()));
        }
        return;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return sim;
}

}  // namespace

SimilarityMatrix similarity_matrix(const MultiplexGraph& g, const RwrParams& p, int workers) {
  return similarity_from_transition(build_supra_transition_m(g, p), p, workers);
}

SimilarityMatrix similarity_matrix(const MultiHetGraph& g, const RwrParams& p, int workers) {
  return similarity_from_transition(build_supra_transition_mh(g, p), p, workers);
}

void save_similarity(std::ostream& out, const SimilarityMatrix& sim,
                     std::span<const std::string> labels) {
  char buf[64];
  for (int v = 0; v < sim.row_count(); ++v) {
    auto row = sim.row(v);
    for (int u = 0; u < sim.col_count(); ++u) {
      if (row[u] == 0.0) continue;
      std::snprintf(buf, sizeof(buf), "%.12g", row[u]);
      out << labels[v] << '\t' << labels[u] << '\t' << buf << '\n';
    }
  }
}

}  // namespace multiverse
