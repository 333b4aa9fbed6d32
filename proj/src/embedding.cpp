#include "multiverse/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace multiverse {

namespace {

constexpr double kNormLimit = 1e3;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// -log sigmoid(x), stable for large |x|
double log_sigmoid_loss(double x) {
  if (x > 0.0) return std::log1p(std::exp(-x));
  return -x + std::log1p(std::exp(x));
}

}  // namespace

void TrainParams::validate(int n) const {
  if (d < 1) throw std::invalid_argument("embedding dimension must be >= 1");
  if (n_max < 0 || n_max > n) throw std::invalid_argument("n_max must be in [1, n]");
  if (s < 1) throw std::invalid_argument("s must be >= 1");
  if (!(lr > 0.0)) throw std::invalid_argument("lr must be positive");
  if (total_steps < -1) throw std::invalid_argument("total_steps must be >= 0");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

int TrainParams::resolved_n_max(int n) const {
  if (n_max > 0) return n_max;
  if (n > 5000) return 300;
  return std::max(1, static_cast<int>(std::ceil(0.15 * n)));
}

long long TrainParams::resolved_total_steps(int n) const {
  return total_steps >= 0 ? total_steps : 5000LL * n;
}

double TrainParams::resolved_bias_n(int n) const { return bias_n > 0 ? bias_n : n; }

bool EmbeddingMatrix::all_finite() const {
  for (double x : w_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

EmbeddingMatrix init_embeddings(int n, int d, std::uint64_t rng_seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("init_embeddings needs n, d >= 1");
  EmbeddingMatrix w(n, d);
  Rng rng(rng_seed);
  for (int u = 0; u < n; ++u) {
    for (double& x : w.row(u)) x = rng.next_gaussian();
  }
  return w;
}

TruncatedRow truncate_normalize(std::span<const double> row, int n_max, int self_id) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  std::vector<int> candidates;
  candidates.reserve(row.size());
  for (int i = 0; i < static_cast<int>(row.size()); ++i) {
    if (i != self_id && row[i] > 0.0) candidates.push_back(i);
  }
  if (candidates.empty()) throw std::invalid_argument("similarity row has no usable mass");
  auto better = [&](int a, int b) {
    if (row[a] != row[b]) return row[a] > row[b];
    return a < b;  // tie-break by smaller node id
  };
  const std::size_t keep = std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(n_max));
  std::nth_element(candidates.begin(), candidates.begin() + (keep - 1), candidates.end(), better);
  candidates.resize(keep);
  std::sort(candidates.begin(), candidates.end());

  TruncatedRow out;
  out.indices = std::move(candidates);
  out.probs.reserve(keep);
  double sum = 0.0;
  for (int i : out.indices) sum += row[i];
  for (int i : out.indices) out.probs.push_back(row[i] / sum);
  out.cum.reserve(keep);
  double acc = 0.0;
  for (double p : out.probs) {
    acc += p;
    out.cum.push_back(acc);
  }
  out.cum.back() = 1.0;
  return out;
}

double nce_update(EmbeddingMatrix& w, int u, int v, int label, double bias, double lr) {
  if (u == v) return 0.0;
  auto wu = w.row(u);
  auto wv = w.row(v);
  const double x = dot(wu, wv);
  if (!std::isfinite(x)) throw std::runtime_error("nce_update: non-finite embeddings");
  const double g = (label - sigmoid(x - bias)) * lr;
  for (std::size_t i = 0; i < wu.size(); ++i) {
    const double ui = wu[i];
    wu[i] += g * wv[i];
    wv[i] += g * ui;
  }
  return g;
}

int sample_positive(const TruncatedRow& row, Rng& rng) {
  const double x = rng.next_double();
  auto it = std::upper_bound(row.cum.begin(), row.cum.end(), x);
  if (it == row.cum.end()) --it;
  return row.indices[static_cast<std::size_t>(it - row.cum.begin())];
}

int sample_negative(int u, int n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("sample_negative needs n >= 2");
  const int k = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - 1)));
  return k >= u ? k + 1 : k;
}

namespace {

std::vector<TruncatedRow> truncate_all(const SimilarityMatrix& sim, int n_max, int workers) {
  const int n = sim.row_count();
  std::vector<TruncatedRow> rows(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  auto work = [&]() {
    for (;;) {
      const int v = next.fetch_add(1);
      if (v >= n || failed.load()) return;
      try {
        rows[static_cast<std::size_t>(v)] = truncate_normalize(sim.row(v), n_max, v);
      } catch (...) {
        failed.store(true);
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error("similarity row with no off-diagonal mass");
  return rows;
}

struct DivergenceReport {
  std::atomic<bool> diverged{false};
  int node = -1;
  double norm_value = 0.0;
};

void train_lane(EmbeddingMatrix& w, const std::vector<TruncatedRow>& rows, const TrainParams& p,
                long long steps, std::uint64_t lane_seed, double bias_pos, double bias_neg,
                DivergenceReport& report, std::vector<double>* losses) {
  const int n = w.node_count();
  Rng rng(lane_seed);
  std::vector<int> partners(static_cast<std::size_t>(p.s) + 1);
  for (long long step = 0; step < steps; ++step) {
    if (report.diverged.load(std::memory_order_relaxed)) return;
    const int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    partners[0] = sample_positive(rows[static_cast<std::size_t>(u)], rng);
    for (int k = 0; k < p.s; ++k) partners[static_cast<std::size_t>(k) + 1] = sample_negative(u, n, rng);

    if (losses) {
      double event = log_sigmoid_loss(dot(w.row(u), w.row(partners[0])) - bias_pos);
      for (int k = 1; k <= p.s; ++k)
        event += log_sigmoid_loss(-(dot(w.row(u), w.row(partners[k])) - bias_neg));
      losses->push_back(event / (1.0 + p.s));
    }

    nce_update(w, u, partners[0], 1, bias_pos, p.lr);
    for (int k = 1; k <= p.s; ++k) nce_update(w, u, partners[static_cast<std::size_t>(k)], 0, bias_neg, p.lr);

    const double nu = norm(w.row(u));
    if (nu > kNormLimit) {
      bool expected = false;
      if (report.diverged.compare_exchange_strong(expected, true)) {
        report.node = u;
        report.norm_value = nu;
      }
      return;
    }
  }
}

}  // namespace

EmbeddingMatrix train(const SimilarityMatrix& sim, const TrainParams& p, TrainStats* stats) {
  const int n = sim.row_count();
  if (n < 2) throw std::invalid_argument("train needs at least two nodes");
  p.validate(n);
  const int n_max = p.resolved_n_max(n);
  const long long total = p.resolved_total_steps(n);
  const double big_n = p.resolved_bias_n(n);
  const double bias_pos = std::log(big_n);
  const double bias_neg = std::log(big_n / p.s);

  auto rows = truncate_all(sim, n_max, p.workers);
  EmbeddingMatrix w = init_embeddings(n, p.d, p.rng_seed);
  if (total == 0) return w;

  DivergenceReport report;
  const int lanes = static_cast<int>(std::min<long long>(p.workers, std::max<long long>(total, 1)));
  std::vector<std::vector<double>> lane_losses(stats ? static_cast<std::size_t>(lanes) : 0);

  if (lanes == 1) {
    train_lane(w, rows, p, total, Rng::derive(p.rng_seed, 1), bias_pos, bias_neg, report,
               stats ? &lane_losses[0] : nullptr);
  } else {
    std::vector<std::thread> pool;
    for (int lane = 0; lane < lanes; ++lane) {
      const long long share = total / lanes + (lane < total % lanes ? 1 : 0);
      pool.emplace_back(train_lane, std::ref(w), std::cref(rows), std::cref(p), share,
                        Rng::derive(p.rng_seed, static_cast<std::uint64_t>(lane) + 1), bias_pos,
                        bias_neg, std::ref(report),
                        stats ? &lane_losses[static_cast<std::size_t>(lane)] : nullptr);
    }
    for (auto& th : pool) th.join();
  }

  if (report.diverged.load()) {
    throw std::runtime_error("training diverged: |w_" + std::to_string(report.node) +
                             "| = " + std::to_string(report.norm_value) + " exceeds 1e3");
  }
  if (!w.all_finite()) throw std::runtime_error("training produced non-finite embeddings");
  if (stats) {
    stats->event_losses.clear();
    for (auto& lane : lane_losses) {
      stats->event_losses.insert(stats->event_losses.end(), lane.begin(), lane.end());
    }
  }
  return w;
}

double nce_loss_estimate(const EmbeddingMatrix& w, std::span<const TruncatedRow> rows, int s,
                         double bias_pos, double bias_neg, int sample_size, Rng& rng) {
  if (sample_size < 1) throw std::invalid_argument("sample_size must be >= 1");
  const int n = w.node_count();
  double total = 0.0;
  long long terms = 0;
  for (int k = 0; k < sample_size; ++k) {
    const int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    const int v = sample_positive(rows[static_cast<std::size_t>(u)], rng);
    total += log_sigmoid_loss(dot(w.row(u), w.row(v)) - bias_pos);
    ++terms;
    for (int j = 0; j < s; ++j) {
      const int neg = sample_negative(u, n, rng);
      total += log_sigmoid_loss(-(dot(w.row(u), w.row(neg)) - bias_neg));
      ++terms;
    }
  }
  return total / static_cast<double>(terms);
}

double nce_loss_estimate(const EmbeddingMatrix& w, const SimilarityMatrix& sim,
                         const TrainParams& p, int sample_size, Rng& rng) {
  const int n = sim.row_count();
  const double big_n = p.resolved_bias_n(n);
  auto rows = truncate_all(sim, p.resolved_n_max(n), 1);
  return nce_loss_estimate(w, rows, p.s, std::log(big_n), std::log(big_n / p.s), sample_size, rng);
}

void save_embeddings(std::ostream& out, const EmbeddingMatrix& w,
                     std::span<const std::string> labels) {
  if (static_cast<int>(labels.size()) != w.node_count())
    throw std::invalid_argument("label count does not match embedding rows");
  out << w.node_count() << ' ' << w.dim() << '\n';
  char buf[64];
  for (int u = 0; u < w.node_count(); ++u) {
    out << labels[u];
    for (double x : w.row(u)) {
      std::snprintf(buf, sizeof(buf), "%.17g", x);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

LoadedEmbeddings load_embeddings(std::istream& in) {
  int n = 0, d = 0;
  if (!(in >> n >> d) || n < 1 || d < 1)
    throw std::runtime_error("bad embedding file header");
  LoadedEmbeddings out;
  out.matrix = EmbeddingMatrix(n, d);
  out.labels.resize(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    if (!(in >> out.labels[static_cast<std::size_t>(u)]))
      throw std::runtime_error("embedding file truncated");
    for (double& x : out.matrix.row(u)) {
      if (!(in >> x)) throw std::runtime_error("embedding file truncated");
    }
  }
  return out;
}

}  // namespace multiverse
