#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "multiverse/rng.hpp"
#include "multiverse/rwr.hpp"

namespace multiverse {

struct TrainParams {
  int d = 128;                  // embedding dimension
  int n_max = 0;                // row truncation size; 0 -> 300 if n > 5000 else ceil(0.15 n)
  int s = 5;                    // negatives per positive
  double lr = 0.025;
  long long total_steps = -1;   // positive-sample budget; -1 -> 5000 n, 0 -> no training
  int workers = 4;
  std::uint64_t rng_seed = 1;
  double bias_n = 0;            // N in bias_pos = ln N, bias_neg = ln(N/s); 0 -> node count

  void validate(int n) const;
  int resolved_n_max(int n) const;
  long long resolved_total_steps(int n) const;
  double resolved_bias_n(int n) const;
};

class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(int n, int d)
      : n_(n), d_(d), w_(static_cast<std::size_t>(n) * static_cast<std::size_t>(d), 0.0) {}

  int node_count() const { return n_; }
  int dim() const { return d_; }
  std::span<double> row(int u) {
    return {w_.data() + static_cast<std::size_t>(u) * d_, static_cast<std::size_t>(d_)};
  }
  std::span<const double> row(int u) const {
    return {w_.data() + static_cast<std::size_t>(u) * d_, static_cast<std::size_t>(d_)};
  }
  std::span<const double> data() const { return w_; }
  bool all_finite() const;

 private:
  int n_ = 0;
  int d_ = 0;
  std::vector<double> w_;
};

// Entries are independent standard normal draws; fixed seed gives a
// bit-identical matrix.
EmbeddingMatrix init_embeddings(int n, int d, std::uint64_t rng_seed);

// Similarity row truncated to its n_max largest entries (ties broken by
// smaller node id, the row's own node excluded) and renormalized.
struct TruncatedRow {
  std::vector<int> indices;
  std::vector<double> probs;
  std::vector<double> cum;  // inclusive prefix sums, back() == 1
};

TruncatedRow truncate_normalize(std::span<const double> row, int n_max, int self_id = -1);

// One logistic update with label D on the pair (u, v):
//   g = (D - sigmoid(w_u . w_v - bias)) * lr
//   w_u += g w_v,  w_v += g w_u   (both using pre-update values)
// Skips silently when u == v; throws on non-finite inputs. Returns g.
double nce_update(EmbeddingMatrix& w, int u, int v, int label, double bias, double lr);

int sample_positive(const TruncatedRow& row, Rng& rng);

// Uniform over [0, n) excluding u.
int sample_negative(int u, int n, Rng& rng);

struct TrainStats {
  // Mean NCE loss per sigmoid term of each positive event, in step order
  // (exact for workers == 1, lane-concatenated otherwise).
  std::vector<double> event_losses;
};

// NCE training against the truncated similarity rows: per step draw a
// uniform node u, one positive from its truncated row (D=1, bias ln N) and
// s uniform negatives (D=0, bias ln(N/s)). Lanes share W without locks;
// workers == 1 is exactly reproducible.
EmbeddingMatrix train(const SimilarityMatrix& sim, const TrainParams& p,
                      TrainStats* stats = nullptr);

// Monte-Carlo estimate of the NCE negative log-likelihood, mean per sigmoid
// term. Monitoring only.
double nce_loss_estimate(const EmbeddingMatrix& w, const SimilarityMatrix& sim,
                         const TrainParams& p, int sample_size, Rng& rng);
double nce_loss_estimate(const EmbeddingMatrix& w, std::span<const TruncatedRow> rows, int s,
                         double bias_pos, double bias_neg, int sample_size, Rng& rng);

// Header "n d", then one "label v_1 ... v_d" line per node, full precision.
void save_embeddings(std::ostream& out, const EmbeddingMatrix& w,
                     std::span<const std::string> labels);

struct LoadedEmbeddings {
  EmbeddingMatrix matrix;
  std::vector<std::string> labels;
};
LoadedEmbeddings load_embeddings(std::istream& in);

}  // namespace multiverse
