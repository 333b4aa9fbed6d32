#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "multiverse/graph.hpp"

namespace multiverse {

enum class OperatorKind { hadamard, average, weighted_l1, weighted_l2, cosine };
enum class HeuristicKind { jc, cn, aa, pa };

constexpr std::array<OperatorKind, 5> all_operators() {
  return {OperatorKind::hadamard, OperatorKind::average, OperatorKind::weighted_l1,
          OperatorKind::weighted_l2, OperatorKind::cosine};
}
constexpr std::array<HeuristicKind, 4> all_heuristics() {
  return {HeuristicKind::jc, HeuristicKind::cn, HeuristicKind::aa, HeuristicKind::pa};
}

std::string operator_name(OperatorKind kind);
std::string heuristic_name(HeuristicKind kind);
OperatorKind operator_from_name(const std::string& name);

// Componentwise edge features from two node vectors:
//   hadamard    f_i(u) f_i(v) / 2
//   average     f_i(u) + f_i(v)
//   weighted_l1 |f_i(u) - f_i(v)|
//   weighted_l2 |f_i(u) - f_i(v)|^2
//   cosine      f_i(u) f_i(v) / (|f(u)| |f(v)|)   (whole-vector norms)
// halved_average divides the average operator by 2 instead of the literal sum.
std::vector<double> apply_operator(OperatorKind kind, std::span<const double> fu,
                                   std::span<const double> fv, bool halved_average = false);

// Table-of-heuristics scores on one layer; AA skips common neighbors of
// degree <= 1.
double heuristic_score(HeuristicKind kind, int u, int v, const Layer& layer);

// Arithmetic mean of the per-layer scores.
double heuristic_average(HeuristicKind kind, int u, int v, const MultiplexGraph& g);

}  // namespace multiverse
