#include "multiverse/edge_features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace multiverse {

std::string operator_name(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::hadamard: return "hadamard";
    case OperatorKind::average: return "average";
    case OperatorKind::weighted_l1: return "weighted-l1";
    case OperatorKind::weighted_l2: return "weighted-l2";
    case OperatorKind::cosine: return "cosine";
  }
  throw std::logic_error("unknown operator");
}

std::string heuristic_name(HeuristicKind kind) {
  switch (kind) {
    case HeuristicKind::jc: return "jc-av";
    case HeuristicKind::cn: return "cn-av";
    case HeuristicKind::aa: return "aa-av";
    case HeuristicKind::pa: return "pa-av";
  }
  throw std::logic_error("unknown heuristic");
}

OperatorKind operator_from_name(const std::string& name) {
  for (OperatorKind kind : all_operators()) {
    if (operator_name(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown operator '" + name + "'");
}

std::vector<double> apply_operator(OperatorKind kind, std::span<const double> fu,
                                   std::span<const double> fv, bool halved_average) {
  if (fu.size() != fv.size()) throw std::invalid_argument("operator dimension mismatch");
  const std::size_t d = fu.size();
  std::vector<double> out(d);
  switch (kind) {
    case OperatorKind::hadamard:
      for (std::size_t i = 0; i < d; ++i) out[i] = fu[i] * fv[i] / 2.0;
      break;
    case OperatorKind::average: {
      const double scale = halved_average ? 0.5 : 1.0;
      for (std::size_t i = 0; i < d; ++i) out[i] = (fu[i] + fv[i]) * scale;
      break;
    }
    case OperatorKind::weighted_l1:
      for (std::size_t i = 0; i < d; ++i) out[i] = std::abs(fu[i] - fv[i]);
      break;
    case OperatorKind::weighted_l2:
      for (std::size_t i = 0; i < d; ++i) {
        const double diff = fu[i] - fv[i];
        out[i] = diff * diff;
      }
      break;
    case OperatorKind::cosine: {
      double nu = 0.0, nv = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        nu += fu[i] * fu[i];
        nv += fv[i] * fv[i];
      }
      if (nu == 0.0 || nv == 0.0)
        throw std::invalid_argument("cosine operator needs nonzero vectors");
      const double denom = std::sqrt(nu) * std::sqrt(nv);
      for (std::size_t i = 0; i < d; ++i) out[i] = fu[i] * fv[i] / denom;
      break;
    }
  }
  return out;
}

namespace {

int common_neighbor_count(std::span<const int> a, std::span<const int> b) {
  int count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (a[i] > b[j]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace

double heuristic_score(HeuristicKind kind, int u, int v, const Layer& layer) {
  auto nu = layer.neighbors(u);
  auto nv = layer.neighbors(v);
  switch (kind) {
    case HeuristicKind::cn:
      return common_neighbor_count(nu, nv);
    case HeuristicKind::jc: {
      const int common = common_neighbor_count(nu, nv);
      const int uni = static_cast<int>(nu.size() + nv.size()) - common;
      return uni == 0 ? 0.0 : static_cast<double>(common) / uni;
    }
    case HeuristicKind::aa: {
      double sum = 0.0;
      std::size_t i = 0, j = 0;
      while (i < nu.size() && j < nv.size()) {
        if (nu[i] < nv[j]) {
          ++i;
        } else if (nu[i] > nv[j]) {
          ++j;
        } else {
          const int dt = layer.degree(nu[i]);
          if (dt > 1) sum += 1.0 / std::log(static_cast<double>(dt));
          ++i;
          ++j;
        }
      }
      return sum;
    }
    case HeuristicKind::pa:
      return static_cast<double>(nu.size()) * static_cast<double>(nv.size());
  }
  throw std::logic_error("unknown heuristic");
}

double heuristic_average(HeuristicKind kind, int u, int v, const MultiplexGraph& g) {
  double sum = 0.0;
  for (const Layer& layer : g.layers) sum += heuristic_score(kind, u, v, layer);
  return sum / static_cast<double>(g.layer_count());
}

}  // namespace multiverse
