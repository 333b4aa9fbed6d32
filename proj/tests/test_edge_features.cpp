#include "doctest.h"

#include <cmath>

#include "multiverse/edge_features.hpp"
#include "multiverse/rng.hpp"
#include "support.hpp"

using namespace multiverse;

namespace {

// naive reference evaluation, written independently of apply_operator
std::vector<double> reference_operator(OperatorKind kind, const std::vector<double>& fu,
                                       const std::vector<double>& fv) {
  const std::size_t d = fu.size();
  std::vector<double> out(d, 0.0);
  double nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    nu += fu[i] * fu[i];
    nv += fv[i] * fv[i];
  }
  for (std::size_t i = 0; i < d; ++i) {
    switch (kind) {
      case OperatorKind::hadamard: out[i] = fu[i] * fv[i] / 2.0; break;
      case OperatorKind::average: out[i] = fu[i] + fv[i]; break;
      case OperatorKind::weighted_l1: out[i] = std::fabs(fu[i] - fv[i]); break;
      case OperatorKind::weighted_l2:
        out[i] = (fu[i] - fv[i]) * (fu[i] - fv[i]);
        break;
      case OperatorKind::cosine:
        out[i] = fu[i] * fv[i] / (std::sqrt(nu) * std::sqrt(nv));
        break;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("operator hand-computed examples") {
  SUBCASE("weighted_l1 of identical vectors is zero") {
    std::vector<double> f{1.5, -2.0, 0.25};
    auto out = apply_operator(OperatorKind::weighted_l1, f, f);
    for (double x : out) CHECK(x == 0.0);
  }
  SUBCASE("hadamard includes the halving from its definition") {
    std::vector<double> fu{2.0, 4.0}, fv{1.0, 3.0};
    auto out = apply_operator(OperatorKind::hadamard, fu, fv);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 6.0);
  }
  SUBCASE("self-cosine of a unit vector sums to 1") {
    std::vector<double> f{0.6, 0.8};
    auto out = apply_operator(OperatorKind::cosine, f, f);
    CHECK(out[0] + out[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("average is a literal sum, with an optional halved variant") {
    std::vector<double> fu{1.0, 2.0}, fv{3.0, 4.0};
    auto sum = apply_operator(OperatorKind::average, fu, fv);
    CHECK(sum[0] == 4.0);
    CHECK(sum[1] == 6.0);
    auto halved = apply_operator(OperatorKind::average, fu, fv, true);
    CHECK(halved[0] == 2.0);
    CHECK(halved[1] == 3.0);
  }
}

TEST_CASE("operator errors") {
  std::vector<double> a{1.0, 2.0}, b{1.0};
  CHECK_THROWS_AS(apply_operator(OperatorKind::hadamard, a, b), std::invalid_argument);
  std::vector<double> zero{0.0, 0.0}, unit{1.0, 0.0};
  CHECK_THROWS_AS(apply_operator(OperatorKind::cosine, zero, unit), std::invalid_argument);
}

TEST_CASE("operators match the naive reference on 1000 random pairs") {
  Rng rng(71);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 1 + rng.next_below(16);
    std::vector<double> fu(d), fv(d);
    for (std::size_t i = 0; i < d; ++i) {
      fu[i] = rng.next_gaussian();
      fv[i] = rng.next_gaussian();
    }
    for (OperatorKind kind : all_operators()) {
      auto got = apply_operator(kind, fu, fv);
      auto want = reference_operator(kind, fu, fv);
      for (std::size_t i = 0; i < d; ++i) CHECK(got[i] == want[i]);
    }
  }
}

TEST_CASE("operator symmetry and the l1/l2 relation") {
  Rng rng(72);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> fu(8), fv(8);
    for (std::size_t i = 0; i < 8; ++i) {
      fu[i] = rng.next_gaussian();
      fv[i] = rng.next_gaussian();
    }
    for (OperatorKind kind : all_operators()) {
      auto uv = apply_operator(kind, fu, fv);
      auto vu = apply_operator(kind, fv, fu);
      for (std::size_t i = 0; i < 8; ++i) CHECK(uv[i] == vu[i]);
    }
    auto l1 = apply_operator(OperatorKind::weighted_l1, fu, fv);
    auto l2 = apply_operator(OperatorKind::weighted_l2, fu, fv);
    for (std::size_t i = 0; i < 8; ++i) CHECK(l2[i] == doctest::Approx(l1[i] * l1[i]).epsilon(1e-12));
  }
}

TEST_CASE("heuristic scores on crafted neighborhoods") {
  // 0-1, 0-2, 1-2, 2-3, 3-4, 2-5: degrees 2,2,4,2,1,1
  auto g = support::make_multiplex(
      6, {{{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}, {2, 5, 1.0}}});
  const Layer& layer = g.layers[0];

  SUBCASE("disjoint neighborhoods give zero") {
    // N(4) = {3}, N(5) = {2}
    CHECK(heuristic_score(HeuristicKind::cn, 4, 5, layer) == 0.0);
    CHECK(heuristic_score(HeuristicKind::jc, 4, 5, layer) == 0.0);
    CHECK(heuristic_score(HeuristicKind::aa, 4, 5, layer) == 0.0);
  }
  SUBCASE("identical nonempty neighborhoods give JC = 1") {
    // N(0) = {1, 2}, N(1) = {0, 2}; craft a pair with equal sets instead
    auto h = support::make_multiplex(4, {{{0, 2, 1.0}, {0, 3, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}}});
    CHECK(heuristic_score(HeuristicKind::jc, 0, 1, h.layers[0]) == 1.0);
  }
  SUBCASE("single common neighbor of degree 4") {
    // N(0) = {1,2}, N(3) = {2,4}; common = {2}, |N(2)| = 4
    CHECK(heuristic_score(HeuristicKind::aa, 0, 3, layer) ==
          doctest::Approx(1.0 / std::log(4.0)).epsilon(1e-9));
    CHECK(heuristic_score(HeuristicKind::aa, 0, 3, layer) == doctest::Approx(0.721348).epsilon(1e-5));
    CHECK(heuristic_score(HeuristicKind::cn, 0, 3, layer) == 1.0);
  }
  SUBCASE("AA skips degree-1 common neighbors") {
    // N(3) = {2, 4}, N(5) = {2}: common neighbor 2 has degree 4 -> counted;
    // craft a degree-1 common neighbor case: nodes 0-4 via 3? N(2) includes 3;
    auto h = support::make_multiplex(3, {{{0, 2, 1.0}, {1, 2, 1.0}}});
    // common neighbor of 0 and 1 is 2 with degree 2 -> 1/log 2
    CHECK(heuristic_score(HeuristicKind::aa, 0, 1, h.layers[0]) ==
          doctest::Approx(1.0 / std::log(2.0)));
    // now a path 0-2, 2-1 where 2 has degree 2; degree-1 case needs a pendant
    auto pendant = support::make_multiplex(4, {{{0, 2, 1.0}, {1, 2, 1.0}, {0, 3, 1.0}, {1, 3, 1.0}}});
    // common neighbors of 0,1: {2, 3} both degree 2 -> both counted
    CHECK(heuristic_score(HeuristicKind::aa, 0, 1, pendant.layers[0]) ==
          doctest::Approx(2.0 / std::log(2.0)));
  }
  SUBCASE("PA multiplies degrees") {
    CHECK(heuristic_score(HeuristicKind::pa, 2, 3, layer) == 8.0);  // 4 * 2
  }
}

TEST_CASE("AA stays finite when common neighbors have the minimum degree") {
  // a common neighbor always has degree >= 2 in a simple graph, so the
  // degree <= 1 guard only shields crafted inputs; the minimum-degree case
  // must still avoid log(1) = 0 blowups.
  auto g = support::make_multiplex(3, {{{0, 2, 1.0}, {1, 2, 1.0}}});
  const double aa = heuristic_score(HeuristicKind::aa, 0, 1, g.layers[0]);
  CHECK(std::isfinite(aa));
  CHECK(aa == doctest::Approx(1.0 / std::log(2.0)));
}

TEST_CASE("heuristic_average means over layers") {
  SUBCASE("single layer equals the layer score") {
    auto g = support::make_multiplex(4, {{{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}}});
    for (HeuristicKind kind : all_heuristics()) {
      CHECK(heuristic_average(kind, 0, 1, g) == heuristic_score(kind, 0, 1, g.layers[0]));
    }
  }
  SUBCASE("PA averages degrees across layers") {
    // layer 1: deg(0) = 3, deg(1) = 4; layer 2: both isolated
    auto g = support::make_multiplex(
        8, {{{0, 2, 1.0}, {0, 3, 1.0}, {0, 4, 1.0}, {1, 4, 1.0}, {1, 5, 1.0}, {1, 6, 1.0}, {1, 7, 1.0}},
            {{2, 3, 1.0}}});
    CHECK(heuristic_average(HeuristicKind::pa, 0, 1, g) == 6.0);  // (12 + 0) / 2
  }
  SUBCASE("identical layers average to the single-layer score") {
    std::vector<Edge> edges{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {2, 3, 1.0}};
    auto g = support::make_multiplex(4, {edges, edges, edges});
    for (HeuristicKind kind : all_heuristics()) {
      CHECK(heuristic_average(kind, 0, 2, g) ==
            doctest::Approx(heuristic_score(kind, 0, 2, g.layers[0])).epsilon(1e-12));
    }
  }
}

TEST_CASE("heuristic ranges and symmetry on random graphs") {
  Rng rng(73);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = support::random_multiplex(12, 2, 0.3, rng);
    for (int u = 0; u < 12; ++u) {
      for (int v = u + 1; v < 12; ++v) {
        const double jc = heuristic_average(HeuristicKind::jc, u, v, g);
        CHECK(jc >= 0.0);
        CHECK(jc <= 1.0);
        for (HeuristicKind kind : all_heuristics()) {
          const double s = heuristic_average(kind, u, v, g);
          CHECK(s >= 0.0);
          CHECK(s == heuristic_average(kind, v, u, g));
        }
        for (const Layer& layer : g.layers) {
          const double cn = heuristic_score(HeuristicKind::cn, u, v, layer);
          CHECK(cn == std::floor(cn));  // integer-valued
        }
      }
    }
  }
}
