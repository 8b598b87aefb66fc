#include <bit>
#include <set>

#include "doctest.h"

#include "balis/error.hpp"
#include "balis/oracle.hpp"

using namespace balis;
using oracle::EnumerationSide;

namespace {

/// Every subset of L ∪ R checked directly against the edge list.
std::map<int, std::uint64_t> naive_profile(const BipartiteGraph& g, const Gamma& gamma) {
  const std::uint32_t n = g.n();
  std::map<int, std::uint64_t> z;
  for (std::uint64_t lm = 0; lm < (1ULL << n); ++lm)
    for (std::uint64_t rm = 0; rm < (1ULL << n); ++rm) {
      bool independent = true;
      for (std::uint32_t u = 0; u < n && independent; ++u)
        for (std::uint32_t v = 0; v < n && independent; ++v)
          if ((lm >> u & 1) && (rm >> v & 1) && g.has_edge(u, v)) independent = false;
      const int l = std::popcount(lm), r = std::popcount(rm);
      if (independent && is_gamma_balanced(l, r, gamma)) ++z[l + r];
    }
  return z;
}

int max_of(const std::map<int, std::uint64_t>& z) {
  int best = 0;
  for (const auto& [a, c] : z)
    if (c > 0) best = std::max(best, a);
  return best;
}

// Graph of the greedy hand example, 0-indexed: edges (0,0), (1,1).
BipartiteGraph greedy_example() { return BipartiteGraph::from_edges(3, {{0, 0}, {1, 1}}); }
// Four-edge 3x3 graph with CNN({1,2}) = {1}.
BipartiteGraph four_edge_example() { return BipartiteGraph::from_edges(3, {{0, 0}, {0, 1}, {1, 0}, {2, 2}}); }

}  // namespace

TEST_CASE("common_non_neighbors") {
  const auto g = generate_graph(5, 0.5, Seed(1));
  Bitset none(5);
  Bitset all(5);
  all.set_all();
  CHECK(oracle::common_non_neighbors(g, none) == all);

  Bitset s(2);
  s.set(0);
  CHECK(oracle::common_non_neighbors(BipartiteGraph::complete(2), s).none());

  Bitset pair(3);
  pair.set(1);
  pair.set(2);
  CHECK(oracle::common_non_neighbors(four_edge_example(), pair).to_indices() == std::vector<std::size_t>{1});
  CHECK(oracle::common_non_neighbors(greedy_example(), pair).to_indices() == std::vector<std::size_t>{0, 2});
}

TEST_CASE("max_balanced_independent_set examples") {
  const auto empty = oracle::max_balanced_independent_set(BipartiteGraph::empty(2), Gamma(1, 2));
  CHECK(empty.max_size == 4);
  CHECK(empty.witness == BalancedSet::from_ids(2, {0, 1}, {0, 1}));

  CHECK(oracle::max_balanced_independent_set(BipartiteGraph::complete(2), Gamma(1, 2)).max_size == 1);

  const auto four = oracle::max_balanced_independent_set(four_edge_example(), Gamma(1, 2));
  CHECK(four.max_size == 3);
  CHECK(four.witness.is_independent_in(four_edge_example()));
  CHECK(four.witness.is_balanced(Gamma(1, 2)));

  const auto greedy_graph = oracle::max_balanced_independent_set(greedy_example(), Gamma(1, 2));
  CHECK(greedy_graph.max_size == 4);
}

TEST_CASE("witness tie-breaking is lexicographic") {
  // Every balanced pair {l_u, r_v} is independent; the smallest is {l0, r0}.
  const auto res = oracle::max_balanced_independent_set(BipartiteGraph::from_edges(3, {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}}),
                                                        Gamma(1, 2));
  CHECK(res.max_size == 2);
  CHECK(res.witness == BalancedSet::from_ids(3, {0}, {0}));
}

TEST_CASE("count_balanced_independent_sets examples") {
  CHECK(oracle::count_balanced_independent_sets(BipartiteGraph::empty(2), Gamma(1, 2), 2) == 4);
  CHECK(oracle::count_balanced_independent_sets(BipartiteGraph::complete(2), Gamma(1, 2), 2) == 0);
  CHECK(oracle::count_balanced_independent_sets(four_edge_example(), Gamma(1, 2), 3) == 4);
  CHECK(oracle::count_balanced_independent_sets(greedy_example(), Gamma(1, 2), 3) == 10);
  CHECK(oracle::count_balanced_independent_sets(greedy_example(), Gamma(1, 2), 0) == 1);
}

TEST_CASE("size guard") {
  CHECK_THROWS_AS(oracle::max_balanced_independent_set(BipartiteGraph::empty(27), Gamma(1, 2)), GuardError);
  CHECK_THROWS_AS(oracle::count_balanced_independent_sets(BipartiteGraph::empty(27), Gamma(1, 2), 2), GuardError);
}

TEST_CASE("oracle matches naive enumeration of all vertex subsets") {
  for (auto gamma : {Gamma(1, 2), Gamma(1, 3), Gamma(0.3141)})
    for (int s = 0; s < 40; ++s) {
      const std::uint32_t n = 1 + s % 5;
      const auto g = generate_graph(n, 0.2 + 0.15 * (s % 5), Seed(s));
      const auto want = naive_profile(g, gamma);
      auto got = oracle::balanced_size_profile(g, gamma);
      std::erase_if(got, [](const auto& kv) { return kv.second == 0; });
      CHECK(got == want);
      const auto res = oracle::max_balanced_independent_set(g, gamma);
      CHECK(res.max_size == max_of(want));
      CHECK(res.witness.size() == static_cast<std::size_t>(res.max_size));
      CHECK(res.witness.is_independent_in(g));
      CHECK(res.witness.is_balanced(gamma));
    }
}

TEST_CASE("L and R enumeration paths agree") {
  for (int s = 0; s < 100; ++s) {
    const std::uint32_t n = 2 + s % 9;
    const auto g = generate_graph(n, 0.5, Seed(500 + s));
    const auto gamma = s % 2 ? Gamma(1, 2) : Gamma(1, 3);
    const auto a = oracle::max_balanced_independent_set(g, gamma, EnumerationSide::L, true);
    const auto b = oracle::max_balanced_independent_set(g, gamma, EnumerationSide::R, true);
    CHECK(a.max_size == b.max_size);
    CHECK(*a.z_counts == *b.z_counts);
  }
}

TEST_CASE("transposed graph with the same gamma gives the same maximum") {
  // The predicate is symmetric in (l, r) for a fixed γ: the two sides of its disjunction swap.
  for (int s = 0; s < 50; ++s) {
    const auto g = generate_graph(2 + s % 8, 0.5, Seed(900 + s));
    for (auto gamma : {Gamma(1, 2), Gamma(1, 3)}) {
      const auto a = oracle::max_balanced_independent_set(g, gamma);
      const auto b = oracle::max_balanced_independent_set(g.transposed(), gamma);
      CHECK(a.max_size == b.max_size);
      CHECK(oracle::balanced_size_profile(g, gamma) == oracle::balanced_size_profile(g.transposed(), gamma));
    }
  }
}

TEST_CASE("edge mutations are monotone") {
  for (int s = 0; s < 40; ++s) {
    const std::uint32_t n = 3 + s % 6;
    const auto g = generate_graph(n, 0.5, Seed(1300 + s));
    const int base = oracle::max_balanced_independent_set(g, Gamma(1, 2)).max_size;
    const std::uint32_t u = s % n, v = (s * 7 + 3) % n;
    CHECK(oracle::max_balanced_independent_set(g.with_edge(u, v, true), Gamma(1, 2)).max_size <= base);
    CHECK(oracle::max_balanced_independent_set(g.with_edge(u, v, false), Gamma(1, 2)).max_size >= base);
  }
}

TEST_CASE("max size equals the largest alpha with Z_alpha >= 1") {
  for (int s = 0; s < 30; ++s) {
    const auto g = generate_graph(4 + s % 7, 0.5, Seed(1700 + s));
    const auto res = oracle::max_balanced_independent_set(g, Gamma(1, 2), EnumerationSide::L, true);
    CHECK(res.max_size == max_of(*res.z_counts));
    CHECK(res.z_counts->at(0) == 1);
  }
}

TEST_CASE("for_each visits exactly the counted sets") {
  const auto g = generate_graph(7, 0.5, Seed(3));
  const auto z = oracle::balanced_size_profile(g, Gamma(1, 2));
  std::map<int, std::uint64_t> seen;
  std::set<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> distinct;
  oracle::for_each_balanced_independent_set(g, Gamma(1, 2), 1, 14, [&](const BalancedSet& b) {
    CHECK(b.is_independent_in(g));
    CHECK(b.is_balanced(Gamma(1, 2)));
    ++seen[static_cast<int>(b.size())];
    distinct.insert({b.lpart.to_indices(), b.rpart.to_indices()});
  });
  std::uint64_t total = 0;
  for (const auto& [a, c] : seen) {
    CHECK(z.at(a) == c);
    total += c;
  }
  CHECK(distinct.size() == total);
}
