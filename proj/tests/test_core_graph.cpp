#include <set>
#include <sstream>

#include "doctest.h"

#include "balis/error.hpp"
#include "balis/graph.hpp"
#include "balis/params.hpp"
#include "balis/seed.hpp"

using namespace balis;

namespace {

Params make_params(std::uint32_t n, double p, Gamma gamma, double eps, std::optional<double> mu = {}) {
  return Params{n, p, gamma, eps, mu};
}

std::string save_to_string(const BipartiteGraph& g) {
  std::ostringstream os;
  save_graph(g, os);
  return os.str();
}

BipartiteGraph load_from_string(const std::string& text) {
  std::istringstream is(text);
  return load_graph(is);
}

}  // namespace

TEST_CASE("generate_graph degenerate probabilities") {
  const auto empty = generate_graph(3, 0.0, Seed(5));
  CHECK(empty.edge_count() == 0);
  const auto full = generate_graph(3, 1.0, Seed(5));
  CHECK(full.edge_count() == 9);
  CHECK(full == BipartiteGraph::complete(3));
}

TEST_CASE("generate_graph is deterministic per seed") {
  const auto a = generate_graph(16, 0.5, Seed(42));
  const auto b = generate_graph(16, 0.5, Seed(42));
  CHECK(a == b);
  CHECK(a.edge_count() <= 256);
  CHECK_FALSE(a == generate_graph(16, 0.5, Seed(43)));
  REQUIRE(a.provenance().p);
  CHECK(*a.provenance().p == 0.5);
}

TEST_CASE("lazy and dense graphs agree") {
  const Seed s(99);
  const RandomBipartiteGraph lazy(40, 0.3, s);
  const auto dense = generate_graph(40, 0.3, s);
  for (std::uint32_t u = 0; u < 40; ++u)
    for (std::uint32_t v = 0; v < 40; ++v) CHECK(lazy.has_edge(u, v) == dense.has_edge(u, v));
  CHECK(BipartiteGraph::materialize(lazy) == dense);
}

TEST_CASE("edge frequencies match p") {
  // 2000 seeds at n=8, p=0.3: every indicator within ±0.05.
  const int seeds = 2000;
  std::vector<int> hits(64, 0);
  for (int s = 0; s < seeds; ++s) {
    const auto g = generate_graph(8, 0.3, Seed(1000).derive("graph", s));
    for (std::uint32_t u = 0; u < 8; ++u)
      for (std::uint32_t v = 0; v < 8; ++v) hits[u * 8 + v] += g.has_edge(u, v);
  }
  for (int h : hits) CHECK(std::abs(h / double(seeds) - 0.3) <= 0.05);
}

TEST_CASE("is_gamma_balanced examples") {
  CHECK(is_gamma_balanced(2, 2, Gamma(1, 2)));
  CHECK_FALSE(is_gamma_balanced(3, 0, Gamma(1, 2)));
  CHECK(is_gamma_balanced(1, 2, Gamma(1, 3)));
  CHECK(is_gamma_balanced(1, 2, Gamma(1.0 / 3.0)));
  CHECK(is_gamma_balanced(0, 0, Gamma(1, 2)));
  CHECK(is_gamma_balanced(1, 0, Gamma(1, 2)));
  CHECK_FALSE(is_gamma_balanced(2, 0, Gamma(1, 2)));
  // Boundary: |l − γ|I|| = 1 exactly is not balanced.
  CHECK_FALSE(is_gamma_balanced(3, 1, Gamma(1, 2)));
}

TEST_CASE("is_gamma_balanced is symmetric under side swap") {
  for (auto g : {Gamma(1, 2), Gamma(1, 3), Gamma(2, 5), Gamma(1, 7), Gamma(0.3141)}) {
    for (std::uint64_t l = 0; l < 40; ++l)
      for (std::uint64_t r = 0; r < 40; ++r) CHECK(is_gamma_balanced(l, r, g) == is_gamma_balanced(r, l, g.complement()));
  }
}

TEST_CASE("Gamma parsing") {
  CHECK(Gamma::parse("1/3").fraction()->den == 3);
  CHECK(Gamma::parse("0.5").fraction()->den == 2);
  CHECK(Gamma::parse("0.25").to_string() == "1/4");
  CHECK_FALSE(Gamma::parse("0.3141").fraction().has_value());
  CHECK_THROWS_AS(Gamma::parse("x"), ConfigError);
  CHECK_THROWS_AS(Gamma::parse("1/0"), ConfigError);
}

TEST_CASE("compute_thresholds examples") {
  auto t = compute_thresholds(make_params(1024, 0.5, Gamma(1, 2), 0.2));
  CHECK(t.alpha_stat == 40.0);
  CHECK(t.alpha_comp == 20.0);
  CHECK(t.t1 == 8);
  CHECK(t.t2 == 8);

  t = compute_thresholds(make_params(1024, 0.5, Gamma(1, 3), 0.1));
  CHECK(t.alpha_stat == doctest::Approx(45.0).epsilon(1e-12));
  CHECK(t.alpha_comp == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(t.t1 == 9);
  CHECK(t.t2 == 18);

  t = compute_thresholds(make_params(1024, 0.5, Gamma(1, 2), 0.1, 0.02));
  CHECK(t.tau_target == 9);
}

TEST_CASE("compute_thresholds rejects degenerate inputs") {
  CHECK_THROWS_AS(compute_thresholds(make_params(1024, 0.0, Gamma(1, 2), 0.2)), ConfigError);
  CHECK_THROWS_AS(compute_thresholds(make_params(1024, 1.0, Gamma(1, 2), 0.2)), ConfigError);
  CHECK_THROWS_AS(compute_thresholds(make_params(1, 0.5, Gamma(1, 2), 0.2)), ConfigError);
  CHECK_THROWS_AS(make_params(16, 0.5, Gamma(0.6), 0.2).validate(), ConfigError);
  CHECK_THROWS_AS(make_params(16, 0.5, Gamma(1, 2), 1.0).validate(), ConfigError);
}

TEST_CASE("thresholds are always balanced") {
  const Gamma gammas[] = {Gamma(1, 2), Gamma(1, 3), Gamma(2, 5), Gamma(1, 4), Gamma(0.37)};
  for (std::uint32_t n : {4u, 16u, 100u, 1024u, 4096u, 65536u, 1000000u})
    for (double p : {0.1, 0.3, 0.5, 0.8})
      for (const auto& g : gammas)
        for (double eps : {0.05, 0.1, 0.3, 0.5, 0.9}) {
          const auto t = compute_thresholds(make_params(n, p, g, eps));
          CHECK(t.t1 >= 1);
          CHECK(is_gamma_balanced(t.t1, t.t2, g));
          CHECK(t.alpha_comp == doctest::Approx((1 - g.value()) * t.alpha_stat));
        }
}

TEST_CASE("save/load round trip") {
  const auto empty = BipartiteGraph::empty(2);
  CHECK(save_to_string(empty) == "balis-graph v1\nn=2 p=0 seed=none\n");
  CHECK(load_from_string(save_to_string(empty)) == empty);

  for (int s = 0; s < 20; ++s) {
    const auto g = generate_graph(16, 0.5, Seed(s));
    const auto text = save_to_string(g);
    const auto back = load_from_string(text);
    CHECK(back == g);
    CHECK(back.provenance().loaded_from_file);
    CHECK(save_to_string(back) == text);
  }
}

TEST_CASE("load_graph errors") {
  CHECK_THROWS_WITH_AS(load_from_string("balis-graph v1\nn=3 p=0.5 seed=1\n3 1\n"),
                       doctest::Contains("vertex id out of range"), FormatError);
  CHECK_THROWS_WITH_AS(load_from_string("balis-graph v1\nn=3 p=0.5 seed=1\n0 1\n0 1\n"),
                       doctest::Contains("duplicate edge line"), FormatError);
  CHECK_THROWS_AS(load_from_string("balis-graph v2\nn=3 p=0.5 seed=1\n"), FormatError);
  CHECK_THROWS_AS(load_from_string("balis-graph v1\nn=3 q=0.5 seed=1\n"), FormatError);
  CHECK_THROWS_AS(load_from_string("balis-graph v1\nn=3 p=0.5 seed=1\n1 0\n0 2\n"), FormatError);
  CHECK_THROWS_AS(load_from_string(""), FormatError);
}

TEST_CASE("derive_subseed") {
  const Seed s(12345);
  CHECK(derive_subseed(s, "trial", 0).value() != derive_subseed(s, "trial", 1).value());
  CHECK(derive_subseed(s, "trial", 7) == derive_subseed(s, "trial", 7));
  CHECK(derive_subseed(s, "trial", 7).value() == derive_subseed(s, "trial", 7).value());
  CHECK(derive_subseed(derive_subseed(s, "trial", 0), "copy", 2).value() != derive_subseed(s, "copy", 2).value());
  CHECK_THROWS(s.derive("", 0));

  std::set<std::uint64_t> values;
  for (int i = 0; i < 1000; ++i) {
    values.insert(s.derive("trial", i).value());
    values.insert(s.derive("copy", i).value());
  }
  CHECK(values.size() == 2000);
}

TEST_CASE("seed paths round-trip through text") {
  const auto s = Seed(7).derive("trial", 3).derive("graph", 0);
  CHECK(s.to_string() == "7/trial:3/graph:0");
  CHECK(Seed::parse("7/trial:3/graph:0") == s);
  CHECK(Seed::parse(s.to_string()).value() == s.value());
  CHECK(Seed::parse("42") == Seed(42));
  CHECK_THROWS_AS(Seed::parse("7/trial"), ConfigError);
  CHECK_THROWS_AS(Seed::parse("abc"), ConfigError);
}

TEST_CASE("uniform_below stays in range and hits every value") {
  auto eng = Seed(3).engine();
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 7000; ++i) ++seen[uniform_below(eng, 7)];
  for (int c : seen) CHECK(c > 800);
}

TEST_CASE("BalancedSet helpers") {
  const auto g = BipartiteGraph::from_edges(3, {{0, 0}, {1, 1}});
  const auto a = BalancedSet::from_ids(3, {0}, {1});
  CHECK(a.size() == 2);
  CHECK(a.is_independent_in(g));
  CHECK(a.is_balanced(Gamma(1, 2)));
  CHECK_FALSE(BalancedSet::from_ids(3, {0}, {0}).is_independent_in(g));
  CHECK(g.transposed().transposed() == g);
  CHECK(g.with_edge(2, 2, true).edge_count() == 3);
  CHECK(g.with_edge(0, 0, false).edge_count() == 1);
}
