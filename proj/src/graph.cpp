#include "balis/graph.hpp"

#include "balis/error.hpp"

namespace balis {

bool bernoulli_pair(std::uint64_t seed_value, std::uint32_t u, std::uint32_t v, double p) {
  const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
  return to_unit(splitmix_at(seed_value, key)) < p;
}

RandomBipartiteGraph::RandomBipartiteGraph(std::uint32_t n, double p, const Seed& seed)
    : n_(n), p_(p), seed_value_(seed.derive("edges", 0).value()) {
  if (n < 1) throw ConfigError("n must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
}

bool RandomBipartiteGraph::has_edge(std::uint32_t u, std::uint32_t v) const {
  return bernoulli_pair(seed_value_, u, v, p_);
}

BipartiteGraph::BipartiteGraph(std::uint32_t n, std::vector<Bitset> rows, Provenance provenance)
    : n_(n), rows_(std::move(rows)), provenance_(std::move(provenance)) {
  if (rows_.size() != n_) throw ConfigError("row count does not match n");
  for (const auto& r : rows_)
    if (r.size() != n_) throw ConfigError("row width does not match n");
}

BipartiteGraph BipartiteGraph::empty(std::uint32_t n) {
  return BipartiteGraph(n, std::vector<Bitset>(n, Bitset(n)), Provenance{0.0, std::nullopt, false});
}

BipartiteGraph BipartiteGraph::complete(std::uint32_t n) {
  std::vector<Bitset> rows(n, Bitset(n));
  for (auto& r : rows) r.set_all();
  return BipartiteGraph(n, std::move(rows), Provenance{1.0, std::nullopt, false});
}

BipartiteGraph BipartiteGraph::from_edges(std::uint32_t n,
                                          const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  std::vector<Bitset> rows(n, Bitset(n));
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw ConfigError("vertex id out of range");
    rows[u].set(v);
  }
  return BipartiteGraph(n, std::move(rows));
}

BipartiteGraph BipartiteGraph::materialize(const EdgeSource& source, Provenance provenance) {
  const auto n = source.n();
  std::vector<Bitset> rows(n, Bitset(n));
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = 0; v < n; ++v)
      if (source.has_edge(u, v)) rows[u].set(v);
  return BipartiteGraph(n, std::move(rows), std::move(provenance));
}

std::uint64_t BipartiteGraph::edge_count() const {
  std::uint64_t c = 0;
  for (const auto& r : rows_) c += r.count();
  return c;
}

BipartiteGraph BipartiteGraph::transposed() const {
  std::vector<Bitset> rows(n_, Bitset(n_));
  for (std::uint32_t u = 0; u < n_; ++u) rows_[u].for_each([&](std::size_t v) { rows[v].set(u); });
  return BipartiteGraph(n_, std::move(rows), provenance_);
}

BipartiteGraph BipartiteGraph::with_edge(std::uint32_t u, std::uint32_t v, bool present) const {
  auto rows = rows_;
  rows.at(u).assign(v, present);
  return BipartiteGraph(n_, std::move(rows), provenance_);
}

BipartiteGraph generate_graph(std::uint32_t n, double p, const Seed& seed) {
  const RandomBipartiteGraph lazy(n, p, seed);
  return BipartiteGraph::materialize(lazy, Provenance{p, seed.value(), false});
}

BipartiteGraph generate_graph(const Params& params, const Seed& seed) {
  params.validate();
  return generate_graph(params.n, params.p, seed);
}

BalancedSet BalancedSet::from_ids(std::uint32_t n, const std::vector<std::uint32_t>& left,
                                  const std::vector<std::uint32_t>& right) {
  BalancedSet s(n);
  for (auto u : left) s.lpart.set(u);
  for (auto v : right) s.rpart.set(v);
  return s;
}

bool BalancedSet::is_independent_in(const EdgeSource& g) const {
  const auto right = rpart.to_indices();
  bool ok = true;
  lpart.for_each([&](std::size_t u) {
    for (auto v : right)
      if (ok && g.has_edge(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v))) ok = false;
  });
  return ok;
}

}  // namespace balis
