#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "balis/bitset.hpp"
#include "balis/params.hpp"
#include "balis/seed.hpp"

namespace balis {

enum class Side : std::uint8_t { L = 0, R = 1 };

constexpr Side opposite(Side s) { return s == Side::L ? Side::R : Side::L; }
constexpr char side_char(Side s) { return s == Side::L ? 'L' : 'R'; }

struct Vertex {
  Side side;
  std::uint32_t id;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

/// Where a graph came from.
struct Provenance {
  std::optional<double> p;
  std::optional<std::uint64_t> seed;
  bool loaded_from_file = false;
};

/// Read access to the cross edges of a bipartite graph with n vertices per side.
class EdgeSource {
 public:
  virtual ~EdgeSource() = default;
  virtual std::uint32_t n() const = 0;
  /// Edge between L_u and R_v.
  virtual bool has_edge(std::uint32_t u, std::uint32_t v) const = 0;
};

/// G_bip(n, p) evaluated lazily: each edge indicator is a hash of (seed, u, v).
/// Lets online runs at large n touch only the pairs they query.
/// Materializing it with generate_graph gives the identical dense graph.
class RandomBipartiteGraph final : public EdgeSource {
 public:
  RandomBipartiteGraph(std::uint32_t n, double p, const Seed& seed);

  std::uint32_t n() const override { return n_; }
  bool has_edge(std::uint32_t u, std::uint32_t v) const override;

  double p() const { return p_; }
  std::uint64_t seed_value() const { return seed_value_; }

 private:
  std::uint32_t n_;
  double p_;
  std::uint64_t seed_value_;
};

/// Independent Bernoulli(p) indicator for pair (u, v) of the stream keyed by seed_value.
bool bernoulli_pair(std::uint64_t seed_value, std::uint32_t u, std::uint32_t v, double p);

/// Dense, immutable bipartite graph: row u holds the R-neighbours of L_u.
class BipartiteGraph final : public EdgeSource {
 public:
  BipartiteGraph(std::uint32_t n, std::vector<Bitset> rows, Provenance provenance = {});

  static BipartiteGraph empty(std::uint32_t n);
  static BipartiteGraph complete(std::uint32_t n);
  static BipartiteGraph from_edges(std::uint32_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);
  /// Copies any edge source into dense form.
  static BipartiteGraph materialize(const EdgeSource& source, Provenance provenance = {});

  std::uint32_t n() const override { return n_; }
  bool has_edge(std::uint32_t u, std::uint32_t v) const override { return rows_[u].test(v); }

  const Bitset& row(std::uint32_t u) const { return rows_[u]; }
  const std::vector<Bitset>& rows() const { return rows_; }
  const Provenance& provenance() const { return provenance_; }
  std::uint64_t edge_count() const;

  /// Sides swapped: edge (u, v) becomes (v, u).
  BipartiteGraph transposed() const;
  /// Copy with one edge set to `present`.
  BipartiteGraph with_edge(std::uint32_t u, std::uint32_t v, bool present) const;

  friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
    return a.n_ == b.n_ && a.rows_ == b.rows_;
  }

 private:
  std::uint32_t n_;
  std::vector<Bitset> rows_;
  Provenance provenance_;
};

/// Samples G_bip(n, p). Allows p ∈ {0, 1}.
BipartiteGraph generate_graph(std::uint32_t n, double p, const Seed& seed);
BipartiteGraph generate_graph(const Params& params, const Seed& seed);

/// Candidate solution: a subset of L and a subset of R.
struct BalancedSet {
  Bitset lpart;
  Bitset rpart;

  BalancedSet() = default;
  explicit BalancedSet(std::uint32_t n) : lpart(n), rpart(n) {}

  static BalancedSet from_ids(std::uint32_t n, const std::vector<std::uint32_t>& left,
                              const std::vector<std::uint32_t>& right);

  const Bitset& part(Side s) const { return s == Side::L ? lpart : rpart; }
  Bitset& part(Side s) { return s == Side::L ? lpart : rpart; }

  std::size_t size() const { return lpart.count() + rpart.count(); }
  std::size_t count(Side s) const { return part(s).count(); }
  bool contains(Vertex v) const { return part(v.side).test(v.id); }

  bool is_independent_in(const EdgeSource& g) const;
  bool is_balanced(const Gamma& gamma) const { return is_gamma_balanced(lpart.count(), rpart.count(), gamma); }

  friend bool operator==(const BalancedSet&, const BalancedSet&) = default;
};

// Graph file v1 (text):
//   balis-graph v1
//   n=<int> p=<decimal> seed=<uint64|none>
//   u v            one line per edge, ascending lexicographic order
void save_graph(const BipartiteGraph& g, std::ostream& sink);
BipartiteGraph load_graph(std::istream& source);

}  // namespace balis
