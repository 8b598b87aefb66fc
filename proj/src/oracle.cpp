#include "balis/oracle.hpp"

#include <bit>
#include <vector>

#include "balis/error.hpp"

namespace balis::oracle {

namespace {

using Mask = std::uint64_t;

/// Adjacency of the enumerated side as bit masks over the other side.
struct MaskGraph {
  int n = 0;
  std::vector<Mask> adj;
  Mask full = 0;
};

void check_guard(const BipartiteGraph& g) {
  if (g.n() > kMaxOracleN)
    throw GuardError("exhaustive oracle limited to n <= " + std::to_string(kMaxOracleN) + ", got n = " +
                     std::to_string(g.n()));
}

MaskGraph mask_graph(const BipartiteGraph& g, EnumerationSide side) {
  check_guard(g);
  MaskGraph mg;
  mg.n = static_cast<int>(g.n());
  mg.adj.assign(g.n(), 0);
  mg.full = g.n() == 64 ? ~Mask{0} : (Mask{1} << g.n()) - 1;
  for (std::uint32_t u = 0; u < g.n(); ++u)
    for (std::uint32_t v = 0; v < g.n(); ++v)
      if (g.has_edge(u, v)) {
        if (side == EnumerationSide::L)
          mg.adj[u] |= Mask{1} << v;
        else
          mg.adj[v] |= Mask{1} << u;
      }
  return mg;
}

/// Visits every subset s of the enumerated side in lexicographic order of its
/// sorted id list, with the mask of its common non-neighbours.
template <class F>
void enumerate_subsets(const MaskGraph& mg, F&& visit) {
  auto rec = [&](auto&& self, int start, Mask s, int size, Mask free) -> void {
    visit(s, size, free);
    for (int i = start; i < mg.n; ++i) self(self, i + 1, s | (Mask{1} << i), size + 1, free & ~mg.adj[i]);
  };
  rec(rec, 0, 0, 0, mg.full);
}

/// The balance predicate with the enumerated side's count in the right slot.
struct BalanceTable {
  int n;
  std::vector<std::uint8_t> ok;  // ok[own * (n+1) + other]
  BalanceTable(int n_, const Gamma& gamma, EnumerationSide side) : n(n_), ok((n_ + 1) * (n_ + 1)) {
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b) {
        const auto l = static_cast<std::uint64_t>(side == EnumerationSide::L ? a : b);
        const auto r = static_cast<std::uint64_t>(side == EnumerationSide::L ? b : a);
        ok[a * (n + 1) + b] = is_gamma_balanced(l, r, gamma) ? 1 : 0;
      }
  }
  bool operator()(int own, int other) const { return ok[own * (n + 1) + other] != 0; }
};

std::vector<std::vector<std::uint64_t>> binomials(int n) {
  std::vector<std::vector<std::uint64_t>> c(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (int i = 0; i <= n; ++i) {
    c[i][0] = 1;
    for (int j = 1; j <= i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

BalancedSet to_balanced_set(std::uint32_t n, Mask own, Mask other, EnumerationSide side) {
  BalancedSet set(n);
  auto& own_part = side == EnumerationSide::L ? set.lpart : set.rpart;
  auto& other_part = side == EnumerationSide::L ? set.rpart : set.lpart;
  for (Mask m = own; m != 0; m &= m - 1) own_part.set(static_cast<std::size_t>(std::countr_zero(m)));
  for (Mask m = other; m != 0; m &= m - 1) other_part.set(static_cast<std::size_t>(std::countr_zero(m)));
  return set;
}

/// Lowest `k` set bits of `m`.
Mask lowest_bits(Mask m, int k) {
  Mask out = 0;
  for (int i = 0; i < k; ++i) {
    out |= m & (~m + 1);
    m &= m - 1;
  }
  return out;
}

}  // namespace

Bitset common_non_neighbors(const BipartiteGraph& g, const Bitset& s) {
  Bitset out(g.n());
  out.set_all();
  s.for_each([&](std::size_t u) { out.and_not(g.row(static_cast<std::uint32_t>(u))); });
  return out;
}

OracleResult max_balanced_independent_set(const BipartiteGraph& g, const Gamma& gamma, EnumerationSide side,
                                          bool with_counts) {
  const auto mg = mask_graph(g, side);
  const BalanceTable balanced(mg.n, gamma, side);

  // best_other[own][c]: largest other-side count ≤ c balanced with `own`, or −1.
  std::vector<int> best_other((mg.n + 1) * (mg.n + 1), -1);
  for (int own = 0; own <= mg.n; ++own)
    for (int c = 0; c <= mg.n; ++c)
      for (int r = c; r >= 0; --r)
        if (balanced(own, r)) {
          best_other[own * (mg.n + 1) + c] = r;
          break;
        }

  int best = -1;
  Mask best_own = 0, best_free = 0;
  int best_r = 0;
  enumerate_subsets(mg, [&](Mask s, int size, Mask free) {
    const int r = best_other[size * (mg.n + 1) + std::popcount(free)];
    if (r >= 0 && size + r > best) {
      best = size + r;
      best_own = s;
      best_free = free;
      best_r = r;
    }
  });

  OracleResult result;
  result.max_size = best;
  result.witness = to_balanced_set(g.n(), best_own, lowest_bits(best_free, best_r), side);
  if (with_counts) result.z_counts = balanced_size_profile(g, gamma, side);
  return result;
}

std::map<int, std::uint64_t> balanced_size_profile(const BipartiteGraph& g, const Gamma& gamma, EnumerationSide side) {
  const auto mg = mask_graph(g, side);
  const BalanceTable balanced(mg.n, gamma, side);
  const auto c = binomials(mg.n);
  std::vector<std::uint64_t> z(2 * mg.n + 1, 0);
  enumerate_subsets(mg, [&](Mask, int size, Mask free) {
    const int avail = std::popcount(free);
    for (int r = 0; r <= avail; ++r)
      if (balanced(size, r)) z[size + r] += c[avail][r];
  });
  std::map<int, std::uint64_t> out;
  for (int a = 0; a <= 2 * mg.n; ++a)
    if (z[a] != 0) out[a] = z[a];
  return out;
}

std::uint64_t count_balanced_independent_sets(const BipartiteGraph& g, const Gamma& gamma, int alpha,
                                              EnumerationSide side) {
  const auto mg = mask_graph(g, side);
  if (alpha < 0 || alpha > 2 * mg.n) return 0;
  const BalanceTable balanced(mg.n, gamma, side);
  const auto c = binomials(mg.n);
  std::uint64_t total = 0;
  enumerate_subsets(mg, [&](Mask, int size, Mask free) {
    const int r = alpha - size;
    const int avail = std::popcount(free);
    if (r >= 0 && r <= avail && balanced(size, r)) total += c[avail][r];
  });
  return total;
}

void for_each_balanced_independent_set(const BipartiteGraph& g, const Gamma& gamma, int min_size, int max_size,
                                       const std::function<void(const BalancedSet&)>& visit) {
  const auto mg = mask_graph(g, EnumerationSide::L);
  const BalanceTable balanced(mg.n, gamma, EnumerationSide::L);
  min_size = std::max(min_size, 1);
  enumerate_subsets(mg, [&](Mask s, int size, Mask free) {
    if (size > max_size) return;
    for (Mask sub = free;; sub = (sub - 1) & free) {
      const int r = std::popcount(sub);
      if (size + r >= min_size && size + r <= max_size && balanced(size, r))
        visit(to_balanced_set(g.n(), s, sub, EnumerationSide::L));
      if (sub == 0) break;
    }
  });
}

}  // namespace balis::oracle
