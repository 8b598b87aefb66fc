#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "balis/graph.hpp"

namespace balis::oracle {

/// Largest n the exhaustive routines accept (2^n subsets of one side).
inline constexpr std::uint32_t kMaxOracleN = 26;

/// Which side's subsets are enumerated. The two paths are independent
/// computations of the same quantities.
enum class EnumerationSide { L, R };

struct OracleResult {
  int max_size = 0;
  BalancedSet witness;
  /// α → Z_α, when requested. Includes Z_0 = 1 (the empty set).
  std::optional<std::map<int, std::uint64_t>> z_counts;
};

/// {v ∈ R : no u ∈ s is adjacent to v}.
Bitset common_non_neighbors(const BipartiteGraph& g, const Bitset& s);

/// Exhaustive maximum γ-balanced independent set. The witness is the
/// lexicographically smallest maximizing subset on the enumerated side, completed
/// with the smallest ids on the other side. Throws GuardError for n > 26.
OracleResult max_balanced_independent_set(const BipartiteGraph& g, const Gamma& gamma,
                                          EnumerationSide side = EnumerationSide::L, bool with_counts = false);

/// Z_α: number of γ-balanced independent sets of size α.
std::uint64_t count_balanced_independent_sets(const BipartiteGraph& g, const Gamma& gamma, int alpha,
                                              EnumerationSide side = EnumerationSide::L);

/// Z_α for every α.
std::map<int, std::uint64_t> balanced_size_profile(const BipartiteGraph& g, const Gamma& gamma,
                                                   EnumerationSide side = EnumerationSide::L);

/// Calls `visit` for every nonempty γ-balanced independent set with size in
/// [min_size, max_size]. Throws GuardError for n > 26.
void for_each_balanced_independent_set(const BipartiteGraph& g, const Gamma& gamma, int min_size, int max_size,
                                       const std::function<void(const BalancedSet&)>& visit);

}  // namespace balis::oracle
