#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "balis/graph.hpp"
#include "balis/online.hpp"
#include "balis/params.hpp"

namespace balis::ogp {

using balis::stopping_time_tau;

/// m graphs that agree with `base` on every pair revealed in the first T steps
/// of a run on `base`, and are independently resampled on all other pairs.
struct CorrelatedFamily {
  BipartiteGraph base;
  std::size_t T = 0;
  RevealedLedger ledger;
  /// copies[0] is base.
  std::vector<BipartiteGraph> copies;
  /// Seed the runs on every copy must use for the prefix-identity property.
  Seed run_seed;
  RunTrace base_trace;

  std::size_t m() const { return copies.size(); }
};

/// Runs the algorithm on `base` with derive_subseed(seed, "run", 0), takes the
/// ledger at T, and resamples off-ledger pairs of copy i (1-based, i ≥ 2) from
/// derive_subseed(seed, "copy", i) at edge probability p.
CorrelatedFamily build_family(const BipartiteGraph& base, const AlgorithmFactory& algorithm,
                              const ArrivalPolicy& policy, double p, std::size_t T, std::size_t m, const Seed& seed,
                              const RunOptions& options = {});

/// Default success-event size: ceil((1+ε)α_COMP).
int default_success_size(const Params& params);

struct SuccessEstimate {
  double p_hat_S = 0;
  double p_hat_E = 0;
  std::size_t trials = 0;
  std::size_t m = 0;
  int k = 0;
  double stderr_S = 0;
  double stderr_E = 0;
  /// Delta-method standard error of p̂_S − p̂_E^m.
  double combined_stderr = 0;
};

/// Per trial: sample a base graph, run to find τ, build the family at T = τ, run
/// every copy to completion. S: all m outputs have size ≥ k. E: base output has size ≥ k.
SuccessEstimate estimate_success_probability(const Params& params, const AlgorithmFactory& algorithm,
                                             const ArrivalPolicy& policy, std::size_t m, int k, std::size_t trials,
                                             const Seed& seed, unsigned workers = 1);

/// (i₁, i₂) = (|I_L ∩ J_L|, |I_R ∩ J_R|).
std::pair<int, int> overlap_profile(const BalancedSet& a, const BalancedSet& b);

using OverlapHistogram = std::map<std::pair<int, int>, std::uint64_t>;

inline constexpr std::uint32_t kMaxHistogramN = 20;

/// Overlap profiles over all unordered pairs of distinct γ-balanced independent
/// sets with size in [alpha − size_slack, alpha]. Throws GuardError for n > 20.
OverlapHistogram overlap_histogram(const BipartiteGraph& g, const Gamma& gamma, int alpha, int size_slack);

/// Query for forbidden m-tuples: sizes a, count β off side η inside V_A(T).
struct ForbiddenTupleQuery {
  std::vector<int> a;
  int beta = 0;
  Side eta = Side::L;
};

/// Whether every a_i lies in [(1+ε)α_COMP, 2n].
bool in_size_range(const ForbiddenTupleQuery& query, const Params& params);

inline constexpr std::uint32_t kMaxForbiddenN = 8;
inline constexpr std::size_t kMaxForbiddenM = 2;

/// Number of m-tuples (I_1..I_m) with I_i a γ-balanced independent set of size
/// a_i in copy i, the traces I_i ∩ V_A(T) identical, |I_i ∩ V_A(T) ∩ η| = tau_target
/// and |(I_i ∩ V_A(T)) \ η| = β. Throws GuardError for n > 8 or m > 2.
std::uint64_t count_forbidden_tuples(const CorrelatedFamily& family, const ForbiddenTupleQuery& query,
                                     const Gamma& gamma, int tau_target);

}  // namespace balis::ogp
