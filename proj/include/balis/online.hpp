#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "balis/graph.hpp"
#include "balis/seed.hpp"

namespace balis {

enum class PolicyKind { UniformRandom, LFirst, RFirst, Alternating, FixedSequence };

/// Order in which vertices are exposed to an arrival-oblivious algorithm.
struct ArrivalPolicy {
  PolicyKind kind = PolicyKind::UniformRandom;
  /// Only for FixedSequence: a permutation of all 2n vertices.
  std::vector<Vertex> sequence;

  static ArrivalPolicy uniform() { return {PolicyKind::UniformRandom, {}}; }
  static ArrivalPolicy l_first() { return {PolicyKind::LFirst, {}}; }
  static ArrivalPolicy r_first() { return {PolicyKind::RFirst, {}}; }
  static ArrivalPolicy alternating() { return {PolicyKind::Alternating, {}}; }
  static ArrivalPolicy fixed(std::vector<Vertex> seq) { return {PolicyKind::FixedSequence, std::move(seq)}; }

  /// "uniform-random", "l-first", "r-first", "alternating".
  static ArrivalPolicy parse(const std::string& name);
  std::string name() const;

  /// Throws ConfigError if a fixed sequence is not a permutation of the 2n vertices.
  void validate(std::uint32_t n) const;
};

/// Produces the arrival sequence one vertex at a time. Uniform-random draws each
/// vertex uniformly from those not yet exposed (incremental Fisher-Yates), using
/// only derive_subseed(seed, "arrival", 0).
class ArrivalStream {
 public:
  ArrivalStream(const ArrivalPolicy& policy, std::uint32_t n, const Seed& seed);

  bool done() const { return emitted_ == 2 * static_cast<std::size_t>(n_); }
  Vertex next();

 private:
  Vertex decode(std::uint32_t code) const;

  PolicyKind kind_;
  std::uint32_t n_;
  std::size_t emitted_ = 0;
  std::vector<std::uint32_t> pool_;
  std::vector<Vertex> fixed_;
  std::mt19937_64 engine_;
};

/// Whole arrival permutation for a policy (convenience over ArrivalStream).
std::vector<Vertex> arrival_sequence(const ArrivalPolicy& policy, std::uint32_t n, const Seed& seed);

/// The information an online algorithm may read: which vertices are exposed and
/// the status of any cross pair whose endpoints are both exposed.
class LedgerView {
 public:
  std::uint32_t n() const { return graph_->n(); }
  /// Number of vertices exposed so far (the current round, once the arriving vertex is revealed).
  std::size_t step() const { return step_; }
  bool exposed(Vertex v) const { return exposed_[idx(v.side)].test(v.id); }
  const Bitset& exposed_side(Side s) const { return exposed_[idx(s)]; }

  /// Status of the pair {a, b}. Throws ContractViolation unless a and b lie on
  /// opposite sides and are both exposed.
  bool edge(Vertex a, Vertex b) const;

 private:
  friend class OnlineRunner;
  explicit LedgerView(const EdgeSource& g);
  static constexpr std::size_t idx(Side s) { return static_cast<std::size_t>(s); }
  void expose(Vertex v);

  const EdgeSource* graph_;
  std::array<Bitset, 2> exposed_;
  std::size_t step_ = 0;
};

/// The set I_t built so far.
class SetState {
 public:
  std::size_t count(Side s) const { return members_[idx(s)].size(); }
  std::size_t size() const { return count(Side::L) + count(Side::R); }
  std::size_t max_count() const { return std::max(count(Side::L), count(Side::R)); }
  std::span<const std::uint32_t> members(Side s) const { return members_[idx(s)]; }

 private:
  friend class OnlineRunner;
  static constexpr std::size_t idx(Side s) { return static_cast<std::size_t>(s); }
  std::array<std::vector<std::uint32_t>, 2> members_;
};

/// Full record of an online run.
struct RunTrace {
  std::uint32_t n = 0;
  std::vector<Vertex> arrivals;           // arrivals[t-1] is v_t
  std::vector<std::uint8_t> accepted;     // accepted[t-1]
  std::vector<std::array<std::uint32_t, 2>> sizes;  // (|I_t∩L|, |I_t∩R|)
  /// Stage-one stop; sentinel() if stage one never completed.
  std::size_t T_f = 0;
  /// Step at which the deficient side reached its cap; sentinel() if never.
  std::size_t T_b = 0;
  /// First step at which a side count reaches the τ target, clamped at 2n.
  std::size_t tau = 0;
  /// ζ: L if |I_τ∩L| > |I_τ∩R|, else R.
  Side majority = Side::R;
  /// Side that reached the stage-one target (two-stage algorithm only).
  std::optional<Side> stage_one_side;
  BalancedSet final_set;

  std::size_t rounds() const { return 2 * static_cast<std::size_t>(n); }
  std::size_t sentinel() const { return rounds() + 1; }
  std::size_t final_size() const { return final_set.size(); }
};

/// An online decision rule. Implementations must be deterministic functions of
/// what they are shown plus the seed passed to start().
class OnlineAlgorithm {
 public:
  virtual ~OnlineAlgorithm() = default;

  virtual void start(std::uint32_t /*n*/, const Seed& /*seed*/) {}
  /// Include the arriving vertex? Its edges to earlier vertices are already revealed.
  virtual bool decide(const LedgerView& ledger, const SetState& current, Vertex arriving) = 0;

  /// Algorithms that pick v_t themselves return true; the runtime then ignores the policy.
  virtual bool selects_arrivals() const { return false; }
  virtual Vertex select_arrival(const LedgerView& ledger, const SetState& current);

  /// Fill algorithm-specific trace fields (T_f, T_b, ...) after the run.
  virtual void annotate(RunTrace& /*trace*/) const {}
};

using AlgorithmFactory = std::function<std::unique_ptr<OnlineAlgorithm>()>;

struct RunOptions {
  /// When set, τ is computed against it; otherwise τ = 2n.
  std::optional<int> tau_target;
};

/// Runs 2n rounds. The algorithm sees the graph only through the ledger.
RunTrace run_online(const EdgeSource& g, OnlineAlgorithm& algorithm, const ArrivalPolicy& policy,
                    const Seed& seed, const RunOptions& options = {});

/// τ = min{2n, min{t : max side count at t = tau_target}}.
std::size_t stopping_time_tau(const RunTrace& trace, int tau_target);

/// Revealed state after T rounds.
struct RevealedPair {
  std::uint32_t u;
  std::uint32_t v;
  bool present;
  friend bool operator==(const RevealedPair&, const RevealedPair&) = default;
};

struct RevealedLedger {
  Bitset exposed_L;
  Bitset exposed_R;
  /// Every pair with both endpoints exposed, in (u, v) order.
  std::vector<RevealedPair> revealed;

  const Bitset& exposed(Side s) const { return s == Side::L ? exposed_L : exposed_R; }
  bool covers(std::uint32_t u, std::uint32_t v) const { return exposed_L.test(u) && exposed_R.test(v); }
};

RevealedLedger ledger_at(const RunTrace& trace, const EdgeSource& g, std::size_t T);

/// One JSON object per step, then a summary object.
void write_trace_jsonl(const RunTrace& trace, std::ostream& out);

}  // namespace balis
