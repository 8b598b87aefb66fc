#pragma once

#include "balis/online.hpp"
#include "balis/params.hpp"

namespace balis::greedy {

/// Per-side targets of the two-stage algorithm.
struct GreedyConfig {
  int t1 = 1;
  int t2 = 1;
  Gamma gamma{1, 2};

  static GreedyConfig from_params(const Params& params);
  /// t1 ≥ 1 and (t1, t2) balanced.
  void validate() const;
};

struct StageOneOutcome {
  bool accept = false;
  /// The acceptance brought a side to t1; this step is T_f.
  bool stage_complete = false;
};

/// Stage one: accept iff `arriving` has no revealed edge into the current set.
/// Requires max(|I∩L|, |I∩R|) < t1.
StageOneOutcome stage_one_decision(const LedgerView& ledger, const SetState& current, Vertex arriving, int t1);

enum class StageTwoOutcome { Accept, Reject, Done };

/// Stage two: only the deficient side grows, up to t2 vertices in total on that side.
StageTwoOutcome stage_two_decision(const LedgerView& ledger, const SetState& current, Vertex arriving,
                                   Side deficient, int t2);

/// Both stages as one online decision rule.
class TwoStageGreedy final : public OnlineAlgorithm {
 public:
  explicit TwoStageGreedy(GreedyConfig config);

  void start(std::uint32_t n, const Seed& seed) override;
  bool decide(const LedgerView& ledger, const SetState& current, Vertex arriving) override;
  void annotate(RunTrace& trace) const override;

  const GreedyConfig& config() const { return config_; }

 private:
  GreedyConfig config_;
  bool stage_two_ = false;
  Side majority_ = Side::L;
  std::size_t T_f_ = 0;
  std::size_t T_b_ = 0;
};

AlgorithmFactory two_stage_factory(const GreedyConfig& config);

RunTrace two_stage(const EdgeSource& g, const ArrivalPolicy& policy, const GreedyConfig& config, const Seed& seed,
                   const RunOptions& options = {});

/// Thresholds from params; τ uses the params' τ target.
RunTrace two_stage(const EdgeSource& g, const ArrivalPolicy& policy, const Params& params, const Seed& seed);

}  // namespace balis::greedy
