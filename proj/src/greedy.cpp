#include "balis/greedy.hpp"

#include "balis/error.hpp"

namespace balis::greedy {

namespace {

bool conflicts(const LedgerView& ledger, const SetState& current, Vertex v) {
  const Side other = opposite(v.side);
  for (auto id : current.members(other))
    if (ledger.edge(v, Vertex{other, id})) return true;
  return false;
}

}  // namespace

GreedyConfig GreedyConfig::from_params(const Params& params) {
  const auto th = compute_thresholds(params);
  return GreedyConfig{th.t1, th.t2, params.gamma};
}

void GreedyConfig::validate() const {
  if (t1 < 1) throw ConfigError("t1 must be at least 1");
  if (t2 < 0) throw ConfigError("t2 must be nonnegative");
  if (!is_gamma_balanced(static_cast<std::uint64_t>(t1), static_cast<std::uint64_t>(t2), gamma))
    throw ConfigError("(t1, t2) = (" + std::to_string(t1) + ", " + std::to_string(t2) + ") is not gamma-balanced");
}

StageOneOutcome stage_one_decision(const LedgerView& ledger, const SetState& current, Vertex arriving, int t1) {
  if (conflicts(ledger, current, arriving)) return {};
  const bool complete = static_cast<int>(current.count(arriving.side)) + 1 >= t1;
  return {true, complete};
}

StageTwoOutcome stage_two_decision(const LedgerView& ledger, const SetState& current, Vertex arriving,
                                   Side deficient, int t2) {
  if (static_cast<int>(current.count(deficient)) >= t2) return StageTwoOutcome::Done;
  if (arriving.side != deficient) return StageTwoOutcome::Reject;
  return conflicts(ledger, current, arriving) ? StageTwoOutcome::Reject : StageTwoOutcome::Accept;
}

TwoStageGreedy::TwoStageGreedy(GreedyConfig config) : config_(config) { config_.validate(); }

void TwoStageGreedy::start(std::uint32_t, const Seed&) {
  stage_two_ = false;
  majority_ = Side::L;
  T_f_ = 0;
  T_b_ = 0;
}

bool TwoStageGreedy::decide(const LedgerView& ledger, const SetState& current, Vertex arriving) {
  if (!stage_two_) {
    const auto out = stage_one_decision(ledger, current, arriving, config_.t1);
    if (out.stage_complete) {
      stage_two_ = true;
      majority_ = arriving.side;
      T_f_ = ledger.step();
      const auto deficient_count = static_cast<int>(current.count(opposite(majority_)));
      if (deficient_count == config_.t2) T_b_ = T_f_;
    }
    return out.accept;
  }
  const auto out = stage_two_decision(ledger, current, arriving, opposite(majority_), config_.t2);
  if (out != StageTwoOutcome::Accept) return false;
  if (static_cast<int>(current.count(arriving.side)) + 1 == config_.t2) T_b_ = ledger.step();
  return true;
}

void TwoStageGreedy::annotate(RunTrace& trace) const {
  if (T_f_ != 0) {
    trace.T_f = T_f_;
    trace.stage_one_side = majority_;
  }
  if (T_b_ != 0) trace.T_b = T_b_;
}

AlgorithmFactory two_stage_factory(const GreedyConfig& config) {
  config.validate();
  return [config] { return std::make_unique<TwoStageGreedy>(config); };
}

RunTrace two_stage(const EdgeSource& g, const ArrivalPolicy& policy, const GreedyConfig& config, const Seed& seed,
                   const RunOptions& options) {
  TwoStageGreedy algorithm(config);
  return run_online(g, algorithm, policy, seed, options);
}

RunTrace two_stage(const EdgeSource& g, const ArrivalPolicy& policy, const Params& params, const Seed& seed) {
  const auto th = compute_thresholds(params);
  return two_stage(g, policy, GreedyConfig{th.t1, th.t2, params.gamma}, seed, RunOptions{th.tau_target});
}

}  // namespace balis::greedy
