#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "balis/moments.hpp"
#include "balis/ogp.hpp"
#include "balis/online.hpp"
#include "balis/params.hpp"

namespace balis::experiments {

/// Metrics of one two-stage greedy run. `seed_path` replays it exactly.
struct TrialMetrics {
  std::size_t trial = 0;
  std::string seed_path;
  std::size_t final_size = 0;
  std::size_t size_L = 0;
  std::size_t size_R = 0;
  std::size_t T_f = 0;
  std::size_t T_b = 0;
  std::size_t tau = 0;
  Side majority = Side::R;
  bool stage_one_complete = false;  // T_f ≤ 2n
  bool complete = false;            // T_b ≤ 2n
  bool balanced = false;
  bool independent = false;

  friend bool operator==(const TrialMetrics&, const TrialMetrics&) = default;
};

/// Graph from derive(trial_seed, "graph", 0), run from derive(trial_seed, "run", 0).
/// The graph is evaluated lazily, so n can be large.
TrialMetrics run_greedy_trial(const Params& params, const ArrivalPolicy& policy, const Seed& trial_seed,
                              std::size_t index, RunTrace* trace_out = nullptr);

struct GreedyExperiment {
  Params params;
  ArrivalPolicy policy;
  std::size_t trials = 1;
  Seed seed;
  unsigned workers = 1;
};

/// Trial i uses derive(seed, "trial", i); results come back in trial order.
std::vector<TrialMetrics> run_greedy_trials(const GreedyExperiment& experiment);

struct Aggregate {
  std::size_t trials = 0;
  double mean_size = 0;
  double stderr_size = 0;
  std::size_t min_size = 0;
  std::size_t max_size = 0;
  double q25_size = 0;
  double median_size = 0;
  double q75_size = 0;
  double completion_rate = 0;
  double mean_T_f = 0;
  std::size_t max_T_f = 0;
  std::size_t independence_violations = 0;
  /// Completed runs that are not balanced or not of size t1 + t2.
  std::size_t completion_violations = 0;
};

Aggregate aggregate(const std::vector<TrialMetrics>& trials, int t1_plus_t2);

nlohmann::ordered_json to_json(const TrialMetrics& m);
nlohmann::ordered_json to_json(const Aggregate& a);
nlohmann::ordered_json to_json(const Params& p);
nlohmann::ordered_json to_json(const Thresholds& t);

struct SweepGrid {
  std::vector<std::uint32_t> n;
  std::vector<double> p;
  std::vector<Gamma> gamma;
  std::vector<double> epsilon;
  ArrivalPolicy policy;
  std::size_t trials = 1;
  Seed seed;
  /// Cap on total trial runs across the grid.
  std::size_t max_runs = 1'000'000;
  unsigned workers = 1;
};

struct SweepRow {
  Params params;
  Thresholds thresholds;
  std::string seed_path;
  Aggregate aggregate;
};

/// Cartesian product in (n, p, γ, ε) order; grid point k uses derive(seed, "point", k).
std::vector<SweepRow> sweep(const SweepGrid& grid);
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

enum class PlotKind { SizeVsN, TfHistogram, OverlapHeatmap, QGrid };
PlotKind parse_plot_kind(const std::string& name);

using PlotInput =
    std::variant<std::vector<SweepRow>, std::vector<TrialMetrics>, ogp::OverlapHistogram, moments::QGrid>;

/// Flat CSV with a header row. Throws ConfigError when the input does not fit the kind.
void emit_plot_data(const PlotInput& input, PlotKind kind, std::ostream& out);

/// Shortest round-trip decimal.
std::string format_double(double x);

}  // namespace balis::experiments
