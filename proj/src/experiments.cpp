#include "balis/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>

#include "balis/error.hpp"
#include "balis/greedy.hpp"
#include "balis/parallel.hpp"

namespace balis::experiments {

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

TrialMetrics run_greedy_trial(const Params& params, const ArrivalPolicy& policy, const Seed& trial_seed,
                              std::size_t index, RunTrace* trace_out) {
  const auto th = compute_thresholds(params);
  const RandomBipartiteGraph g(params.n, params.p, trial_seed.derive("graph", 0));
  auto trace = greedy::two_stage(g, policy, greedy::GreedyConfig{th.t1, th.t2, params.gamma},
                                 trial_seed.derive("run", 0), RunOptions{th.tau_target});

  TrialMetrics m;
  m.trial = index;
  m.seed_path = trial_seed.to_string();
  m.final_size = trace.final_size();
  m.size_L = trace.final_set.count(Side::L);
  m.size_R = trace.final_set.count(Side::R);
  m.T_f = trace.T_f;
  m.T_b = trace.T_b;
  m.tau = trace.tau;
  m.majority = trace.majority;
  m.stage_one_complete = trace.T_f <= trace.rounds();
  m.complete = trace.T_b <= trace.rounds();
  m.balanced = trace.final_set.is_balanced(params.gamma);
  m.independent = trace.final_set.is_independent_in(g);
  if (trace_out) *trace_out = std::move(trace);
  return m;
}

std::vector<TrialMetrics> run_greedy_trials(const GreedyExperiment& ex) {
  ex.params.validate();
  if (ex.trials < 1) throw ConfigError("trials must be at least 1");
  compute_thresholds(ex.params);
  return parallel_map<TrialMetrics>(ex.trials, ex.workers, [&](std::size_t i) {
    return run_greedy_trial(ex.params, ex.policy, ex.seed.derive("trial", i), i);
  });
}

namespace {

double quantile(std::vector<std::size_t> sorted, double q) {
  if (sorted.empty()) return 0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return static_cast<double>(sorted[lo]) * (1 - frac) + static_cast<double>(sorted[hi]) * frac;
}

}  // namespace

Aggregate aggregate(const std::vector<TrialMetrics>& trials, int t1_plus_t2) {
  Aggregate a;
  a.trials = trials.size();
  if (trials.empty()) return a;
  std::vector<std::size_t> sizes;
  sizes.reserve(trials.size());
  double sum = 0, sum_sq = 0, tf_sum = 0;
  std::size_t complete = 0, tf_count = 0;
  for (const auto& t : trials) {
    sizes.push_back(t.final_size);
    sum += static_cast<double>(t.final_size);
    sum_sq += static_cast<double>(t.final_size) * static_cast<double>(t.final_size);
    if (t.complete) {
      ++complete;
      if (!t.balanced || static_cast<int>(t.final_size) != t1_plus_t2) ++a.completion_violations;
    }
    if (!t.independent) ++a.independence_violations;
    if (t.stage_one_complete) {
      tf_sum += static_cast<double>(t.T_f);
      ++tf_count;
    }
    a.max_T_f = std::max(a.max_T_f, t.T_f);
  }
  const auto nt = static_cast<double>(trials.size());
  a.mean_size = sum / nt;
  const double var = trials.size() > 1 ? (sum_sq - sum * sum / nt) / (nt - 1) : 0.0;
  a.stderr_size = std::sqrt(std::max(0.0, var) / nt);
  std::sort(sizes.begin(), sizes.end());
  a.min_size = sizes.front();
  a.max_size = sizes.back();
  a.q25_size = quantile(sizes, 0.25);
  a.median_size = quantile(sizes, 0.5);
  a.q75_size = quantile(sizes, 0.75);
  a.completion_rate = static_cast<double>(complete) / nt;
  a.mean_T_f = tf_count ? tf_sum / static_cast<double>(tf_count) : 0.0;
  return a;
}

nlohmann::ordered_json to_json(const TrialMetrics& m) {
  nlohmann::ordered_json j;
  j["trial"] = m.trial;
  j["seed_path"] = m.seed_path;
  j["final_size"] = m.final_size;
  j["size_L"] = m.size_L;
  j["size_R"] = m.size_R;
  j["T_f"] = m.T_f;
  j["T_b"] = m.T_b;
  j["tau"] = m.tau;
  j["majority"] = std::string(1, side_char(m.majority));
  j["complete"] = m.complete;
  j["balanced"] = m.balanced;
  j["independent"] = m.independent;
  return j;
}

nlohmann::ordered_json to_json(const Aggregate& a) {
  nlohmann::ordered_json j;
  j["trials"] = a.trials;
  j["mean_size"] = a.mean_size;
  j["stderr_size"] = a.stderr_size;
  j["min_size"] = a.min_size;
  j["q25_size"] = a.q25_size;
  j["median_size"] = a.median_size;
  j["q75_size"] = a.q75_size;
  j["max_size"] = a.max_size;
  j["completion_rate"] = a.completion_rate;
  j["mean_T_f"] = a.mean_T_f;
  j["max_T_f"] = a.max_T_f;
  j["independence_violations"] = a.independence_violations;
  j["completion_violations"] = a.completion_violations;
  return j;
}

nlohmann::ordered_json to_json(const Params& p) {
  nlohmann::ordered_json j;
  j["n"] = p.n;
  j["p"] = p.p;
  j["gamma"] = p.gamma.to_string();
  j["epsilon"] = p.epsilon;
  j["mu"] = p.mu_or_default();
  return j;
}

nlohmann::ordered_json to_json(const Thresholds& t) {
  nlohmann::ordered_json j;
  j["alpha_stat"] = t.alpha_stat;
  j["alpha_comp"] = t.alpha_comp;
  j["t1"] = t.t1;
  j["t2"] = t.t2;
  j["tau_target"] = t.tau_target;
  return j;
}

std::vector<SweepRow> sweep(const SweepGrid& grid) {
  const std::size_t points = grid.n.size() * grid.p.size() * grid.gamma.size() * grid.epsilon.size();
  if (points == 0) throw ConfigError("empty sweep");
  if (points * grid.trials > grid.max_runs)
    throw ConfigError("sweep too large: " + std::to_string(points * grid.trials) + " runs exceed the cap of " +
                      std::to_string(grid.max_runs));

  std::vector<SweepRow> rows;
  std::size_t k = 0;
  for (auto n : grid.n)
    for (auto p : grid.p)
      for (const auto& gamma : grid.gamma)
        for (auto eps : grid.epsilon) {
          Params params{n, p, gamma, eps, std::nullopt};
          params.validate();
          SweepRow row;
          row.params = params;
          row.thresholds = compute_thresholds(params);
          const auto point_seed = grid.seed.derive("point", k++);
          row.seed_path = point_seed.to_string();
          const auto trials = run_greedy_trials(GreedyExperiment{params, grid.policy, grid.trials, point_seed, grid.workers});
          row.aggregate = aggregate(trials, row.thresholds.t1 + row.thresholds.t2);
          rows.push_back(std::move(row));
        }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "n,p,gamma,epsilon,t1,t2,trials,mean_size,stderr,completion_rate,mean_T_f,max_T_f,seed_path\n";
  for (const auto& r : rows) {
    out << r.params.n << ',' << format_double(r.params.p) << ',' << r.params.gamma.to_string() << ','
        << format_double(r.params.epsilon) << ',' << r.thresholds.t1 << ',' << r.thresholds.t2 << ','
        << r.aggregate.trials << ',' << format_double(r.aggregate.mean_size) << ','
        << format_double(r.aggregate.stderr_size) << ',' << format_double(r.aggregate.completion_rate) << ','
        << format_double(r.aggregate.mean_T_f) << ',' << r.aggregate.max_T_f << ',' << r.seed_path << '\n';
  }
}

PlotKind parse_plot_kind(const std::string& name) {
  if (name == "size-vs-n") return PlotKind::SizeVsN;
  if (name == "Tf-histogram") return PlotKind::TfHistogram;
  if (name == "overlap-heatmap") return PlotKind::OverlapHeatmap;
  if (name == "q-grid") return PlotKind::QGrid;
  throw ConfigError("unknown plot kind '" + name + "' (expected size-vs-n, Tf-histogram, overlap-heatmap, q-grid)");
}

void emit_plot_data(const PlotInput& input, PlotKind kind, std::ostream& out) {
  auto mismatch = [] { throw ConfigError("plot kind does not match the supplied records"); };
  switch (kind) {
    case PlotKind::SizeVsN: {
      const auto* rows = std::get_if<std::vector<SweepRow>>(&input);
      if (!rows) mismatch();
      out << "n,mean_size,stderr\n";
      for (const auto& r : *rows)
        out << r.params.n << ',' << format_double(r.aggregate.mean_size) << ','
            << format_double(r.aggregate.stderr_size) << '\n';
      return;
    }
    case PlotKind::TfHistogram: {
      const auto* trials = std::get_if<std::vector<TrialMetrics>>(&input);
      if (!trials) mismatch();
      std::map<std::size_t, std::size_t> hist;
      for (const auto& t : *trials) ++hist[t.T_f];
      out << "T_f,count\n";
      for (const auto& [tf, c] : hist) out << tf << ',' << c << '\n';
      return;
    }
    case PlotKind::OverlapHeatmap: {
      const auto* hist = std::get_if<ogp::OverlapHistogram>(&input);
      if (!hist) mismatch();
      out << "i1,i2,count\n";
      for (const auto& [key, c] : *hist) out << key.first << ',' << key.second << ',' << c << '\n';
      return;
    }
    case PlotKind::QGrid: {
      const auto* grid = std::get_if<moments::QGrid>(&input);
      if (!grid) mismatch();
      out << "i1,i2,q\n";
      for (int i1 = 0; i1 <= grid->max_i1; ++i1)
        for (int i2 = 0; i2 <= grid->max_i2; ++i2)
          out << i1 << ',' << i2 << ',' << format_double(std::exp(grid->log_at(i1, i2))) << '\n';
      return;
    }
  }
}

}  // namespace balis::experiments
