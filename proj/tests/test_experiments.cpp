#include <sstream>

#include "doctest.h"

#include "balis/error.hpp"
#include "balis/experiments.hpp"

using namespace balis;
using namespace balis::experiments;

namespace {

Params params(std::uint32_t n, double eps = 0.3) { return Params{n, 0.5, Gamma(1, 2), eps, {}}; }

std::string csv_of(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  write_sweep_csv(rows, os);
  return os.str();
}

}  // namespace

TEST_CASE("trials are deterministic and worker independent") {
  const GreedyExperiment one{params(2048), ArrivalPolicy::uniform(), 12, Seed(7), 1};
  GreedyExperiment many = one;
  many.workers = 4;
  const auto a = run_greedy_trials(one);
  const auto b = run_greedy_trials(many);
  CHECK(a == b);
  CHECK(a.size() == 12);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].trial == i);
    CHECK(a[i].seed_path == "7/trial:" + std::to_string(i));
  }
}

TEST_CASE("a trial replays from its seed path") {
  const auto trials = run_greedy_trials({params(4096), ArrivalPolicy::l_first(), 5, Seed(3), 1});
  for (const auto& t : trials) {
    const auto again = run_greedy_trial(params(4096), ArrivalPolicy::l_first(), Seed::parse(t.seed_path), t.trial);
    CHECK(again == t);
  }
}

TEST_CASE("trial metrics are consistent") {
  RunTrace trace;
  const auto m = run_greedy_trial(params(4096), ArrivalPolicy::uniform(), Seed(1).derive("trial", 0), 0, &trace);
  CHECK(m.final_size == trace.final_size());
  CHECK(m.size_L + m.size_R == m.final_size);
  CHECK(m.T_f == trace.T_f);
  CHECK(m.independent);
  CHECK(m.complete == (m.T_b <= 8192));
  if (m.complete) CHECK(m.balanced);
}

TEST_CASE("aggregate") {
  std::vector<TrialMetrics> ts(4);
  const std::size_t sizes[] = {16, 16, 12, 8};
  for (std::size_t i = 0; i < 4; ++i) {
    ts[i].trial = i;
    ts[i].final_size = sizes[i];
    ts[i].T_f = 10 * (i + 1);
    ts[i].stage_one_complete = true;
    ts[i].complete = sizes[i] == 16;
    ts[i].balanced = true;
    ts[i].independent = true;
  }
  ts[3].independent = false;
  const auto a = aggregate(ts, 16);
  CHECK(a.trials == 4);
  CHECK(a.mean_size == doctest::Approx(13.0));
  CHECK(a.min_size == 8);
  CHECK(a.max_size == 16);
  CHECK(a.median_size == doctest::Approx(14.0));
  CHECK(a.completion_rate == doctest::Approx(0.5));
  CHECK(a.mean_T_f == doctest::Approx(25.0));
  CHECK(a.max_T_f == 40);
  CHECK(a.independence_violations == 1);
  CHECK(a.completion_violations == 0);
  // sample sd of {16,16,12,8} is sqrt(44/3); stderr divides by 2.
  CHECK(a.stderr_size == doctest::Approx(std::sqrt(44.0 / 3.0) / 2.0));

  ts[0].balanced = false;
  CHECK(aggregate(ts, 16).completion_violations == 1);
}

TEST_CASE("sweep over n from 2^10 to 2^16") {
  SweepGrid grid;
  for (int k = 10; k <= 16; ++k) grid.n.push_back(1u << k);
  grid.p = {0.5};
  grid.gamma = {Gamma(1, 2)};
  grid.epsilon = {0.3};
  grid.trials = 2;
  grid.seed = Seed(5);
  const auto rows = sweep(grid);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0].params.n == 1024);
  CHECK(rows[6].params.n == 65536);
  CHECK(rows[3].seed_path == "5/point:3");
  CHECK(csv_of(rows) == csv_of(sweep(grid)));

  std::ostringstream plot;
  emit_plot_data(rows, PlotKind::SizeVsN, plot);
  CHECK(plot.str().rfind("n,mean_size,stderr\n1024,", 0) == 0);
}

TEST_CASE("sweep errors") {
  SweepGrid grid;
  CHECK_THROWS_WITH_AS(sweep(grid), "empty sweep", ConfigError);
  grid.n = {1024, 2048};
  grid.p = {0.5};
  grid.gamma = {Gamma(1, 2)};
  grid.epsilon = {0.3};
  grid.trials = 6;
  grid.max_runs = 10;
  CHECK_THROWS_AS(sweep(grid), ConfigError);
}

TEST_CASE("plot data") {
  std::ostringstream os;
  emit_plot_data(ogp::OverlapHistogram{{{0, 1}, 3}, {{1, 0}, 2}}, PlotKind::OverlapHeatmap, os);
  CHECK(os.str() == "i1,i2,count\n0,1,3\n1,0,2\n");

  std::ostringstream q;
  emit_plot_data(moments::q_grid_at(1000000, 0.5, Gamma(1, 2), 4), PlotKind::QGrid, q);
  CHECK(q.str().rfind("i1,i2,q\n0,0,1\n0,1,", 0) == 0);

  std::vector<TrialMetrics> ts(3);
  ts[0].T_f = 5;
  ts[1].T_f = 5;
  ts[2].T_f = 9;
  std::ostringstream tf;
  emit_plot_data(ts, PlotKind::TfHistogram, tf);
  CHECK(tf.str() == "T_f,count\n5,2\n9,1\n");

  std::ostringstream bad;
  CHECK_THROWS_AS(emit_plot_data(ts, PlotKind::QGrid, bad), ConfigError);
  CHECK_THROWS_AS(parse_plot_kind("scatter"), ConfigError);
  CHECK(parse_plot_kind("Tf-histogram") == PlotKind::TfHistogram);
}

TEST_CASE("json records") {
  const auto j = to_json(compute_thresholds(params(1024, 0.2)));
  CHECK(j.dump() == R"({"alpha_stat":40.0,"alpha_comp":20.0,"t1":8,"t2":8,"tau_target":9})");
  CHECK(to_json(params(1024, 0.2)).dump() == R"({"n":1024,"p":0.5,"gamma":"1/2","epsilon":0.2,"mu":0.020000000000000004})");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
}
