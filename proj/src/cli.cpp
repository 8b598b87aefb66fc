#include "balis/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "balis/error.hpp"
#include "balis/experiments.hpp"
#include "balis/graph.hpp"
#include "balis/greedy.hpp"
#include "balis/moments.hpp"
#include "balis/ogp.hpp"
#include "balis/oracle.hpp"

namespace balis::cli {

namespace {

using nlohmann::ordered_json;

/// Options shared by most subcommands.
struct Common {
  std::uint32_t n = 0;
  double p = 0.5;
  std::string gamma = "1/2";
  double epsilon = 0.1;
  std::optional<double> mu;
  std::string seed;
  std::string out;
  std::string graph;
  unsigned workers = 1;

  Params params() const {
    Params prm{n, p, Gamma::parse(gamma), epsilon, mu};
    prm.validate();
    return prm;
  }
};

void add_model(CLI::App* cmd, Common& c, bool need_n = true) {
  auto* opt = cmd->add_option("--n", c.n, "vertices per side");
  if (need_n) opt->required();
  cmd->add_option("--p", c.p, "edge probability");
  cmd->add_option("--gamma", c.gamma, "balance fraction in (0, 1/2], decimal or a/b");
}

void add_algo(CLI::App* cmd, Common& c) {
  cmd->add_option("--epsilon", c.epsilon, "slack epsilon in (0, 1)");
  cmd->add_option("--mu", c.mu, "tau slack mu (default epsilon^2/2)");
}

void add_seed(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "master seed or seed path (e.g. 7/trial:3); BALIS_SEED if absent");
}

void add_out(CLI::App* cmd, Common& c) { cmd->add_option("--out", c.out, "output file (default stdout)"); }

Seed resolve_seed(const std::string& text, std::ostream& err) {
  if (!text.empty()) return Seed::parse(text);
  if (const char* env = std::getenv("BALIS_SEED"); env && *env) return Seed::parse(env);
  std::random_device rd;
  const std::uint64_t master = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  err << "seed=" << master << '\n';
  return Seed(master);
}

/// Writes to --out when given, else to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("unwritable output: " + path);
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

BipartiteGraph obtain_graph(const Common& c, std::ostream& err) {
  if (!c.graph.empty()) {
    std::ifstream in(c.graph, std::ios::binary);
    if (!in) throw ConfigError("cannot read graph file: " + c.graph);
    return load_graph(in);
  }
  if (c.n == 0) throw ConfigError("either --graph or --n is required");
  return generate_graph(c.n, c.p, resolve_seed(c.seed, err));
}

ordered_json ids_json(const Bitset& b) {
  auto j = ordered_json::array();
  b.for_each([&](std::size_t i) { j.push_back(i); });
  return j;
}

ordered_json z_json(const std::map<int, std::uint64_t>& z) {
  ordered_json j = ordered_json::object();
  for (const auto& [a, c] : z) j[std::to_string(a)] = c;
  return j;
}

template <class T>
std::vector<T> parse_list(const std::string& text, T (*conv)(const std::string&)) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(conv(item));
  return out;
}

std::uint32_t parse_n(const std::string& s) {
  try {
    if (s.rfind("2^", 0) == 0) {
      const auto k = std::stoul(s.substr(2));
      if (k > 31) throw ConfigError("n too large: " + s);
      return std::uint32_t{1} << k;
    }
    return static_cast<std::uint32_t>(std::stoul(s));
  } catch (const std::logic_error&) {
    throw ConfigError("bad n value: " + s);
  }
}

double parse_real(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::logic_error&) {
    throw ConfigError("bad real value: " + s);
  }
}

Gamma parse_gamma(const std::string& s) { return Gamma::parse(s); }

std::size_t resolve_T(const std::string& text, const RunTrace& base_trace) {
  if (text == "tau") return base_trace.tau;
  try {
    return static_cast<std::size_t>(std::stoull(text));
  } catch (const std::logic_error&) {
    throw ConfigError("bad --T value: " + text);
  }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Balanced independent sets in dense random bipartite graphs"};
  app.require_subcommand(1);

  // thresholds
  Common th;
  auto* th_cmd = app.add_subcommand("thresholds", "statistical/computational thresholds and algorithm targets");
  add_model(th_cmd, th);
  add_algo(th_cmd, th);
  add_out(th_cmd, th);

  // gen
  Common gen;
  auto* gen_cmd = app.add_subcommand("gen", "sample a graph and write it in graph file v1 format");
  add_model(gen_cmd, gen);
  add_seed(gen_cmd, gen);
  add_out(gen_cmd, gen);

  // greedy
  Common gr;
  std::string gr_policy = "uniform-random";
  std::size_t gr_trials = 1;
  std::string gr_replay, gr_trace, gr_tf_csv;
  bool gr_timing = false;
  auto* gr_cmd = app.add_subcommand("greedy", "run the two-stage online algorithm over seeded trials (JSONL)");
  add_model(gr_cmd, gr);
  add_algo(gr_cmd, gr);
  add_seed(gr_cmd, gr);
  add_out(gr_cmd, gr);
  gr_cmd->add_option("--policy", gr_policy, "uniform-random | l-first | r-first | alternating");
  gr_cmd->add_option("--trials", gr_trials, "number of trials");
  gr_cmd->add_option("--workers", gr.workers, "worker threads (0 = all cores)");
  gr_cmd->add_option("--replay", gr_replay, "replay one trial from its seed path");
  gr_cmd->add_option("--trace", gr_trace, "write the step trace of trial 0 (or the replayed trial) as JSONL");
  gr_cmd->add_flag("--timing", gr_timing, "append a wall-clock record");
  gr_cmd->add_option("--tf-histogram", gr_tf_csv, "write a T_f histogram CSV (T_f,count)");

  // oracle
  Common orc;
  auto* orc_cmd = app.add_subcommand("oracle", "exact maximum balanced independent set (n <= 26)");
  add_model(orc_cmd, orc, false);
  add_seed(orc_cmd, orc);
  add_out(orc_cmd, orc);
  orc_cmd->add_option("--graph", orc.graph, "graph file instead of sampling");

  // count
  Common cnt;
  int cnt_alpha = 0;
  auto* cnt_cmd = app.add_subcommand("count", "exact Z_alpha (n <= 26)");
  add_model(cnt_cmd, cnt, false);
  add_seed(cnt_cmd, cnt);
  add_out(cnt_cmd, cnt);
  cnt_cmd->add_option("--graph", cnt.graph, "graph file instead of sampling");
  cnt_cmd->add_option("--alpha", cnt_alpha, "set size")->required();

  // moments
  Common mo;
  std::optional<double> mo_alpha;
  double mo_threshold = 1.0;
  std::string mo_qgrid;
  auto* mo_cmd = app.add_subcommand("moments", "first moment, second-moment ratio, q-grid");
  add_model(mo_cmd, mo);
  add_algo(mo_cmd, mo);
  add_out(mo_cmd, mo);
  mo_cmd->add_option("--alpha", mo_alpha, "evaluate the first moment at this size (rounded to a feasible split)");
  mo_cmd->add_option("--threshold", mo_threshold, "first-moment crossing threshold");
  mo_cmd->add_option("--qgrid-csv", mo_qgrid, "write the q-grid as CSV i1,i2,q");

  // overlaps
  Common ov;
  int ov_alpha = 1, ov_slack = 0;
  auto setup_overlaps = [&](CLI::App* cmd) {
    add_model(cmd, ov, false);
    add_seed(cmd, ov);
    add_out(cmd, ov);
    cmd->add_option("--graph", ov.graph, "graph file instead of sampling");
    cmd->add_option("--alpha", ov_alpha, "target size")->required();
    cmd->add_option("--slack", ov_slack, "include sets of size alpha - slack .. alpha");
  };
  auto* ov_cmd = app.add_subcommand("overlaps", "pairwise overlap histogram of balanced independent sets (CSV)");
  setup_overlaps(ov_cmd);

  // ogp
  auto* ogp_cmd = app.add_subcommand("ogp", "correlated families, success event, forbidden tuples");
  ogp_cmd->require_subcommand(1);
  Common og;
  std::string og_policy = "uniform-random", og_T = "tau", og_outdir, og_eta = "auto", og_a;
  std::size_t og_m = 2, og_trials = 100;
  std::optional<int> og_k;
  int og_beta = 0;
  auto setup_og = [&](CLI::App* cmd) {
    add_model(cmd, og);
    add_algo(cmd, og);
    add_seed(cmd, og);
    add_out(cmd, og);
    cmd->add_option("--policy", og_policy, "arrival policy");
    cmd->add_option("--m", og_m, "number of correlated copies");
  };
  auto* fam_cmd = ogp_cmd->add_subcommand("family", "build a correlated family and dump the copies");
  setup_og(fam_cmd);
  fam_cmd->add_option("--T", og_T, "family step, or 'tau'");
  fam_cmd->add_option("--out-dir", og_outdir, "directory for copy_<i>.graph files")->required();
  auto* suc_cmd = ogp_cmd->add_subcommand("success", "Monte Carlo estimate of P[S] and P[E]");
  setup_og(suc_cmd);
  suc_cmd->add_option("--k", og_k, "target size (default ceil((1+eps) alpha_comp))");
  suc_cmd->add_option("--trials", og_trials, "trials");
  suc_cmd->add_option("--workers", og.workers, "worker threads (0 = all cores)");
  auto* ogov_cmd = ogp_cmd->add_subcommand("overlaps", "pairwise overlap histogram (CSV)");
  setup_overlaps(ogov_cmd);
  auto* fb_cmd = ogp_cmd->add_subcommand("forbidden", "count forbidden m-tuples (n <= 8, m <= 2)");
  setup_og(fb_cmd);
  fb_cmd->add_option("--T", og_T, "family step, or 'tau'");
  fb_cmd->add_option("--a", og_a, "comma-separated sizes a_1..a_m")->required();
  fb_cmd->add_option("--beta", og_beta, "count outside eta inside V_A(T)");
  fb_cmd->add_option("--eta", og_eta, "L, R, or auto (majority side of the base run)");

  // sweep
  std::string sw_n, sw_p = "0.5", sw_gamma = "1/2", sw_eps = "0.3", sw_policy = "uniform-random", sw_seed, sw_out,
                    sw_plot;
  std::size_t sw_trials = 10, sw_max_runs = 1'000'000;
  unsigned sw_workers = 1;
  auto* sw_cmd = app.add_subcommand("sweep", "grid of greedy experiments (CSV)");
  sw_cmd->add_option("--n", sw_n, "comma list; entries may be 2^k")->required();
  sw_cmd->add_option("--p", sw_p, "comma list");
  sw_cmd->add_option("--gamma", sw_gamma, "comma list");
  sw_cmd->add_option("--epsilon", sw_eps, "comma list");
  sw_cmd->add_option("--policy", sw_policy, "arrival policy");
  sw_cmd->add_option("--trials", sw_trials, "trials per grid point");
  sw_cmd->add_option("--max-runs", sw_max_runs, "cap on total runs");
  sw_cmd->add_option("--seed", sw_seed, "master seed");
  sw_cmd->add_option("--out", sw_out, "output file");
  sw_cmd->add_option("--workers", sw_workers, "worker threads (0 = all cores)");
  sw_cmd->add_option("--plot", sw_plot, "emit plot data instead of the table (size-vs-n)");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("balis");
  for (const auto& a : args) argv_storage.push_back(a);
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*th_cmd) {
      const auto prm = th.params();
      const auto t = compute_thresholds(prm);
      Sink sink(th.out, out);
      ordered_json j = experiments::to_json(prm);
      j["b"] = prm.b();
      const auto tj = experiments::to_json(t);
      for (const auto& [k, v] : tj.items()) j[k] = v;
      *sink << j.dump() << '\n';
    } else if (*gen_cmd) {
      Params prm{gen.n, gen.p, Gamma(1, 2), 0.5, std::nullopt};
      prm.validate();
      const auto g = generate_graph(prm, resolve_seed(gen.seed, err));
      Sink sink(gen.out, out);
      save_graph(g, *sink);
    } else if (*gr_cmd) {
      const auto prm = gr.params();
      const auto thr = compute_thresholds(prm);
      const auto policy = ArrivalPolicy::parse(gr_policy);
      Sink sink(gr.out, out);
      const auto started = std::chrono::steady_clock::now();

      ordered_json config;
      config["experiment"] = "greedy";
      config["config"] = experiments::to_json(prm);
      config["config"]["policy"] = policy.name();
      config["thresholds"] = experiments::to_json(thr);

      std::vector<experiments::TrialMetrics> trials;
      RunTrace trace;
      if (!gr_replay.empty()) {
        const auto seed = Seed::parse(gr_replay);
        const auto& path = seed.path();
        const std::size_t index = path.empty() ? 0 : path.back().index;
        trials.push_back(experiments::run_greedy_trial(prm, policy, seed, index, &trace));
        config["config"]["replay"] = seed.to_string();
      } else {
        const auto seed = resolve_seed(gr.seed, err);
        config["config"]["seed"] = seed.to_string();
        config["config"]["trials"] = gr_trials;
        trials = experiments::run_greedy_trials({prm, policy, gr_trials, seed, gr.workers});
        if (!gr_trace.empty()) experiments::run_greedy_trial(prm, policy, seed.derive("trial", 0), 0, &trace);
      }
      *sink << config.dump() << '\n';
      for (const auto& t : trials) *sink << experiments::to_json(t).dump() << '\n';
      ordered_json agg;
      agg["aggregate"] = experiments::to_json(experiments::aggregate(trials, thr.t1 + thr.t2));
      *sink << agg.dump() << '\n';
      if (gr_timing) {
        ordered_json timing;
        timing["wall_clock_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        *sink << timing.dump() << '\n';
      }
      if (!gr_tf_csv.empty()) {
        Sink tf_sink(gr_tf_csv, out);
        experiments::emit_plot_data(trials, experiments::PlotKind::TfHistogram, *tf_sink);
      }
      if (!gr_trace.empty()) {
        Sink trace_sink(gr_trace, out);
        write_trace_jsonl(trace, *trace_sink);
      }
    } else if (*orc_cmd) {
      const auto g = obtain_graph(orc, err);
      const auto gamma = Gamma::parse(orc.gamma);
      const auto res = oracle::max_balanced_independent_set(g, gamma, oracle::EnumerationSide::L, true);
      ordered_json j;
      j["max_size"] = res.max_size;
      j["witness_L"] = ids_json(res.witness.lpart);
      j["witness_R"] = ids_json(res.witness.rpart);
      j["Z"] = z_json(*res.z_counts);
      Sink sink(orc.out, out);
      *sink << j.dump() << '\n';
    } else if (*cnt_cmd) {
      const auto g = obtain_graph(cnt, err);
      const auto z = oracle::count_balanced_independent_sets(g, Gamma::parse(cnt.gamma), cnt_alpha);
      ordered_json j;
      j["alpha"] = cnt_alpha;
      j["Z"] = z;
      Sink sink(cnt.out, out);
      *sink << j.dump() << '\n';
    } else if (*mo_cmd) {
      const auto prm = mo.params();
      const auto report = moments::moment_report(prm.n, prm.p, prm.gamma, prm.epsilon);
      ordered_json j;
      j["alpha_eps"] = report.alpha_eps;
      if (mo_alpha) {
        const int used = moments::nearest_feasible_alpha(*mo_alpha, prm.gamma);
        j["alpha_requested"] = *mo_alpha;
        j["alpha_used"] = used;
        j["logE"] = moments::log_first_moment(prm.n, prm.p, prm.gamma, used);
      } else {
        j["logE"] = report.log_first_moment;
      }
      j["ratio"] = report.ratio;
      j["crossing"] = moments::first_moment_crossing(prm.n, prm.p, prm.gamma, mo_threshold);
      j["q_max_off_origin"] = report.q_grid.max_off_origin();
      if (!mo_qgrid.empty()) {
        Sink qsink(mo_qgrid, out);
        experiments::emit_plot_data(report.q_grid, experiments::PlotKind::QGrid, *qsink);
      }
      Sink sink(mo.out, out);
      *sink << j.dump() << '\n';
    } else if (*ov_cmd || (*ogp_cmd && *ogov_cmd)) {
      const auto g = obtain_graph(ov, err);
      const auto hist = ogp::overlap_histogram(g, Gamma::parse(ov.gamma), ov_alpha, ov_slack);
      Sink sink(ov.out, out);
      experiments::emit_plot_data(hist, experiments::PlotKind::OverlapHeatmap, *sink);
    } else if (*ogp_cmd) {
      const auto prm = og.params();
      const auto thr = compute_thresholds(prm);
      const auto policy = ArrivalPolicy::parse(og_policy);
      const auto factory = greedy::two_stage_factory(greedy::GreedyConfig{thr.t1, thr.t2, prm.gamma});
      const auto seed = resolve_seed(og.seed, err);
      const RunOptions options{thr.tau_target};
      Sink sink(og.out, out);

      if (*suc_cmd) {
        const int k = og_k ? *og_k : ogp::default_success_size(prm);
        const auto est = ogp::estimate_success_probability(prm, factory, policy, og_m, k, og_trials, seed, og.workers);
        ordered_json j;
        j["p_hat_S"] = est.p_hat_S;
        j["p_hat_E"] = est.p_hat_E;
        j["stderr_S"] = est.stderr_S;
        j["stderr_E"] = est.stderr_E;
        j["combined_stderr"] = est.combined_stderr;
        j["trials"] = est.trials;
        j["m"] = est.m;
        j["k"] = est.k;
        j["seed"] = seed.to_string();
        *sink << j.dump() << '\n';
      } else {
        const auto base = generate_graph(prm, seed.derive("graph", 0));
        const auto family_seed = seed.derive("family", 0);
        auto probe = factory();
        const auto probe_trace = run_online(base, *probe, policy, family_seed.derive("run", 0), options);
        const auto T = resolve_T(og_T, probe_trace);
        const auto fam = ogp::build_family(base, factory, policy, prm.p, T, og_m, family_seed, options);

        if (*fam_cmd) {
          std::filesystem::create_directories(og_outdir);
          ordered_json j;
          j["T"] = T;
          j["m"] = fam.m();
          j["tau"] = fam.base_trace.tau;
          j["exposed_L"] = fam.ledger.exposed_L.count();
          j["exposed_R"] = fam.ledger.exposed_R.count();
          j["revealed_pairs"] = fam.ledger.revealed.size();
          auto files = ordered_json::array();
          for (std::size_t i = 0; i < fam.m(); ++i) {
            const auto path = (std::filesystem::path(og_outdir) / ("copy_" + std::to_string(i + 1) + ".graph")).string();
            std::ofstream f(path, std::ios::binary);
            if (!f) throw ConfigError("unwritable output: " + path);
            save_graph(fam.copies[i], f);
            files.push_back(path);
          }
          j["files"] = files;
          *sink << j.dump() << '\n';
        } else if (*fb_cmd) {
          ogp::ForbiddenTupleQuery q;
          q.a = parse_list<int>(og_a, [](const std::string& s) {
            try {
              return std::stoi(s);
            } catch (const std::logic_error&) {
              throw ConfigError("bad size in --a: " + s);
            }
          });
          q.beta = og_beta;
          if (og_eta == "auto")
            q.eta = fam.base_trace.majority;
          else if (og_eta == "L" || og_eta == "R")
            q.eta = og_eta == "L" ? Side::L : Side::R;
          else
            throw ConfigError("--eta must be L, R or auto");
          if (!ogp::in_size_range(q, prm))
            throw ConfigError("every a_i must lie in [(1+eps) alpha_comp, 2n]");
          if (og_beta > thr.tau_target) throw ConfigError("beta must lie in [0, tau_target]");
          const auto count = ogp::count_forbidden_tuples(fam, q, prm.gamma, thr.tau_target);
          ordered_json j;
          j["count"] = count;
          j["T"] = T;
          j["m"] = fam.m();
          j["eta"] = std::string(1, side_char(q.eta));
          j["beta"] = q.beta;
          j["tau_target"] = thr.tau_target;
          *sink << j.dump() << '\n';
        }
      }
    } else if (*sw_cmd) {
      experiments::SweepGrid grid;
      grid.n = parse_list<std::uint32_t>(sw_n, parse_n);
      grid.p = parse_list<double>(sw_p, parse_real);
      grid.gamma = parse_list<Gamma>(sw_gamma, parse_gamma);
      grid.epsilon = parse_list<double>(sw_eps, parse_real);
      grid.policy = ArrivalPolicy::parse(sw_policy);
      grid.trials = sw_trials;
      grid.max_runs = sw_max_runs;
      grid.seed = resolve_seed(sw_seed, err);
      grid.workers = sw_workers;
      const auto kind = sw_plot.empty() ? std::optional<experiments::PlotKind>{} : experiments::parse_plot_kind(sw_plot);
      const auto rows = experiments::sweep(grid);
      Sink sink(sw_out, out);
      if (kind)
        experiments::emit_plot_data(rows, *kind, *sink);
      else
        experiments::write_sweep_csv(rows, *sink);
    }
  } catch (const GuardError& e) {
    err << "error: " << e.what() << '\n';
    return kExitGuard;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace balis::cli
