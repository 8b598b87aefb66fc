#include "balis/ogp.hpp"

#include <bit>
#include <cmath>

#include "balis/error.hpp"
#include "balis/oracle.hpp"
#include "balis/parallel.hpp"

namespace balis::ogp {

CorrelatedFamily build_family(const BipartiteGraph& base, const AlgorithmFactory& algorithm,
                              const ArrivalPolicy& policy, double p, std::size_t T, std::size_t m, const Seed& seed,
                              const RunOptions& options) {
  const std::size_t rounds = 2 * static_cast<std::size_t>(base.n());
  if (T < 1 || T > rounds) throw ConfigError("family step T must lie in [1, 2n]");
  if (m < 1) throw ConfigError("family size m must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");

  CorrelatedFamily fam{base, T, {}, {}, seed.derive("run", 0), {}};
  auto alg = algorithm();
  fam.base_trace = run_online(base, *alg, policy, fam.run_seed, options);
  fam.ledger = ledger_at(fam.base_trace, base, T);

  const auto n = base.n();
  fam.copies.reserve(m);
  fam.copies.push_back(base);
  for (std::size_t i = 2; i <= m; ++i) {
    const auto copy_seed = seed.derive("copy", i).value();
    std::vector<Bitset> rows(n, Bitset(n));
    for (std::uint32_t u = 0; u < n; ++u)
      for (std::uint32_t v = 0; v < n; ++v) {
        const bool present = fam.ledger.covers(u, v) ? base.has_edge(u, v) : bernoulli_pair(copy_seed, u, v, p);
        if (present) rows[u].set(v);
      }
    fam.copies.emplace_back(n, std::move(rows), Provenance{p, copy_seed, false});
  }
  return fam;
}

int default_success_size(const Params& params) {
  const auto th = compute_thresholds(params);
  return static_cast<int>(std::ceil((1.0 + params.epsilon) * th.alpha_comp - 1e-9));
}

SuccessEstimate estimate_success_probability(const Params& params, const AlgorithmFactory& algorithm,
                                             const ArrivalPolicy& policy, std::size_t m, int k, std::size_t trials,
                                             const Seed& seed, unsigned workers) {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (m < 1) throw ConfigError("m must be at least 1");
  params.validate();
  // b is undefined at p ∈ {0, 1}; τ then falls back to 2n.
  RunOptions options;
  if (params.p > 0.0 && params.p < 1.0) options.tau_target = compute_thresholds(params).tau_target;

  struct Outcome {
    bool s;
    bool e;
  };
  const auto outcomes = parallel_map<Outcome>(trials, workers, [&](std::size_t t) {
    const auto trial_seed = seed.derive("trial", t);
    const auto base = generate_graph(params, trial_seed.derive("graph", 0));
    const auto family_seed = trial_seed.derive("family", 0);
    auto probe = algorithm();
    const auto probe_trace = run_online(base, *probe, policy, family_seed.derive("run", 0), options);
    const auto fam = build_family(base, algorithm, policy, params.p, probe_trace.tau, m, family_seed, options);

    bool all = true;
    bool base_ok = false;
    for (std::size_t i = 0; i < fam.copies.size(); ++i) {
      auto alg = algorithm();
      const auto trace = run_online(fam.copies[i], *alg, policy, fam.run_seed, options);
      const bool ok = static_cast<int>(trace.final_size()) >= k;
      all = all && ok;
      if (i == 0) base_ok = ok;
    }
    return Outcome{all, base_ok};
  });

  SuccessEstimate est;
  est.trials = trials;
  est.m = m;
  est.k = k;
  std::size_t s = 0, e = 0;
  for (const auto& o : outcomes) {
    s += o.s ? 1 : 0;
    e += o.e ? 1 : 0;
  }
  const auto nt = static_cast<double>(trials);
  est.p_hat_S = static_cast<double>(s) / nt;
  est.p_hat_E = static_cast<double>(e) / nt;
  est.stderr_S = std::sqrt(est.p_hat_S * (1.0 - est.p_hat_S) / nt);
  est.stderr_E = std::sqrt(est.p_hat_E * (1.0 - est.p_hat_E) / nt);
  const double slope = static_cast<double>(m) * std::pow(est.p_hat_E, static_cast<double>(m) - 1.0);
  est.combined_stderr = std::sqrt(est.stderr_S * est.stderr_S + slope * slope * est.stderr_E * est.stderr_E);
  return est;
}

std::pair<int, int> overlap_profile(const BalancedSet& a, const BalancedSet& b) {
  return {static_cast<int>(a.lpart.intersection_count(b.lpart)), static_cast<int>(a.rpart.intersection_count(b.rpart))};
}

OverlapHistogram overlap_histogram(const BipartiteGraph& g, const Gamma& gamma, int alpha, int size_slack) {
  if (g.n() > kMaxHistogramN)
    throw GuardError("overlap histogram limited to n <= " + std::to_string(kMaxHistogramN));
  if (size_slack < 0) throw ConfigError("size slack must be nonnegative");
  std::vector<BalancedSet> sets;
  oracle::for_each_balanced_independent_set(g, gamma, alpha - size_slack, alpha,
                                            [&](const BalancedSet& s) { sets.push_back(s); });
  OverlapHistogram hist;
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j) ++hist[overlap_profile(sets[i], sets[j])];
  return hist;
}

bool in_size_range(const ForbiddenTupleQuery& query, const Params& params) {
  const auto th = compute_thresholds(params);
  const double lo = (1.0 + params.epsilon) * th.alpha_comp;
  for (int a : query.a)
    if (static_cast<double>(a) < lo - 1e-9 || a > static_cast<int>(2 * params.n)) return false;
  return true;
}

std::uint64_t count_forbidden_tuples(const CorrelatedFamily& family, const ForbiddenTupleQuery& query,
                                     const Gamma& gamma, int tau_target) {
  const auto n = family.base.n();
  if (n > kMaxForbiddenN) throw GuardError("forbidden-tuple counting limited to n <= " + std::to_string(kMaxForbiddenN));
  if (family.m() > kMaxForbiddenM)
    throw GuardError("forbidden-tuple counting limited to m <= " + std::to_string(kMaxForbiddenM));
  if (query.a.size() != family.m()) throw ConfigError("query needs one size a_i per copy");
  for (int a : query.a)
    if (a < 0 || a > static_cast<int>(2 * n)) throw ConfigError("a_i must lie in [0, 2n]");
  if (query.beta < 0) throw ConfigError("beta must be nonnegative");

  const auto& vl = family.ledger.exposed_L;
  const auto& vr = family.ledger.exposed_R;
  const Side eta = query.eta;

  // Key: the trace I ∩ V_A(T) as (L bits, R bits).
  using Key = std::pair<std::uint64_t, std::uint64_t>;
  auto key_of = [&](const BalancedSet& s) {
    std::uint64_t kl = 0, kr = 0;
    s.lpart.for_each([&](std::size_t u) { if (vl.test(u)) kl |= std::uint64_t{1} << u; });
    s.rpart.for_each([&](std::size_t v) { if (vr.test(v)) kr |= std::uint64_t{1} << v; });
    return Key{kl, kr};
  };
  auto trace_ok = [&](const Key& k) {
    const int on_eta = std::popcount(eta == Side::L ? k.first : k.second);
    const int off_eta = std::popcount(eta == Side::L ? k.second : k.first);
    return on_eta == tau_target && off_eta == query.beta;
  };

  std::vector<std::map<Key, std::uint64_t>> per_copy(family.m());
  for (std::size_t i = 0; i < family.m(); ++i) {
    const int a = query.a[i];
    if (a == 0) {
      if (trace_ok(Key{0, 0}) && is_gamma_balanced(0, 0, gamma)) ++per_copy[i][Key{0, 0}];
      continue;
    }
    oracle::for_each_balanced_independent_set(family.copies[i], gamma, a, a, [&](const BalancedSet& s) {
      const auto k = key_of(s);
      if (trace_ok(k)) ++per_copy[i][k];
    });
  }

  std::uint64_t total = 0;
  for (const auto& [k, c0] : per_copy[0]) {
    std::uint64_t prod = c0;
    for (std::size_t i = 1; i < per_copy.size() && prod != 0; ++i) {
      auto it = per_copy[i].find(k);
      prod = it == per_copy[i].end() ? 0 : prod * it->second;
    }
    total += prod;
  }
  return total;
}

}  // namespace balis::ogp
