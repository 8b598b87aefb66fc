#include "balis/online.hpp"

#include "json.hpp"
#include <ostream>

#include "balis/error.hpp"

namespace balis {

ArrivalPolicy ArrivalPolicy::parse(const std::string& name) {
  if (name == "uniform-random" || name == "uniform") return uniform();
  if (name == "l-first") return l_first();
  if (name == "r-first") return r_first();
  if (name == "alternating") return alternating();
  throw ConfigError("unknown arrival policy '" + name + "' (expected uniform-random, l-first, r-first, alternating)");
}

std::string ArrivalPolicy::name() const {
  switch (kind) {
    case PolicyKind::UniformRandom: return "uniform-random";
    case PolicyKind::LFirst: return "l-first";
    case PolicyKind::RFirst: return "r-first";
    case PolicyKind::Alternating: return "alternating";
    case PolicyKind::FixedSequence: return "fixed-sequence";
  }
  return "?";
}

void ArrivalPolicy::validate(std::uint32_t n) const {
  if (kind != PolicyKind::FixedSequence) return;
  if (sequence.size() != 2 * static_cast<std::size_t>(n))
    throw ConfigError("fixed arrival sequence must list all 2n vertices");
  std::array<Bitset, 2> seen{Bitset(n), Bitset(n)};
  for (auto v : sequence) {
    auto& s = seen[static_cast<std::size_t>(v.side)];
    if (v.id >= n || s.test(v.id)) throw ConfigError("fixed arrival sequence is not a permutation of the 2n vertices");
    s.set(v.id);
  }
}

ArrivalStream::ArrivalStream(const ArrivalPolicy& policy, std::uint32_t n, const Seed& seed)
    : kind_(policy.kind), n_(n), engine_(seed.derive("arrival", 0).engine()) {
  policy.validate(n);
  if (kind_ == PolicyKind::FixedSequence) {
    fixed_ = policy.sequence;
  } else if (kind_ == PolicyKind::UniformRandom) {
    pool_.resize(2 * static_cast<std::size_t>(n));
    for (std::uint32_t i = 0; i < pool_.size(); ++i) pool_[i] = i;
  }
}

Vertex ArrivalStream::decode(std::uint32_t code) const {
  return code < n_ ? Vertex{Side::L, code} : Vertex{Side::R, code - n_};
}

Vertex ArrivalStream::next() {
  if (done()) throw ContractViolation("arrival stream exhausted");
  const std::size_t t = emitted_++;
  switch (kind_) {
    case PolicyKind::UniformRandom: {
      const auto j = t + uniform_below(engine_, pool_.size() - t);
      std::swap(pool_[t], pool_[j]);
      return decode(pool_[t]);
    }
    case PolicyKind::LFirst:
      return decode(static_cast<std::uint32_t>(t));
    case PolicyKind::RFirst:
      return t < n_ ? Vertex{Side::R, static_cast<std::uint32_t>(t)} : Vertex{Side::L, static_cast<std::uint32_t>(t - n_)};
    case PolicyKind::Alternating:
      // Sides have equal size, so strict alternation never exhausts one early.
      return Vertex{t % 2 == 0 ? Side::L : Side::R, static_cast<std::uint32_t>(t / 2)};
    case PolicyKind::FixedSequence:
      return fixed_[t];
  }
  throw ContractViolation("unknown arrival policy");
}

std::vector<Vertex> arrival_sequence(const ArrivalPolicy& policy, std::uint32_t n, const Seed& seed) {
  ArrivalStream stream(policy, n, seed);
  std::vector<Vertex> out;
  out.reserve(2 * static_cast<std::size_t>(n));
  while (!stream.done()) out.push_back(stream.next());
  return out;
}

LedgerView::LedgerView(const EdgeSource& g) : graph_(&g), exposed_{Bitset(g.n()), Bitset(g.n())} {}

void LedgerView::expose(Vertex v) {
  exposed_[idx(v.side)].set(v.id);
  ++step_;
}

bool LedgerView::edge(Vertex a, Vertex b) const {
  if (a.side == b.side) throw ContractViolation("same-side pair has no edge slot");
  if (a.id >= n() || b.id >= n()) throw ContractViolation("vertex id out of range");
  if (!exposed(a) || !exposed(b)) throw ContractViolation("pair is not revealed: an endpoint is unexposed");
  return a.side == Side::L ? graph_->has_edge(a.id, b.id) : graph_->has_edge(b.id, a.id);
}

Vertex OnlineAlgorithm::select_arrival(const LedgerView&, const SetState&) {
  throw ContractViolation("algorithm does not select its own arrivals");
}

class OnlineRunner {
 public:
  static RunTrace run(const EdgeSource& g, OnlineAlgorithm& algorithm, const ArrivalPolicy& policy,
                      const Seed& seed, const RunOptions& options) {
    const auto n = g.n();
    const std::size_t rounds = 2 * static_cast<std::size_t>(n);
    const bool self_select = algorithm.selects_arrivals();
    std::optional<ArrivalStream> stream;
    if (!self_select) stream.emplace(policy, n, seed);

    LedgerView ledger(g);
    SetState current;
    RunTrace trace;
    trace.n = n;
    trace.arrivals.reserve(rounds);
    trace.accepted.reserve(rounds);
    trace.sizes.reserve(rounds);
    trace.final_set = BalancedSet(n);

    algorithm.start(n, seed.derive("algorithm", 0));
    for (std::size_t t = 1; t <= rounds; ++t) {
      Vertex v = self_select ? algorithm.select_arrival(ledger, current) : stream->next();
      if (v.id >= n || ledger.exposed(v)) throw ContractViolation("selected vertex is out of range or already exposed");
      ledger.expose(v);
      const bool accept = algorithm.decide(ledger, current, v);
      if (accept) {
        current.members_[SetState::idx(v.side)].push_back(v.id);
        trace.final_set.part(v.side).set(v.id);
      }
      trace.arrivals.push_back(v);
      trace.accepted.push_back(accept ? 1 : 0);
      trace.sizes.push_back({static_cast<std::uint32_t>(current.count(Side::L)),
                             static_cast<std::uint32_t>(current.count(Side::R))});
    }

    trace.T_f = trace.sentinel();
    trace.T_b = trace.sentinel();
    trace.tau = options.tau_target ? stopping_time_tau(trace, *options.tau_target) : rounds;
    const auto& at_tau = trace.sizes[trace.tau - 1];
    trace.majority = at_tau[0] > at_tau[1] ? Side::L : Side::R;
    algorithm.annotate(trace);
    return trace;
  }
};

RunTrace run_online(const EdgeSource& g, OnlineAlgorithm& algorithm, const ArrivalPolicy& policy, const Seed& seed,
                    const RunOptions& options) {
  return OnlineRunner::run(g, algorithm, policy, seed, options);
}

std::size_t stopping_time_tau(const RunTrace& trace, int tau_target) {
  for (std::size_t t = 0; t < trace.sizes.size(); ++t) {
    const auto& s = trace.sizes[t];
    if (static_cast<int>(std::max(s[0], s[1])) >= tau_target) return t + 1;
  }
  return trace.rounds();
}

RevealedLedger ledger_at(const RunTrace& trace, const EdgeSource& g, std::size_t T) {
  if (T > trace.arrivals.size()) throw ConfigError("ledger step T out of range [0, 2n]");
  RevealedLedger ledger{Bitset(trace.n), Bitset(trace.n), {}};
  for (std::size_t t = 0; t < T; ++t) {
    const auto v = trace.arrivals[t];
    (v.side == Side::L ? ledger.exposed_L : ledger.exposed_R).set(v.id);
  }
  ledger.revealed.reserve(ledger.exposed_L.count() * ledger.exposed_R.count());
  ledger.exposed_L.for_each([&](std::size_t u) {
    ledger.exposed_R.for_each([&](std::size_t v) {
      const auto uu = static_cast<std::uint32_t>(u), vv = static_cast<std::uint32_t>(v);
      ledger.revealed.push_back({uu, vv, g.has_edge(uu, vv)});
    });
  });
  return ledger;
}

void write_trace_jsonl(const RunTrace& trace, std::ostream& out) {
  using nlohmann::ordered_json;
  for (std::size_t t = 0; t < trace.arrivals.size(); ++t) {
    ordered_json rec;
    rec["t"] = t + 1;
    rec["vertex"] = trace.arrivals[t].id;
    rec["side"] = std::string(1, side_char(trace.arrivals[t].side));
    rec["accepted"] = trace.accepted[t] != 0;
    rec["sizeL"] = trace.sizes[t][0];
    rec["sizeR"] = trace.sizes[t][1];
    out << rec.dump() << '\n';
  }
  ordered_json summary;
  summary["T_f"] = trace.T_f;
  summary["T_b"] = trace.T_b;
  summary["tau"] = trace.tau;
  summary["majority"] = std::string(1, side_char(trace.majority));
  summary["final_size"] = trace.final_size();
  out << summary.dump() << '\n';
}

}  // namespace balis
