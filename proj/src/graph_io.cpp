#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "balis/error.hpp"
#include "balis/graph.hpp"

namespace balis {

namespace {

constexpr std::string_view kMagic = "balis-graph v1";

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

template <class T>
T parse_number(std::string_view s, std::size_t line_no) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw FormatError("line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
  return v;
}

std::string_view field(std::string_view token, std::string_view key, std::size_t line_no) {
  if (token.substr(0, key.size()) != key || token.size() <= key.size() || token[key.size()] != '=')
    throw FormatError("line " + std::to_string(line_no) + ": malformed header, expected '" + std::string(key) + "='");
  return token.substr(key.size() + 1);
}

}  // namespace

void save_graph(const BipartiteGraph& g, std::ostream& sink) {
  const auto& prov = g.provenance();
  sink << kMagic << '\n';
  sink << "n=" << g.n() << " p=" << (prov.p ? format_double(*prov.p) : std::string("none"))
       << " seed=" << (prov.seed ? std::to_string(*prov.seed) : std::string("none")) << '\n';
  for (std::uint32_t u = 0; u < g.n(); ++u)
    g.row(u).for_each([&](std::size_t v) { sink << u << ' ' << v << '\n'; });
}

BipartiteGraph load_graph(std::istream& source) {
  std::string line;
  if (!std::getline(source, line) || line != kMagic) throw FormatError("line 1: malformed header, expected 'balis-graph v1'");
  if (!std::getline(source, line)) throw FormatError("line 2: malformed header, missing parameter line");

  std::string_view hdr = line;
  auto s1 = hdr.find(' ');
  auto s2 = s1 == std::string_view::npos ? s1 : hdr.find(' ', s1 + 1);
  if (s2 == std::string_view::npos || hdr.find(' ', s2 + 1) != std::string_view::npos)
    throw FormatError("line 2: malformed header, expected 'n=<int> p=<decimal> seed=<uint64|none>'");

  const auto n = parse_number<std::uint32_t>(field(hdr.substr(0, s1), "n", 2), 2);
  if (n < 1) throw FormatError("line 2: malformed header, n must be positive");
  Provenance prov;
  prov.loaded_from_file = true;
  if (auto p_text = field(hdr.substr(s1 + 1, s2 - s1 - 1), "p", 2); p_text != "none") {
    const auto p = parse_number<double>(p_text, 2);
    if (!(p >= 0.0 && p <= 1.0)) throw FormatError("line 2: malformed header, p outside [0, 1]");
    prov.p = p;
  }
  if (auto seed_text = field(hdr.substr(s2 + 1), "seed", 2); seed_text != "none")
    prov.seed = parse_number<std::uint64_t>(seed_text, 2);

  std::vector<Bitset> rows(n, Bitset(n));
  std::size_t line_no = 2;
  std::uint64_t last_key = 0;
  bool have_last = false;
  while (std::getline(source, line)) {
    ++line_no;
    std::string_view sv = line;
    const auto sp = sv.find(' ');
    if (sp == std::string_view::npos) throw FormatError("line " + std::to_string(line_no) + ": expected 'u v'");
    const auto u = parse_number<std::uint64_t>(sv.substr(0, sp), line_no);
    const auto v = parse_number<std::uint64_t>(sv.substr(sp + 1), line_no);
    if (u >= n || v >= n) throw FormatError("line " + std::to_string(line_no) + ": vertex id out of range");
    if (rows[u].test(v)) throw FormatError("line " + std::to_string(line_no) + ": duplicate edge line");
    const std::uint64_t key = u * n + v;
    if (have_last && key < last_key)
      throw FormatError("line " + std::to_string(line_no) + ": edge lines not in ascending order");
    last_key = key;
    have_last = true;
    rows[u].set(v);
  }
  return BipartiteGraph(n, std::move(rows), prov);
}

}  // namespace balis
