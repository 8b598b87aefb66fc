#include "balis/seed.hpp"

#include <charconv>

#include "balis/error.hpp"

namespace balis {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ConfigError("invalid " + std::string(what) + " in seed path: '" + std::string(s) + "'");
  return v;
}

}  // namespace

Seed::Seed(std::uint64_t master) : master_(master), value_(mix64(master ^ 0x6a09e667f3bcc908ULL)) {}

Seed Seed::derive(std::string_view label, std::uint64_t index) const {
  if (label.empty()) throw ConfigError("seed derivation label must be nonempty");
  if (label.find_first_of("/:") != std::string_view::npos)
    throw ConfigError("seed derivation label may not contain '/' or ':'");
  Seed out = *this;
  out.path_.push_back({std::string(label), index});
  std::uint64_t h = mix64(value_ ^ fnv1a(label));
  out.value_ = mix64(h + (index + 1) * 0x9e3779b97f4a7c15ULL);
  return out;
}

std::string Seed::to_string() const {
  std::string s = std::to_string(master_);
  for (const auto& step : path_) {
    s += '/';
    s += step.label;
    s += ':';
    s += std::to_string(step.index);
  }
  return s;
}

Seed Seed::parse(std::string_view text) {
  auto slash = text.find('/');
  Seed seed(parse_u64(text.substr(0, slash), "master"));
  while (slash != std::string_view::npos) {
    text = text.substr(slash + 1);
    slash = text.find('/');
    auto part = text.substr(0, slash);
    auto colon = part.find(':');
    if (colon == std::string_view::npos) throw ConfigError("seed path step lacks ':'");
    seed = seed.derive(part.substr(0, colon), parse_u64(part.substr(colon + 1), "index"));
  }
  return seed;
}

std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t bound) {
  if (bound == 0) return 0;
  unsigned __int128 m = static_cast<unsigned __int128>(engine()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(engine()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace balis
