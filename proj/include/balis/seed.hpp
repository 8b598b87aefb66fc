#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace balis {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// The k-th output of a splitmix64 stream started at `state`. Random access, so
/// the stream can be read at any index without replaying the prefix.
constexpr std::uint64_t splitmix_at(std::uint64_t state, std::uint64_t k) {
  return mix64(state + (k + 1) * 0x9e3779b97f4a7c15ULL);
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

/// A master seed plus a derivation path. Every random quantity in the library is
/// a pure function of some Seed, which is what makes runs replayable.
class Seed {
 public:
  struct Step {
    std::string label;
    std::uint64_t index;
    friend bool operator==(const Step&, const Step&) = default;
  };

  Seed() : Seed(0) {}
  explicit Seed(std::uint64_t master);

  std::uint64_t master() const { return master_; }
  const std::vector<Step>& path() const { return path_; }

  /// 64-bit value of this seed; a pure function of (master, path).
  std::uint64_t value() const { return value_; }

  /// Appends (label, index) to the path. `label` must be nonempty.
  Seed derive(std::string_view label, std::uint64_t index) const;

  /// Engine seeded from value(). std::mt19937_64's output sequence is fixed by the
  /// standard, so this is portable.
  std::mt19937_64 engine() const { return std::mt19937_64{value_}; }

  /// "7/trial:3/graph:0"
  std::string to_string() const;
  static Seed parse(std::string_view text);

  friend bool operator==(const Seed& a, const Seed& b) {
    return a.master_ == b.master_ && a.path_ == b.path_;
  }

 private:
  std::uint64_t master_;
  std::vector<Step> path_;
  std::uint64_t value_;
};

inline Seed derive_subseed(const Seed& seed, std::string_view label, std::uint64_t index) {
  return seed.derive(label, index);
}

/// Unbiased integer in [0, bound) (Lemire's multiply-shift with rejection).
/// std::uniform_int_distribution is implementation-defined, so it is avoided.
std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t bound);

}  // namespace balis
