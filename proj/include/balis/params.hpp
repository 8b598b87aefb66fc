#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace balis {

/// Balance fraction γ. Values within 1e-12 of a fraction with denominator ≤ 64
/// carry that fraction, and the balance predicate then runs in exact integer
/// arithmetic.
class Gamma {
 public:
  struct Fraction {
    std::int64_t num;
    std::int64_t den;
  };

  /// Accepts any γ in (0, 1); the range (0, 1/2] is enforced by Params.
  explicit Gamma(double value);
  Gamma(std::int64_t num, std::int64_t den);

  /// Parses "0.5", "1/3".
  static Gamma parse(const std::string& text);

  double value() const { return value_; }
  const std::optional<Fraction>& fraction() const { return fraction_; }

  /// 1 − γ, i.e. γ seen from the other side.
  Gamma complement() const;

  std::string to_string() const;

 private:
  double value_;
  std::optional<Fraction> fraction_;
};

/// Model and algorithm parameters.
struct Params {
  std::uint32_t n = 0;
  double p = 0.5;
  Gamma gamma{1, 2};
  double epsilon = 0.1;
  /// Defaults to ε²/2.
  std::optional<double> mu;

  double mu_or_default() const { return mu ? *mu : epsilon * epsilon / 2.0; }
  /// b = 1/(1−p); requires p < 1.
  double b() const { return 1.0 / (1.0 - p); }
  /// log_b n.
  double log_b_n() const;

  /// Throws ConfigError when any field is out of range. p ∈ {0,1} passes here
  /// (graph generation allows it); compute_thresholds rejects it separately.
  void validate() const;
};

/// |l − γ(l+r)| < 1 or |r − γ(l+r)| < 1.
bool is_gamma_balanced(std::uint64_t l_count, std::uint64_t r_count, const Gamma& gamma);

struct Thresholds {
  double alpha_stat = 0;
  double alpha_comp = 0;
  /// Stage-one per-side target.
  int t1 = 0;
  /// Stage-two target for the deficient side.
  int t2 = 0;
  /// Side count that defines the stopping time τ.
  int tau_target = 0;
};

Thresholds compute_thresholds(const Params& params);

/// floor(x), tolerant of x landing a few ulps below an integer (e.g. 0.8·10).
long long floor_tolerant(double x);

}  // namespace balis
