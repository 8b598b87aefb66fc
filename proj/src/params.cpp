#include "balis/params.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "balis/error.hpp"

namespace balis {

namespace {

constexpr std::int64_t kMaxDenominator = 64;
constexpr double kFractionTolerance = 1e-12;

std::optional<Gamma::Fraction> detect_fraction(double value) {
  for (std::int64_t den = 1; den <= kMaxDenominator; ++den) {
    auto num = static_cast<std::int64_t>(std::llround(value * static_cast<double>(den)));
    if (num > 0 && std::abs(static_cast<double>(num) / static_cast<double>(den) - value) <= kFractionTolerance)
      return Gamma::Fraction{num, den};
  }
  return std::nullopt;
}

}  // namespace

Gamma::Gamma(double value) : value_(value) {
  if (!(value > 0.0 && value < 1.0)) throw ConfigError("gamma must lie in (0, 1), got " + std::to_string(value));
  fraction_ = detect_fraction(value);
}

Gamma::Gamma(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num <= 0 || num >= den) throw ConfigError("gamma fraction must lie in (0, 1)");
  const auto g = std::gcd(num, den);
  num /= g;
  den /= g;
  value_ = static_cast<double>(num) / static_cast<double>(den);
  if (den <= kMaxDenominator)
    fraction_ = Fraction{num, den};
}

Gamma Gamma::parse(const std::string& text) {
  if (auto slash = text.find('/'); slash != std::string::npos) {
    try {
      std::size_t pos_num = 0, pos_den = 0;
      const auto num_text = text.substr(0, slash);
      const auto den_text = text.substr(slash + 1);
      const auto num = std::stoll(num_text, &pos_num);
      const auto den = std::stoll(den_text, &pos_den);
      if (pos_num != num_text.size() || pos_den != den_text.size()) throw ConfigError("bad gamma: " + text);
      return Gamma(num, den);
    } catch (const std::logic_error&) {
      throw ConfigError("bad gamma: " + text);
    }
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw ConfigError("bad gamma: " + text);
    return Gamma(v);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::logic_error&) {
    throw ConfigError("bad gamma: " + text);
  }
}

Gamma Gamma::complement() const {
  if (fraction_) return Gamma(fraction_->den - fraction_->num, fraction_->den);
  return Gamma(1.0 - value_);
}

std::string Gamma::to_string() const {
  if (fraction_) return std::to_string(fraction_->num) + "/" + std::to_string(fraction_->den);
  return std::to_string(value_);
}

double Params::log_b_n() const {
  // log2 keeps p = 1/2 and n a power of two exact.
  return std::log2(static_cast<double>(n)) / -std::log2(1.0 - p);
}

void Params::validate() const {
  if (n < 1) throw ConfigError("n must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
  if (gamma.value() > 0.5)
    throw ConfigError("gamma must lie in (0, 1/2]; for gamma > 1/2 swap the sides L and R and use 1 - gamma");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  if (const double m = mu_or_default(); !(m > 0.0 && m < 1.0)) throw ConfigError("mu must lie in (0, 1)");
}

bool is_gamma_balanced(std::uint64_t l_count, std::uint64_t r_count, const Gamma& gamma) {
  const std::uint64_t total = l_count + r_count;
  if (const auto& f = gamma.fraction()) {
    // |l − (num/den)·total| < 1  ⇔  |l·den − num·total| < den
    const auto scaled_total = static_cast<__int128>(f->num) * total;
    auto off = [&](std::uint64_t side) {
      auto d = static_cast<__int128>(side) * f->den - scaled_total;
      return d < 0 ? -d : d;
    };
    return off(l_count) < f->den || off(r_count) < f->den;
  }
  const double target = gamma.value() * static_cast<double>(total);
  return std::abs(static_cast<double>(l_count) - target) < 1.0 ||
         std::abs(static_cast<double>(r_count) - target) < 1.0;
}

long long floor_tolerant(double x) { return static_cast<long long>(std::floor(x + 1e-9)); }

Thresholds compute_thresholds(const Params& params) {
  params.validate();
  if (params.n < 2) throw ConfigError("thresholds need n >= 2");
  if (params.p <= 0.0 || params.p >= 1.0) throw ConfigError("thresholds need p in (0, 1); b = 1/(1-p) is undefined otherwise");

  const double log_b_n = params.log_b_n();
  const double g = params.gamma.value();

  Thresholds th;
  th.alpha_stat = log_b_n / (g * (1.0 - g));
  th.alpha_comp = log_b_n / g;
  th.t1 = static_cast<int>(std::max(1LL, floor_tolerant((1.0 - params.epsilon) * log_b_n)));

  long long cap = 0;
  if (const auto& f = params.gamma.fraction())
    cap = (f->den - f->num) * th.t1 / f->num;
  else
    cap = floor_tolerant((1.0 - g) / g * th.t1);

  th.t2 = 0;
  for (long long r = cap; r >= 1; --r) {
    if (is_gamma_balanced(static_cast<std::uint64_t>(th.t1), static_cast<std::uint64_t>(r), params.gamma)) {
      th.t2 = static_cast<int>(r);
      break;
    }
  }
  if (th.t2 == 0)
    throw ConfigError("no stage-two target r >= 1 is balanced with t1 = " + std::to_string(th.t1) +
                      "; the gamma/epsilon combination is degenerate");

  th.tau_target = static_cast<int>(std::max(1LL, floor_tolerant((1.0 - params.mu_or_default()) * log_b_n)));
  return th;
}

}  // namespace balis
