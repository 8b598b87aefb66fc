#include "balis/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "balis/error.hpp"

namespace balis::moments {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("p must lie in (0, 1)");
}

std::int64_t gamma_denominator(const Gamma& gamma) {
  if (!gamma.fraction())
    throw ConfigError("gamma " + gamma.to_string() + " is not a fraction with denominator <= 64; no integer split exists");
  return gamma.fraction()->den;
}

/// ln P(|A ∩ B| = i) for A a fixed k-subset and B a uniform k-subset of an n-set.
/// Written with log1p so weights near 1 keep full relative precision.
double log_overlap_weight(std::uint64_t n, int k, int i) {
  const auto nn = static_cast<double>(n);
  double acc = 0.0;
  // C(k, i) · k!/(k−i)!
  acc += log_binomial(static_cast<std::uint64_t>(k), i);
  for (int j = 0; j < i; ++j) acc += std::log(static_cast<double>(k - j));
  // (n−k)_{(k−i)} / (n)_{(k)}
  for (int j = 0; j < k - i; ++j) {
    const double ratio = static_cast<double>(k) / (nn - j);
    if (ratio >= 1.0) return kNegInf;
    acc += std::log1p(-ratio);
  }
  for (int j = k - i; j < k; ++j) acc -= std::log(nn - j);
  return acc;
}

std::vector<double> log_overlap_weights(std::uint64_t n, int k) {
  std::vector<double> w(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) w[i] = log_overlap_weight(n, k, i);
  return w;
}

IntegerSplit checked_split(std::uint64_t n, const Gamma& gamma, int alpha) {
  auto split = integer_split(alpha, gamma);
  if (static_cast<std::uint64_t>(split.gamma_side) > n || static_cast<std::uint64_t>(split.other_side) > n)
    throw ConfigError("split of alpha = " + std::to_string(alpha) + " exceeds n = " + std::to_string(n));
  return split;
}

}  // namespace

IntegerSplit integer_split(int alpha, const Gamma& gamma) {
  if (alpha < 0) throw ConfigError("alpha must be nonnegative");
  IntegerSplit s;
  s.alpha = alpha;
  if (const auto& f = gamma.fraction()) {
    if ((static_cast<std::int64_t>(alpha) * f->num) % f->den != 0) {
      std::ostringstream msg;
      msg << "non-integer split: alpha*gamma = " << alpha << "*" << gamma.to_string() << " = "
          << static_cast<double>(alpha) * gamma.value() << " is not an integer";
      throw ConfigError(msg.str());
    }
    s.gamma_side = static_cast<int>(static_cast<std::int64_t>(alpha) * f->num / f->den);
  } else {
    const double prod = alpha * gamma.value();
    const double r = std::round(prod);
    if (std::abs(prod - r) > 1e-9) {
      std::ostringstream msg;
      msg << "non-integer split: alpha*gamma = " << prod << " is not an integer";
      throw ConfigError(msg.str());
    }
    s.gamma_side = static_cast<int>(r);
  }
  s.other_side = alpha - s.gamma_side;
  return s;
}

int nearest_feasible_alpha(double alpha, const Gamma& gamma) {
  const auto den = gamma_denominator(gamma);
  const auto k = std::max<long long>(1, std::llround(alpha / static_cast<double>(den)));
  return static_cast<int>(k * den);
}

double log_binomial(std::uint64_t n, std::int64_t k) {
  if (k < 0 || static_cast<std::uint64_t>(k) > n) return kNegInf;
  const std::uint64_t m = std::min<std::uint64_t>(static_cast<std::uint64_t>(k), n - static_cast<std::uint64_t>(k));
  if (m <= 256) {
    double acc = 0.0;
    for (std::uint64_t j = 0; j < m; ++j) acc += std::log(static_cast<double>(n - j) / static_cast<double>(j + 1));
    return acc;
  }
  const auto nn = static_cast<double>(n);
  const auto kk = static_cast<double>(k);
  return std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1);
}

double log_first_moment(std::uint64_t n, double p, const Gamma& gamma, int alpha) {
  check_p(p);
  const auto s = checked_split(n, gamma, alpha);
  const double cross_pairs = static_cast<double>(s.gamma_side) * s.other_side;  // γ(1−γ)α²
  return log_binomial(n, s.gamma_side) + log_binomial(n, s.other_side) + cross_pairs * std::log1p(-p);
}

int alpha_epsilon(std::uint64_t n, double p, const Gamma& gamma, double epsilon) {
  check_p(p);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  const double g = gamma.value();
  const double log_b_n = std::log2(static_cast<double>(n)) / -std::log2(1.0 - p);
  return nearest_feasible_alpha((1.0 - epsilon) * log_b_n / (g * (1.0 - g)), gamma);
}

double second_moment_ratio_at(std::uint64_t n, double p, const Gamma& gamma, int alpha_eps) {
  check_p(p);
  const auto s = checked_split(n, gamma, alpha_eps);
  const auto w1 = log_overlap_weights(n, s.gamma_side);
  const auto w2 = log_overlap_weights(n, s.other_side);
  const double log_b = -std::log1p(-p);

  std::vector<double> terms;
  terms.reserve(w1.size() * w2.size());
  double top = kNegInf;
  for (int i1 = 0; i1 <= s.gamma_side; ++i1)
    for (int i2 = 0; i2 <= s.other_side; ++i2) {
      const double t = w1[i1] + w2[i2] + static_cast<double>(i1) * i2 * log_b;
      terms.push_back(t);
      top = std::max(top, t);
    }
  double sum = 0.0;
  for (double t : terms)
    if (t != kNegInf) sum += std::exp(t - top);
  return std::exp(top) * sum;
}

double second_moment_ratio(std::uint64_t n, double p, const Gamma& gamma, double epsilon) {
  return second_moment_ratio_at(n, p, gamma, alpha_epsilon(n, p, gamma, epsilon));
}

double log_overlap_exponent_q_at(std::uint64_t n, double p, const Gamma& gamma, int alpha_eps, int i1, int i2) {
  check_p(p);
  const auto s = integer_split(alpha_eps, gamma);
  if (i1 < 0 || i2 < 0 || i1 > s.gamma_side || i2 > s.other_side)
    throw ConfigError("overlap (" + std::to_string(i1) + ", " + std::to_string(i2) + ") outside [0, " +
                      std::to_string(s.gamma_side) + "] x [0, " + std::to_string(s.other_side) + "]");
  const double rate = std::log(static_cast<double>(n)) - 2.0 * std::log(static_cast<double>(alpha_eps));
  return -(i1 + i2) * rate + static_cast<double>(i1) * i2 * -std::log1p(-p);
}

double log_overlap_exponent_q(std::uint64_t n, double p, const Gamma& gamma, double epsilon, int i1, int i2) {
  return log_overlap_exponent_q_at(n, p, gamma, alpha_epsilon(n, p, gamma, epsilon), i1, i2);
}

double overlap_exponent_q(std::uint64_t n, double p, const Gamma& gamma, double epsilon, int i1, int i2) {
  return std::exp(log_overlap_exponent_q(n, p, gamma, epsilon, i1, i2));
}

double QGrid::max_off_origin() const {
  double best = kNegInf;
  for (int i1 = 0; i1 <= max_i1; ++i1)
    for (int i2 = 0; i2 <= max_i2; ++i2)
      if (i1 != 0 || i2 != 0) best = std::max(best, log_at(i1, i2));
  return std::exp(best);
}

QGrid q_grid_at(std::uint64_t n, double p, const Gamma& gamma, int alpha_eps) {
  const auto s = integer_split(alpha_eps, gamma);
  QGrid grid;
  grid.alpha_eps = alpha_eps;
  grid.max_i1 = s.gamma_side;
  grid.max_i2 = s.other_side;
  grid.log_q.reserve(static_cast<std::size_t>(s.gamma_side + 1) * (s.other_side + 1));
  for (int i1 = 0; i1 <= s.gamma_side; ++i1)
    for (int i2 = 0; i2 <= s.other_side; ++i2)
      grid.log_q.push_back(log_overlap_exponent_q_at(n, p, gamma, alpha_eps, i1, i2));
  return grid;
}

QGrid q_grid(std::uint64_t n, double p, const Gamma& gamma, double epsilon) {
  return q_grid_at(n, p, gamma, alpha_epsilon(n, p, gamma, epsilon));
}

int first_moment_crossing(std::uint64_t n, double p, const Gamma& gamma, double threshold) {
  check_p(p);
  if (!(threshold > 0.0)) throw ConfigError("threshold must be positive");
  const auto step = gamma_denominator(gamma);
  const double log_threshold = std::log(threshold);
  for (std::int64_t alpha = step;; alpha += step) {
    const auto s = integer_split(static_cast<int>(alpha), gamma);
    if (static_cast<std::uint64_t>(s.gamma_side) > n || static_cast<std::uint64_t>(s.other_side) > n) break;
    if (log_first_moment(n, p, gamma, static_cast<int>(alpha)) <= log_threshold) return static_cast<int>(alpha);
  }
  throw ConfigError("no feasible alpha has first moment below the threshold");
}

MomentReport moment_report(std::uint64_t n, double p, const Gamma& gamma, double epsilon) {
  MomentReport r;
  r.alpha_eps = alpha_epsilon(n, p, gamma, epsilon);
  r.log_first_moment = log_first_moment(n, p, gamma, r.alpha_eps);
  r.ratio = second_moment_ratio_at(n, p, gamma, r.alpha_eps);
  r.q_grid = q_grid_at(n, p, gamma, r.alpha_eps);
  r.crossing_alpha = first_moment_crossing(n, p, gamma, 1.0);
  return r;
}

}  // namespace balis::moments
