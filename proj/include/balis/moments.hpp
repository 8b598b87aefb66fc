#pragma once

#include <cstdint>
#include <vector>

#include "balis/params.hpp"

namespace balis::moments {

/// α split into the γ-side count αγ and the other-side count α(1−γ).
struct IntegerSplit {
  int alpha = 0;
  int gamma_side = 0;
  int other_side = 0;
};

/// Throws ConfigError naming the offending product when αγ is not an integer.
IntegerSplit integer_split(int alpha, const Gamma& gamma);

/// Nearest α ≥ 1 whose split is integral (a multiple of γ's denominator).
int nearest_feasible_alpha(double alpha, const Gamma& gamma);

/// ln C(n, k); −∞ outside 0 ≤ k ≤ n.
double log_binomial(std::uint64_t n, std::int64_t k);

/// ln E[Z_α] = ln[C(n, αγ) C(n, α(1−γ)) (1−p)^{γ(1−γ)α²}].
double log_first_moment(std::uint64_t n, double p, const Gamma& gamma, int alpha);

/// α_ε = (1−ε)α_STAT rounded to the nearest integral split.
int alpha_epsilon(std::uint64_t n, double p, const Gamma& gamma, double epsilon);

/// E[Z²]/E[Z]² at size α_ε as the exact finite-n double sum over overlaps
/// (i₁, i₂) of hypergeometric overlap weights times (1−p)^{−i₁i₂}.
double second_moment_ratio(std::uint64_t n, double p, const Gamma& gamma, double epsilon);
double second_moment_ratio_at(std::uint64_t n, double p, const Gamma& gamma, int alpha_eps);

/// ln q(i₁, i₂) = −(i₁+i₂)(ln n − 2 ln α_ε) + i₁i₂ ln b, for 0 ≤ i₁ ≤ γα_ε, 0 ≤ i₂ ≤ (1−γ)α_ε.
double log_overlap_exponent_q_at(std::uint64_t n, double p, const Gamma& gamma, int alpha_eps, int i1, int i2);
double log_overlap_exponent_q(std::uint64_t n, double p, const Gamma& gamma, double epsilon, int i1, int i2);
double overlap_exponent_q(std::uint64_t n, double p, const Gamma& gamma, double epsilon, int i1, int i2);

struct QGrid {
  int alpha_eps = 0;
  int max_i1 = 0;  // γα_ε
  int max_i2 = 0;  // (1−γ)α_ε
  std::vector<double> log_q;  // row-major over i1

  double log_at(int i1, int i2) const { return log_q[static_cast<std::size_t>(i1) * (max_i2 + 1) + i2]; }
  /// Largest q over (i₁, i₂) ≠ (0, 0).
  double max_off_origin() const;
};

QGrid q_grid_at(std::uint64_t n, double p, const Gamma& gamma, int alpha_eps);
QGrid q_grid(std::uint64_t n, double p, const Gamma& gamma, double epsilon);

/// Smallest feasible α with E[Z_α] ≤ threshold, scanning upward.
int first_moment_crossing(std::uint64_t n, double p, const Gamma& gamma, double threshold);

struct MomentReport {
  int alpha_eps = 0;
  double log_first_moment = 0;  // at α_ε
  double ratio = 0;
  QGrid q_grid;
  int crossing_alpha = 0;  // threshold 1
};

MomentReport moment_report(std::uint64_t n, double p, const Gamma& gamma, double epsilon);

}  // namespace balis::moments
