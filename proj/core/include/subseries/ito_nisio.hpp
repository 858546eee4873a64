#pragma once

/**
 * @file ito_nisio.hpp
 * @brief Exhaustive checks over the sign cube and the Monte-Carlo
 * strong/weak dichotomy experiment.
 *
 * The exhaustive checks run in exact rational arithmetic: probabilities are
 * counts over all 2^n sign vectors, so lhs/rhs are exact rationals.
 */

#include <cstdint>
#include <vector>

#include "subseries/convergence.hpp"
#include "subseries/randomness.hpp"

namespace subseries {

/// Longest term list the exhaustive checks accept.
inline constexpr std::size_t kMaxEnumerationLength = 20;

struct LevyReport {
  std::size_t length = 0;
  Rational R;
  /// P[max_{N0 < length} ||Sigma_N0|| >= R]
  Rational lhs;
  /// 2 P[||Sigma_{length-1}|| >= R]
  Rational rhs;
  bool holds = false;
};

/// Throws BudgetError for more than kMaxEnumerationLength terms and
/// ContractViolation for an empty list, R <= 0 or inexact terms.
LevyReport levy_check_exhaustive(const std::vector<ExactVector>& terms, const Rational& R);

struct EquidistributionReport {
  index_t N = 0;
  index_t M = 0;
  std::uint64_t patterns = 0;
  bool multiset_equal = false;
};

/// Compares the multisets {Sigma_M(eps)} and {Sigma_M(eps) - 2 Sigma_N(eps)}
/// over all sign vectors eps of length M+1. Needs N <= M < terms.size().
EquidistributionReport equidistribution_check(const std::vector<ExactVector>& terms, index_t N, index_t M);

struct DichotomyReport {
  std::string series;
  Seed seed;
  Budget budget;
  std::size_t samples = 0;
  std::size_t strong_converged = 0, strong_diverged = 0, strong_undecided = 0;
  std::size_t weak_converged = 0, weak_diverged = 0, weak_undecided = 0;
  /// Samples where both verdicts are decided and differ.
  std::size_t disagreements = 0;
  /// Converged fraction among decided samples (NaN when none is decided).
  double frac_strong = 0.0;
  double frac_weak = 0.0;
  /// Fraction of samples with at least one Undecided verdict.
  double frac_undecided = 0.0;
  bool inconclusive = false;  // frac_undecided > 0.2
  bool dichotomy_pass = false;
};

/**
 * Per sample j: signs from haar_signs(seed.substream(j)), then strong and
 * weak detection. Passes when both decided fractions lie in [0, 0.01] or
 * [0.99, 1] on the same side. Needs samples >= 100. threads = 0 uses every
 * hardware thread; the report does not depend on it.
 */
DichotomyReport dichotomy_experiment(const FormalSeries& s, std::size_t samples, const Budget& b,
                                     const FunctionalFamily& fam, Seed seed, unsigned threads = 0);

}  // namespace subseries
