#pragma once

/**
 * @file orlicz_pettis.hpp
 * @brief Unconditional-Cauchy failure search, block extraction, and the
 * coarse random-subseries experiment.
 *
 * Pipeline: unconditional_cauchy_scan finds finite index sets of norm
 * >= delta beyond a moving frontier; extract_blocks collects them into a
 * BlockPartition; op_experiment samples one sign per block and checks that the
 * signed series and the selected subseries both fail to converge weakly.
 */

#include <optional>
#include <vector>

#include "subseries/convergence.hpp"
#include "subseries/randomness.hpp"

namespace subseries {

struct BlockSearch {
  /// When no contiguous window (frontier, N] reaches delta, also try every
  /// subset of the next subset_width indices. Exponential; off by default.
  bool subset_search = false;
  std::size_t subset_width = 12;
};

/**
 * First finite F inside (frontier, n_max] with ||sum_{n in F} x_n|| >= delta,
 * decided exactly: windows (frontier, N] by increasing N, then subsets if
 * enabled. Returns F sorted, or nothing when the budget is exhausted.
 */
std::optional<std::vector<index_t>> unconditional_cauchy_scan(const FormalSeries& s, const Rational& delta,
                                                              const Budget& b, index_t frontier = -1,
                                                              const BlockSearch& search = {});

/**
 * `count` disjoint blocks, each of norm >= delta, emitted in increasing index
 * order (so f is monotone on them); every other index is a singleton block.
 * Throws BudgetExhausted (carrying the number found) when fewer exist within
 * the budget.
 */
BlockPartition extract_blocks(const FormalSeries& s, const Rational& delta, std::size_t count, const Budget& b,
                              const BlockSearch& search = {});

/// Half the largest norm ||sum_{n=h+1}^{N} x_n||, h = n_max/2 < N <= n_max,
/// rounded down to a multiple of 2^-20. Throws PreconditionError when the
/// tail is numerically zero.
Rational default_delta(const FormalSeries& s, const Budget& b);

struct OpReport {
  std::string series;
  Seed seed;
  Budget budget;
  std::size_t samples = 0;
  std::size_t blocks = 0;  // explicit blocks in the partition
  Rational delta;
  std::string T;
  std::size_t sigma_failed = 0, sigma_converged = 0, sigma_undecided = 0;
  std::size_t s_failed = 0, s_converged = 0, s_undecided = 0;
  /// Samples where both forms are decided and agree.
  std::size_t sigma_s_agreement = 0;
  std::size_t both_decided = 0;
  /// Weak-failure fractions over decided samples (NaN when none is decided).
  double frac_sigma_fail_weak = 0.0;
  double frac_s_fail_weak = 0.0;
  bool pass = false;
};

/**
 * Per sample j: block signs eps from coarse_signs(seed.substream(j), part);
 * detect_weak on sum eps_{f(n)} x_n and on sum (1 - eps_{f(n)})/2 x_n, both
 * restricted to f(n) in T. Passes when both failure fractions are >= 0.99.
 *
 * Throws PreconditionError unless T is infinite, the partition records its
 * delta, at least one explicit block lies in T, and every explicit block in
 * T has norm >= delta (checked exactly).
 */
OpReport op_experiment(const FormalSeries& s, std::shared_ptr<const BlockPartition> part, const BlockSet& T,
                       std::size_t samples, const FunctionalFamily& fam, const Budget& b, Seed seed,
                       unsigned threads = 0);

struct FlipIdentity {
  /// eps with the signs of the blocks in T reversed.
  CoefficientSeq flipped;
  index_t checked_through = -1;
  bool holds = false;
};

/**
 * With block signs eps and eps' (eps flipped on T), checks exactly that
 * Sigma_N(eps') - Sigma_N(eps) = -2 sum_{n <= N, f(n) in T} eps_{f(n)} x_n for
 * every N <= n_max.
 */
FlipIdentity subseries_flip_identity(const FormalSeries& s, std::shared_ptr<const BlockPartition> part,
                                     const BlockSet& T, const CoefficientSeq& block_signs, index_t n_max);

}  // namespace subseries
