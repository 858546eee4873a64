#pragma once

/**
 * @file convergence.hpp
 * @brief Finite-budget detectors for strong, weak and bounded summability.
 *
 * A finite truncation cannot decide a statement about infinitely many
 * partial sums, so every detector is three-valued. Converged and Diverged come
 * with certificates that recheck() verifies using only norm and pair calls;
 * Diverged needs confirmation from the series' analytic oracle, otherwise the
 * witness is flagged heuristic.
 */

#include <optional>
#include <string>
#include <vector>

#include "subseries/norming.hpp"
#include "subseries/series.hpp"

namespace subseries {

struct Budget {
  index_t n_max = 4096;
  std::vector<Rational> eps_grid{Rational(1, 2), Rational(1, 8), Rational(1, 64), Rational(1, 512)};
  std::size_t k_functionals = 256;
  std::size_t candidate_count = 64;
  /// Partial-sum norm that counts as blow-up for the bounded detector.
  double blowup_threshold = 1024.0;
  /// Oracle-guided witness searches stop at witness_factor * (n_max + 1).
  index_t witness_factor = 64;

  /// Throws ContractViolation unless n_max >= 1, eps_grid is nonempty,
  /// strictly positive and strictly decreasing, and the counts are >= 1.
  void validate() const;
};

enum class Outcome { Converged, Diverged, Undecided };
std::string to_string(Outcome o);

/// Cauchy stabilization at one tolerance: ||Sigma_N' - Sigma_N|| <= eps for
/// all N' >= N >= n0.
struct Stabilization {
  Rational eps;
  /// Arbitrary precision: oracle tail bounds can certify indices far beyond
  /// index_t.
  mpz_class n0 = 0;
  /// "scan": max_{n0 <= N <= n_max} ||Sigma_{n_max} - Sigma_N|| <= eps/2 was
  /// observed; "oracle": the oracle's tail bound at n0+1 is <= eps.
  std::string source;
  bool beyond_budget = false;
};

/// ||sum_{n=m}^{n} c_k x_k|| >= delta.
struct GapWitness {
  index_t m = 0;
  index_t n = 0;
  double norm = 0.0;
  Rational delta;
};

/// One candidate limit X matched against the first K functionals: every
/// pairing Lambda_k(Sigma_N - X), window_begin <= N <= n_max, is below eps.
struct WeakMatch {
  Rational eps;
  /// -1 for the zero vector, otherwise the index m of the partial sum Sigma_m.
  index_t candidate = -1;
  index_t window_begin = 0;
  bool verified_within_budget = true;
  /// Matches not verified in the window rest on the oracle's tail bound.
  std::optional<mpz_class> n0_from_tail_bound;
};

/// A functional whose pairings oscillate by more than 2 eps in both halves
/// of the window [begin, n_max].
struct Obstruction {
  std::size_t functional = 0;
  Rational eps;
  index_t begin = 0;
  index_t split = 0;
  double spread_first = 0.0;
  double spread_second = 0.0;
};

struct ConvergenceVerdict {
  Predicate predicate = Predicate::Strong;
  Outcome outcome = Outcome::Undecided;
  bool heuristic = false;
  std::optional<std::string> oracle_reason;
  Budget budget;

  // Converged
  std::optional<FloatVector> limit;
  std::vector<Stabilization> stabilization;  // strong
  std::vector<WeakMatch> matches;            // weak
  std::optional<double> bound;               // bounded: proven bound, if known
  // Diverged
  std::optional<GapWitness> gap;
  std::optional<Obstruction> obstruction;
  // Every predicate
  double observed_sup = 0.0;  // max_{N <= n_max} ||Sigma_N||
  std::string note;           // budget summary or explanation
};

/**
 * Detection context for one series: caches terms up to n_max and, when a
 * functional family is given, the sparse table of pairings Lambda_k(x_n). All
 * methods are const and safe to call concurrently.
 */
class Detector {
 public:
  Detector(FormalSeries series, Budget budget, std::optional<FunctionalFamily> family = std::nullopt);

  ConvergenceVerdict strong(const CoefficientSeq& c) const;
  ConvergenceVerdict weak(const CoefficientSeq& c) const;
  ConvergenceVerdict bounded(const CoefficientSeq& c) const;

  const FormalSeries& series() const noexcept { return series_; }
  const Budget& budget() const noexcept { return budget_; }
  const std::optional<FunctionalFamily>& family() const noexcept { return family_; }
  std::size_t functional_count() const noexcept { return functionals_.size(); }

 private:
  struct Scan;
  Scan scan(const CoefficientSeq& c) const;
  const FloatVector& term(index_t n) const;
  FloatVector term_or_generate(index_t n) const;
  std::optional<OracleAnswer> ask(Predicate p, const CoefficientSeq& c) const;
  std::optional<GapWitness> search_gap(const CoefficientSeq& c, index_t m, double delta, const Rational& delta_exact) const;

  FormalSeries series_;
  Budget budget_;
  std::optional<FunctionalFamily> family_;
  std::vector<FloatVector> terms_;
  std::vector<FloatFunctional> functionals_;
  // pairings_[n] = nonzero (k, Lambda_k(x_n)).
  std::vector<std::vector<std::pair<std::size_t, double>>> pairings_;
};

ConvergenceVerdict detect_strong(const FormalSeries& s, const CoefficientSeq& c, const Budget& b = {});
ConvergenceVerdict detect_weak(const FormalSeries& s, const CoefficientSeq& c, const FunctionalFamily& fam,
                               const Budget& b = {});
ConvergenceVerdict detect_bounded(const FormalSeries& s, const CoefficientSeq& c, const Budget& b = {});

struct RecheckResult {
  bool ok = true;
  std::string detail;
};

/**
 * Independent verification of a verdict's certificate by direct
 * recomputation of partial sums with norm() and pair(). Long scans are
 * spot-checked at evenly spaced indices (every index when n_max <= 512).
 * Weak certificates need the family they were produced with.
 */
RecheckResult recheck(const FormalSeries& s, const CoefficientSeq& c, const ConvergenceVerdict& v,
                      const FunctionalFamily* fam = nullptr);

}  // namespace subseries
