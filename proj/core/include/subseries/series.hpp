#pragma once

/**
 * @file series.hpp
 * @brief Formal series, coefficient sequences, block partitions and the
 * sign/selector algebra.
 *
 * A FormalSeries is a generator n -> x_n; a CoefficientSeq is a generator
 * n -> c_n together with a description of the law it was drawn from, which
 * analytic oracles inspect to decide summability questions in closed form.
 */

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "subseries/space.hpp"

namespace subseries {

enum class CoefficientKind { Signs, Selectors, Scalars };
std::string to_string(CoefficientKind kind);

/// A decidable set of block ids: everything, nothing, the even or odd ids,
/// or an explicit finite set.
class BlockSet {
 public:
  enum class Kind { All, None, Even, Odd, Finite };

  static BlockSet all() { return BlockSet(Kind::All, {}); }
  static BlockSet none() { return BlockSet(Kind::None, {}); }
  static BlockSet even() { return BlockSet(Kind::Even, {}); }
  static BlockSet odd() { return BlockSet(Kind::Odd, {}); }
  static BlockSet finite(std::set<index_t> ids) { return BlockSet(Kind::Finite, std::move(ids)); }

  /// "all", "none", "even", "odd" or a comma-separated id list such as "0,2,5".
  static BlockSet parse(const std::string& text);

  Kind kind() const noexcept { return kind_; }
  const std::set<index_t>& ids() const noexcept { return ids_; }
  bool contains(index_t id) const;
  bool is_infinite() const noexcept { return kind_ == Kind::All || kind_ == Kind::Even || kind_ == Kind::Odd; }
  BlockSet intersect(const BlockSet& other) const;
  std::string to_string() const;

  friend bool operator==(const BlockSet&, const BlockSet&) = default;

 private:
  BlockSet(Kind kind, std::set<index_t> ids) : kind_(kind), ids_(std::move(ids)) {}
  Kind kind_;
  std::set<index_t> ids_;
};

/**
 * Pairwise disjoint finite blocks N_0, ..., N_{B-1} and the induced map f.
 *
 * Block j has id j. An index claimed by no block gets a fresh singleton id
 * B + (number of unclaimed indices below it), so f is total, every fiber is
 * finite, and f is increasing on unclaimed indices.
 */
class BlockPartition {
 public:
  /// The singleton partition (no explicit blocks).
  BlockPartition() = default;
  explicit BlockPartition(std::vector<std::vector<index_t>> blocks, std::optional<Rational> delta = std::nullopt);

  const std::vector<std::vector<index_t>>& blocks() const noexcept { return blocks_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  /// The norm lower bound the blocks were extracted with, if any.
  const std::optional<Rational>& delta() const noexcept { return delta_; }

  index_t f(index_t n) const;
  std::vector<index_t> fiber(index_t id) const;
  /// Largest index inside an explicit block, or -1.
  index_t last_claimed() const noexcept { return claimed_.empty() ? -1 : claimed_.back(); }

  friend bool operator==(const BlockPartition& a, const BlockPartition& b) { return a.blocks_ == b.blocks_; }

 private:
  std::vector<std::vector<index_t>> blocks_;
  std::vector<index_t> claimed_;                 // sorted
  std::vector<std::pair<index_t, index_t>> owner_;  // (index, block id), sorted by index
  std::optional<Rational> delta_;
};

/// What an oracle may assume about a coefficient sequence.
struct CoefficientLaw {
  enum class Draw { Deterministic, Haar, Coarse };

  Draw draw = Draw::Deterministic;
  /// Deterministic sequences: the common value on the support, if constant.
  std::optional<Rational> constant;
  /// Coefficients vanish from this index on.
  std::optional<index_t> support_end;
  /// Coarse draws and masks refer to this partition's block ids; null means
  /// the singleton partition.
  std::shared_ptr<const BlockPartition> partition;
  /// c_n is forced to zero unless f(n) lies in the mask.
  BlockSet mask = BlockSet::all();
  /// Random draws: c_n = offset + scale * eps, eps a uniform sign.
  Rational offset = 0;
  Rational scale = 1;
  /// Set when the law is not expressible in the fields above.
  bool opaque = false;
};

/**
 * Coefficient sequence n -> c_n, with O(1) random access in both precisions.
 */
class CoefficientSeq {
 public:
  using ExactFn = std::function<Rational(index_t)>;
  using FloatFn = std::function<double(index_t)>;

  CoefficientSeq(CoefficientKind kind, ExactFn exact, FloatFn value, CoefficientLaw law, Rational sup_abs);

  /// c_n = value for n < support_end (all n when empty).
  static CoefficientSeq constant(CoefficientKind kind, const Rational& value,
                                 std::optional<index_t> support_end = std::nullopt);
  /// c_n = values[n], and `tail` beyond the list (default: +1 for Signs,
  /// 0 otherwise).
  static CoefficientSeq from_list(CoefficientKind kind, std::vector<Rational> values,
                                  std::optional<Rational> tail = std::nullopt);

  CoefficientKind kind() const noexcept { return kind_; }
  double value(index_t n) const { return value_(n); }
  Rational exact(index_t n) const { return exact_(n); }
  const CoefficientLaw& law() const noexcept { return law_; }
  /// Upper bound on |c_n| over all n.
  const Rational& sup_abs() const noexcept { return sup_abs_; }

  /// The first n values; checks the kind's value constraint on each.
  std::vector<Rational> prefix(index_t n) const;

 private:
  CoefficientKind kind_;
  ExactFn exact_;
  FloatFn value_;
  CoefficientLaw law_;
  Rational sup_abs_;
};

/// Summary of a coefficient law used by analytic oracles.
struct CoefficientProfile {
  bool finite_support = false;  // only finitely many c_n can be nonzero
  bool random = false;          // drawn from Haar or coarse measure
  bool full = false;            // mask covers every index and there is no support end
  std::optional<Rational> constant;  // deterministic common value
  /// Random laws: the law of c_n on the support is offset + scale * eps.
  Rational offset = 0;
  Rational scale = 1;
  bool opaque = false;
};

CoefficientProfile profile(const CoefficientSeq& c);

/// For finitely supported laws: an index beyond which every c_n vanishes
/// (-1 when all vanish). Empty for infinite support.
std::optional<index_t> last_nonzero_bound(const CoefficientSeq& c);

/// Smallest |c_n| over the nonzero values the law can produce; empty when
/// the law is opaque or has no such value.
std::optional<Rational> min_nonzero_magnitude(const CoefficientSeq& c);

enum class Predicate { Strong, Weak, Bounded, Unconditional };
enum class Truth { Converges, Diverges };
std::string to_string(Predicate p);
std::string to_string(Truth t);

struct OracleAnswer {
  Truth truth;
  std::string reason;
};

/**
 * Closed-form ground truth for a series family. Every method may decline by
 * returning an empty optional; decide() throws OracleIncomplete instead so
 * callers cannot mistake "unknown" for an answer.
 *
 * For random coefficient laws, answers hold almost surely.
 */
class SeriesOracle {
 public:
  virtual ~SeriesOracle() = default;

  /// Throws OracleIncomplete when the combination is not covered.
  virtual OracleAnswer decide(Predicate p, const CoefficientSeq& c) const = 0;
  /// Upper bound on sup_{N >= M} ||sum_{n=M}^{N} c_n x_n|| (strongly
  /// convergent cases only).
  virtual std::optional<double> tail_bound(const CoefficientSeq&, index_t) const { return std::nullopt; }
  /// Smallest known n0 >= 0 with tail_bound(n0 + 1) <= eps. The default
  /// bisects tail_bound over index_t; oracles whose stabilization indices
  /// overflow it override this with a closed form.
  virtual std::optional<mpz_class> tail_index(const CoefficientSeq& c, double eps) const;
  /// Lower bound delta > 0 such that for every M some N > M has
  /// ||sum_{n=M}^{N} c_n x_n|| >= delta (strongly divergent cases only).
  virtual std::optional<double> persistent_gap(const CoefficientSeq&) const { return std::nullopt; }
  /// Upper bound on sup_N ||Sigma_N|| (bounded cases only).
  virtual std::optional<double> partial_sum_bound(const CoefficientSeq&) const { return std::nullopt; }
  virtual std::string describe() const = 0;
};

class FormalSeries {
 public:
  using TermFn = std::function<FloatVector(index_t)>;
  using ExactTermFn = std::function<ExactVector(index_t)>;

  /// `space` is the float space of the terms; exact terms live in the same
  /// space at exact precision. Without `exact_term`, exact terms are the exact
  /// values of the float terms.
  FormalSeries(Space space, TermFn term, std::string name, std::shared_ptr<const SeriesOracle> oracle = nullptr,
               std::optional<index_t> max_index_hint = std::nullopt, ExactTermFn exact_term = nullptr);

  const Space& space() const noexcept { return space_; }
  FloatVector term(index_t n) const;
  ExactVector exact_term(index_t n) const;
  const std::string& name() const noexcept { return name_; }
  const std::shared_ptr<const SeriesOracle>& oracle() const noexcept { return oracle_; }
  /// Terms vanish beyond this index when set.
  std::optional<index_t> max_index_hint() const noexcept { return max_index_hint_; }

  /// The first n terms, in either precision.
  std::vector<FloatVector> terms(index_t n) const;
  std::vector<ExactVector> exact_terms(index_t n) const;

 private:
  Space space_;
  TermFn term_;
  ExactTermFn exact_term_;
  std::string name_;
  std::shared_ptr<const SeriesOracle> oracle_;
  std::optional<index_t> max_index_hint_;
};

/// The zero series in a space.
FormalSeries zero_series(const Space& space);

/// sum_{n=0}^{N} c_n x_n.
FloatVector partial_sum(const FormalSeries& s, const CoefficientSeq& c, index_t N);
ExactVector exact_partial_sum(const FormalSeries& s, const CoefficientSeq& c, index_t N);

/// Sign/selector transforms. For signs eps:
///   Sigma_N(eps) = S_N((1+eps)/2) - S_N((1-eps)/2).
struct SelectorPair {
  CoefficientSeq plus;   // (1 + eps)/2
  CoefficientSeq minus;  // (1 - eps)/2
};
SelectorPair sigma_from_s(const CoefficientSeq& eps);

/// For selectors chi:
///   S_N(chi) = Sigma_N(1)/2 + Sigma_N(2 chi - 1)/2.
struct SignPair {
  CoefficientSeq ones;   // all +1
  CoefficientSeq signs;  // 2 chi - 1
};
SignPair s_from_sigma(const CoefficientSeq& chi);

/// c_n = coefficient y_n * scale + offset, pointwise. Kind of the result given.
CoefficientSeq affine(const CoefficientSeq& y, CoefficientKind kind, const Rational& scale, const Rational& offset);

/// n -> c(f(n)): block coefficients expanded along the partition.
CoefficientSeq coarse_coefficients(const CoefficientSeq& block_coeffs, std::shared_ptr<const BlockPartition> part);

/// n -> c_n * 1[f(n) in T].
CoefficientSeq mask_coefficients(const CoefficientSeq& c, std::shared_ptr<const BlockPartition> part, const BlockSet& T);

/// term(n) = x_n if f(n) in T, else 0. The oracle, if any, answers queries
/// about the restricted series by masking the queried coefficients.
FormalSeries restrict(const FormalSeries& s, std::shared_ptr<const BlockPartition> part, const BlockSet& T);

}  // namespace subseries
