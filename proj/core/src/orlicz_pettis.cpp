#include "subseries/orlicz_pettis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "subseries/accumulator.hpp"
#include "subseries/parallel.hpp"

namespace subseries {
namespace {

// Float norms only filter candidates; every accepted block is confirmed in
// exact arithmetic. The slack keeps the filter from rejecting exact ties.
constexpr double kFilterSlack = 1e-9;
// Near-ties (float norm within the slack of delta, exact norm below it) can
// recur at every step; past this many exact comparisons the scan gives up.
constexpr std::size_t kMaxExactChecks = 256;

bool exact_block_reaches(const FormalSeries& s, const std::vector<index_t>& block, const Rational& delta) {
  ExactVector sum(s.space().with_precision(Precision::ExactRational));
  for (index_t n : block) sum += s.exact_term(n);
  return norm_at_least(sum, delta);
}

std::optional<std::vector<index_t>> subset_scan(const FormalSeries& s, const Rational& delta, index_t first,
                                                index_t last, double floor) {
  const auto width = static_cast<unsigned>(std::max<index_t>(last - first + 1, 0));
  if (width == 0) return std::nullopt;
  std::vector<FloatVector> terms;
  for (index_t n = first; n <= last; ++n) terms.push_back(s.term(n));
  std::vector<std::uint32_t> masks((std::size_t{1} << width) - 1);
  std::iota(masks.begin(), masks.end(), 1u);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
  for (std::uint32_t mask : masks) {
    FloatVector sum(s.space());
    std::vector<index_t> block;
    for (unsigned i = 0; i < width; ++i) {
      if (mask >> i & 1u) {
        sum += terms[i];
        block.push_back(first + static_cast<index_t>(i));
      }
    }
    if (norm(sum) >= floor && exact_block_reaches(s, block, delta)) return block;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<index_t>> unconditional_cauchy_scan(const FormalSeries& s, const Rational& delta,
                                                              const Budget& b, index_t frontier,
                                                              const BlockSearch& search) {
  if (sgn(delta) <= 0) throw ContractViolation("unconditional_cauchy_scan needs delta > 0");
  b.validate();
  const double floor = delta.get_d() * (1 - kFilterSlack);
  NormAccumulator window(s.space());
  // The exact window sum is only materialized once the float filter first
  // passes, then kept in lockstep.
  std::optional<ExactNormAccumulator> exact;
  index_t exact_through = frontier;
  std::size_t exact_checks = 0;
  for (index_t N = frontier + 1; N <= b.n_max && exact_checks < kMaxExactChecks; ++N) {
    window.add(s.term(N));
    if (!exact && window.norm() < floor) continue;
    if (!exact) exact.emplace(s.space().with_precision(Precision::ExactRational));
    for (; exact_through < N; ++exact_through) exact->add(s.exact_term(exact_through + 1));
    if (window.norm() < floor) continue;
    ++exact_checks;
    if (exact->norm_at_least(delta)) {
      std::vector<index_t> block(static_cast<std::size_t>(N - frontier));
      std::iota(block.begin(), block.end(), frontier + 1);
      return block;
    }
  }
  if (search.subset_search) {
    index_t last = std::min<index_t>(b.n_max, frontier + static_cast<index_t>(std::min<std::size_t>(search.subset_width, 20)));
    return subset_scan(s, delta, frontier + 1, last, floor);
  }
  return std::nullopt;
}

BlockPartition extract_blocks(const FormalSeries& s, const Rational& delta, std::size_t count, const Budget& b,
                              const BlockSearch& search) {
  if (count == 0) throw ContractViolation("extract_blocks needs count >= 1");
  std::vector<std::vector<index_t>> blocks;
  index_t frontier = -1;
  while (blocks.size() < count) {
    auto F = unconditional_cauchy_scan(s, delta, b, frontier, search);
    if (!F) {
      throw BudgetExhausted("found " + std::to_string(blocks.size()) + " of " + std::to_string(count) +
                                " blocks of norm >= " + to_string(delta) + " within n_max = " + std::to_string(b.n_max),
                            blocks.size());
    }
    // Blocks come out in increasing index order, so f is monotone on them.
    if (F->front() <= frontier) throw std::logic_error("extract_blocks: block behind the frontier");
    frontier = F->back();
    blocks.push_back(std::move(*F));
  }
  return BlockPartition(std::move(blocks), delta);
}

Rational default_delta(const FormalSeries& s, const Budget& b) {
  b.validate();
  NormAccumulator window(s.space());
  double top = 0.0;
  for (index_t N = b.n_max / 2 + 1; N <= b.n_max; ++N) {
    window.add(s.term(N));
    top = std::max(top, window.norm());
  }
  const double scale = std::ldexp(1.0, 20);
  auto units = static_cast<long>(std::floor(top / 2 * scale));
  if (units <= 0) throw PreconditionError("tail of " + s.name() + " is numerically zero; no default delta");
  return Rational(units) / Rational(1 << 20);
}

OpReport op_experiment(const FormalSeries& s, std::shared_ptr<const BlockPartition> part, const BlockSet& T,
                       std::size_t samples, const FunctionalFamily& fam, const Budget& b, Seed seed,
                       unsigned threads) {
  if (!part) throw ContractViolation("op_experiment needs a partition");
  if (samples == 0) throw ContractViolation("op_experiment needs samples >= 1");
  b.validate();
  if (!T.is_infinite()) throw PreconditionError("T must contain infinitely many blocks");
  if (!part->delta()) throw PreconditionError("partition carries no block-norm lower bound");
  const Rational& delta = *part->delta();
  std::size_t tested = 0;
  for (std::size_t id = 0; id < part->block_count(); ++id) {
    if (!T.contains(static_cast<index_t>(id))) continue;
    ++tested;
    if (!exact_block_reaches(s, part->blocks()[id], delta)) {
      throw PreconditionError("block " + std::to_string(id) + " has norm below " + to_string(delta));
    }
  }
  if (tested == 0) throw PreconditionError("no extracted block lies in T");

  FormalSeries restricted = restrict(s, part, T);
  Detector detector(restricted, b, fam);
  auto outcomes = parallel_map(
      samples,
      [&](std::size_t j) {
        CoefficientSeq eps = coarse_signs(seed.substream(j), part);
        return std::pair{detector.weak(eps).outcome, detector.weak(chi_from_eps(eps)).outcome};
      },
      threads);

  OpReport r;
  r.series = s.name();
  r.seed = seed;
  r.budget = b;
  r.samples = samples;
  r.blocks = part->block_count();
  r.delta = delta;
  r.T = T.to_string();
  for (const auto& [sigma, sel] : outcomes) {
    r.sigma_failed += sigma == Outcome::Diverged;
    r.sigma_converged += sigma == Outcome::Converged;
    r.sigma_undecided += sigma == Outcome::Undecided;
    r.s_failed += sel == Outcome::Diverged;
    r.s_converged += sel == Outcome::Converged;
    r.s_undecided += sel == Outcome::Undecided;
    if (sigma != Outcome::Undecided && sel != Outcome::Undecided) {
      ++r.both_decided;
      r.sigma_s_agreement += sigma == sel;
    }
  }
  auto fraction = [](std::size_t failed, std::size_t converged) {
    return failed + converged == 0 ? std::numeric_limits<double>::quiet_NaN()
                                   : static_cast<double>(failed) / static_cast<double>(failed + converged);
  };
  r.frac_sigma_fail_weak = fraction(r.sigma_failed, r.sigma_converged);
  r.frac_s_fail_weak = fraction(r.s_failed, r.s_converged);
  r.pass = r.frac_sigma_fail_weak >= 0.99 && r.frac_s_fail_weak >= 0.99;  // false for NaN
  return r;
}

FlipIdentity subseries_flip_identity(const FormalSeries& s, std::shared_ptr<const BlockPartition> part,
                                     const BlockSet& T, const CoefficientSeq& block_signs, index_t n_max) {
  if (!part) part = std::make_shared<const BlockPartition>();
  if (block_signs.kind() != CoefficientKind::Signs) throw ContractViolation("subseries_flip_identity needs signs");
  if (n_max < 0) throw ContractViolation("subseries_flip_identity needs n_max >= 0");
  CoefficientLaw law;
  law.opaque = true;
  CoefficientSeq flipped(
      CoefficientKind::Signs,
      [block_signs, T](index_t id) { return T.contains(id) ? Rational(-block_signs.exact(id)) : block_signs.exact(id); },
      [block_signs, T](index_t id) { return T.contains(id) ? -block_signs.value(id) : block_signs.value(id); }, law,
      Rational(1));

  const Space exact = s.space().with_precision(Precision::ExactRational);
  ExactVector difference(exact), restricted(exact);
  FlipIdentity out{flipped, -1, true};
  for (index_t n = 0; n <= n_max; ++n) {
    index_t id = part->f(n);
    ExactVector x = s.exact_term(n);
    difference.add_scaled(x, flipped.exact(id) - block_signs.exact(id));
    if (T.contains(id)) restricted.add_scaled(x, block_signs.exact(id));
    if (!(difference == restricted * Rational(-2))) {
      out.holds = false;
      break;
    }
    out.checked_through = n;
  }
  return out;
}

}  // namespace subseries
