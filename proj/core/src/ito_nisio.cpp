#include "subseries/ito_nisio.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "subseries/accumulator.hpp"
#include "subseries/parallel.hpp"

namespace subseries {
namespace {

const Space& common_space(const std::vector<ExactVector>& terms, const char* op) {
  if (terms.empty()) throw ContractViolation(std::string(op) + " needs at least one term");
  if (terms.size() > kMaxEnumerationLength) {
    throw BudgetError(std::string(op) + ": " + std::to_string(terms.size()) + " terms exceed the enumeration cap of " +
                      std::to_string(kMaxEnumerationLength));
  }
  const Space& space = terms.front().space();
  for (const auto& t : terms) detail::check_same_space(space, t.space(), op);
  return space;
}

}  // namespace

LevyReport levy_check_exhaustive(const std::vector<ExactVector>& terms, const Rational& R) {
  const Space& space = common_space(terms, "levy_check_exhaustive");
  if (sgn(R) <= 0) throw ContractViolation("levy_check_exhaustive needs R > 0");
  const std::size_t n = terms.size();

  // eps -> -eps preserves every norm, so the half cube eps_0 = +1 suffices.
  ExactNormAccumulator acc(space);
  std::uint64_t prefix_hits = 0, final_hits = 0;
  std::function<void(std::size_t, bool)> walk = [&](std::size_t depth, bool hit) {
    if (!hit) hit = acc.norm_at_least(R);
    if (depth + 1 == n) {
      prefix_hits += hit;
      final_hits += hit && acc.norm_at_least(R);
      return;
    }
    for (int sign : {1, -1}) {
      acc.add(terms[depth + 1], Rational(sign));
      walk(depth + 1, hit);
      acc.add(terms[depth + 1], Rational(-sign));
    }
  };
  acc.add(terms[0]);
  walk(0, false);

  const Rational half_cube(static_cast<unsigned long>(std::uint64_t{1} << (n - 1)));
  LevyReport r;
  r.length = n;
  r.R = R;
  r.lhs = Rational(static_cast<unsigned long>(prefix_hits)) / half_cube;
  r.rhs = 2 * Rational(static_cast<unsigned long>(final_hits)) / half_cube;
  r.holds = r.lhs <= r.rhs;
  return r;
}

EquidistributionReport equidistribution_check(const std::vector<ExactVector>& terms, index_t N, index_t M) {
  if (N < 0 || N > M) throw ContractViolation("equidistribution_check needs 0 <= N <= M");
  if (static_cast<std::size_t>(M) >= terms.size()) {
    throw ContractViolation("equidistribution_check needs M < number of terms");
  }
  std::vector<ExactVector> prefix(terms.begin(), terms.begin() + M + 1);
  const Space& space = common_space(prefix, "equidistribution_check");

  std::vector<ExactVector> sums, flipped;
  const std::size_t patterns = std::size_t{1} << (M + 1);
  sums.reserve(patterns);
  flipped.reserve(patterns);
  // sum = Sigma_M(eps); flip = Sigma_M(eps) - 2 Sigma_N(eps), i.e. the signs
  // of the first N+1 terms reversed.
  std::function<void(index_t, const ExactVector&, const ExactVector&)> walk =
      [&](index_t n, const ExactVector& sum, const ExactVector& flip) {
        if (n > M) {
          sums.push_back(sum);
          flipped.push_back(flip);
          return;
        }
        for (int sign : {1, -1}) {
          Rational e(sign);
          ExactVector s = sum;
          s.add_scaled(terms[static_cast<std::size_t>(n)], e);
          ExactVector f = flip;
          f.add_scaled(terms[static_cast<std::size_t>(n)], n <= N ? Rational(-e) : e);
          walk(n + 1, s, f);
        }
      };
  walk(0, ExactVector(space), ExactVector(space));

  std::sort(sums.begin(), sums.end());
  std::sort(flipped.begin(), flipped.end());
  return {N, M, static_cast<std::uint64_t>(patterns), sums == flipped};
}

DichotomyReport dichotomy_experiment(const FormalSeries& s, std::size_t samples, const Budget& b,
                                     const FunctionalFamily& fam, Seed seed, unsigned threads) {
  if (samples < 100) throw ContractViolation("dichotomy_experiment needs at least 100 samples");
  b.validate();
  Detector detector(s, b, fam);
  auto outcomes = parallel_map(
      samples,
      [&](std::size_t j) {
        CoefficientSeq eps = haar_signs(seed.substream(j));
        return std::pair{detector.strong(eps).outcome, detector.weak(eps).outcome};
      },
      threads);

  DichotomyReport r;
  r.series = s.name();
  r.seed = seed;
  r.budget = b;
  r.samples = samples;
  std::size_t any_undecided = 0;
  for (const auto& [strong, weak] : outcomes) {
    r.strong_converged += strong == Outcome::Converged;
    r.strong_diverged += strong == Outcome::Diverged;
    r.strong_undecided += strong == Outcome::Undecided;
    r.weak_converged += weak == Outcome::Converged;
    r.weak_diverged += weak == Outcome::Diverged;
    r.weak_undecided += weak == Outcome::Undecided;
    bool decided = strong != Outcome::Undecided && weak != Outcome::Undecided;
    r.disagreements += decided && strong != weak;
    any_undecided += !decided;
  }
  auto fraction = [](std::size_t conv, std::size_t div) {
    return conv + div == 0 ? std::numeric_limits<double>::quiet_NaN()
                           : static_cast<double>(conv) / static_cast<double>(conv + div);
  };
  r.frac_strong = fraction(r.strong_converged, r.strong_diverged);
  r.frac_weak = fraction(r.weak_converged, r.weak_diverged);
  r.frac_undecided = static_cast<double>(any_undecided) / static_cast<double>(samples);
  r.inconclusive = r.frac_undecided > 0.2;

  // -1: almost never, +1: almost surely, 0: strictly in between (or no data).
  auto side = [](double f) { return std::isnan(f) ? 0 : f <= 0.01 ? -1 : f >= 0.99 ? 1 : 0; };
  int strong_side = side(r.frac_strong), weak_side = side(r.frac_weak);
  r.dichotomy_pass = strong_side != 0 && strong_side == weak_side;
  return r;
}

}  // namespace subseries
