#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "subseries/catalog.hpp"
#include "subseries/ito_nisio.hpp"

using namespace subseries;

namespace {

Rational q(long a, long b = 1) { return Rational(a, b); }

Space line() { return Space::finite_dim(1, 1.0, Precision::ExactRational); }

std::vector<ExactVector> scalars(std::vector<long> xs) {
  std::vector<ExactVector> out;
  for (long x : xs) out.push_back(ExactVector::basis(line(), 0, q(x)));
  return out;
}

// Reference Levy probabilities by brute force over all sign vectors, with
// sup norms taken coordinate by coordinate.
std::pair<Rational, Rational> brute_levy_sup(const std::vector<ExactVector>& terms, const Rational& R) {
  std::size_t n = terms.size();
  long hits_max = 0, hits_end = 0;
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    ExactVector s(terms[0].space());
    bool hit = false;
    for (std::size_t k = 0; k < n; ++k) {
      s.add_scaled(terms[k], (mask >> k) & 1 ? Rational(-1) : Rational(1));
      Rational m = 0;
      for (const auto& [i, x] : s.entries()) m = std::max(m, Rational(abs(x)));
      hit = hit || m >= R;
      if (k + 1 == n && m >= R) ++hits_end;
    }
    hits_max += hit;
  }
  Rational total(1UL << n);
  return {Rational(hits_max) / total, 2 * Rational(hits_end) / total};
}

}  // namespace

TEST_CASE("Levy inequality on two unit scalars") {
  auto r2 = levy_check_exhaustive(scalars({1, 1}), q(2));
  CHECK(r2.lhs == q(1, 2));
  CHECK(r2.rhs == q(1));
  CHECK(r2.holds);
  auto r1 = levy_check_exhaustive(scalars({1, 1}), q(1));
  CHECK(r1.lhs == q(1));
  CHECK(r1.rhs == q(1));
  CHECK(r1.holds);
}

TEST_CASE("Levy inequality above the total mass is trivial") {
  auto fam = catalog("l2_diagonal");
  auto terms = fam.series.exact_terms(8);
  double mass = 0;
  for (const auto& t : terms) mass += norm(t);
  auto r = levy_check_exhaustive(terms, to_rational(mass + 1));
  CHECK(r.lhs == 0);
  CHECK(r.rhs == 0);
  CHECK(r.holds);
}

TEST_CASE("Levy probabilities match brute force in c0") {
  auto fam = catalog("c0_paired");
  for (std::size_t n = 1; n <= 10; ++n) {
    auto terms = fam.series.exact_terms(static_cast<index_t>(n));
    for (Rational R : {q(1, 2), q(1), q(2), q(3)}) {
      auto [lhs, rhs] = brute_levy_sup(terms, R);
      auto r = levy_check_exhaustive(terms, R);
      CHECK(r.lhs == lhs);
      CHECK(r.rhs == rhs);
      CHECK(r.holds == (lhs <= rhs));
    }
  }
}

TEST_CASE("Levy check rejects bad input") {
  CHECK_THROWS_AS(levy_check_exhaustive({}, q(1)), ContractViolation);
  CHECK_THROWS_AS(levy_check_exhaustive(scalars({1}), q(0)), ContractViolation);
  CHECK_THROWS_AS(levy_check_exhaustive(scalars(std::vector<long>(21, 1)), q(1)), BudgetError);
}

TEST_CASE("equidistribution of flipped sums") {
  auto r = equidistribution_check(scalars({1, 1}), 0, 1);
  CHECK(r.patterns == 4);
  CHECK(r.multiset_equal);
  // N = M is the global sign flip.
  auto t = scalars({1, 2, 5});
  for (index_t M = 0; M < 3; ++M) CHECK(equidistribution_check(t, M, M).multiset_equal);
  auto l2 = catalog("l2_diagonal").series.exact_terms(3);
  CHECK(equidistribution_check(l2, 0, 2).multiset_equal);
  CHECK_THROWS(equidistribution_check(t, 2, 1));
}

TEST_CASE("multisets of the flipped sums, computed by hand") {
  // Sigma_1 = e0 + e1 * 3 over all signs, against Sigma_1 - 2 Sigma_0.
  auto t = scalars({1, 3});
  std::vector<Rational> a, b;
  for (int s0 : {-1, 1}) {
    for (int s1 : {-1, 1}) {
      a.push_back(s0 * 1 + s1 * 3);
      b.push_back(-s0 * 1 + s1 * 3);
    }
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
  CHECK(equidistribution_check(t, 0, 1).multiset_equal);
}

TEST_CASE("dichotomy on the diagonal family") {
  Budget b;
  b.n_max = 1024;
  for (auto [alpha, expected] : {std::pair{"1", 1.0}, std::pair{"0.5", 0.0}}) {
    auto fam = catalog("l2_diagonal", {{"alpha", parse_rational(alpha)}});
    auto rep = dichotomy_experiment(fam.series, 100, b, detection_family(fam.series.space()), Seed{1, 0});
    CHECK(rep.frac_strong == expected);
    CHECK(rep.frac_weak == expected);
    CHECK(rep.disagreements == 0);
    CHECK(rep.dichotomy_pass);
    CHECK_FALSE(rep.inconclusive);
  }
}

TEST_CASE("dichotomy on the zero series") {
  Budget b;
  b.n_max = 64;
  auto z = zero_series(Space::seq_l2());
  auto rep = dichotomy_experiment(z, 100, b, norming_family(z.space()), Seed{1, 0});
  CHECK(rep.strong_converged == 100);
  CHECK(rep.weak_converged == 100);
  CHECK(rep.dichotomy_pass);
  CHECK_THROWS_AS(dichotomy_experiment(z, 99, b, norming_family(z.space()), Seed{1, 0}), ContractViolation);
}

TEST_CASE("dichotomy reports do not depend on the thread count") {
  Budget b;
  b.n_max = 256;
  auto fam = catalog("l2_diagonal", {{"alpha", q(3, 5)}});
  auto f = detection_family(fam.series.space());
  auto one = dichotomy_experiment(fam.series, 100, b, f, Seed{3, 0}, 1);
  auto many = dichotomy_experiment(fam.series, 100, b, f, Seed{3, 0}, 4);
  CHECK(one.strong_converged == many.strong_converged);
  CHECK(one.weak_converged == many.weak_converged);
  CHECK(one.strong_undecided == many.strong_undecided);
}
