#include <doctest.h>

#include <cmath>
#include <random>

#include "subseries/accumulator.hpp"
#include "subseries/norming.hpp"
#include "subseries/space.hpp"

using namespace subseries;

namespace {

Rational q(long a, long b = 1) { return Rational(a, b); }

// Reference norms straight from the definition.
double ref_l2(const FloatVector& v) {
  double s = 0;
  for (const auto& [i, x] : v.entries()) s += x * x;
  return std::sqrt(s);
}
double ref_sup(const FloatVector& v) {
  double m = 0;
  for (const auto& [i, x] : v.entries()) m = std::max(m, std::abs(x));
  return m;
}
double ref_l1(const FloatVector& v) {
  double s = 0;
  for (const auto& [i, x] : v.entries()) s += std::abs(x);
  return s;
}

}  // namespace

TEST_CASE("canonical form drops zeros and merges indices") {
  Space s = Space::seq_l2();
  FloatVector v(s, {{3, 1.0}, {1, 2.0}, {3, -1.0}, {0, 0.0}});
  CHECK(v.support_size() == 1);
  CHECK(v.coeff(1) == 2.0);
  CHECK(v == FloatVector(s, {{1, 2.0}}));
  CHECK((v - v).is_zero());
}

TEST_CASE("norms of small vectors") {
  CHECK(norm(FloatVector(Space::seq_l2(), {{0, 3.0}, {1, 4.0}})) == doctest::Approx(5.0));
  CHECK(norm(FloatVector(Space::seq_c0(), {{7, -2.0}})) == doctest::Approx(2.0));
  for (index_t N : {0, 1, 5, 64, 1000}) {
    CHECK(norm(FloatVector::basis(Space::monomial_linf(), N)) == doctest::Approx(1.0));
    CHECK(compare_norm(ExactVector::basis(Space::monomial_linf(Precision::ExactRational), N), q(1)) == 0);
  }
}

TEST_CASE("float norms match the definition on random vectors") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coeff(-9, 9), idx(0, 30);
  for (int trial = 0; trial < 200; ++trial) {
    Entries<double> e;
    for (int k = 0; k < 6; ++k) e.emplace_back(idx(rng), coeff(rng));
    CHECK(norm(FloatVector(Space::seq_l2(), e)) == doctest::Approx(ref_l2(FloatVector(Space::seq_l2(), e))));
    CHECK(norm(FloatVector(Space::seq_l1(), e)) == doctest::Approx(ref_l1(FloatVector(Space::seq_l1(), e))));
    CHECK(norm(FloatVector(Space::seq_c0(), e)) == doctest::Approx(ref_sup(FloatVector(Space::seq_c0(), e))));
  }
}

TEST_CASE("exact norm comparisons") {
  Space l2 = Space::seq_l2(Precision::ExactRational);
  ExactVector v(l2, {{0, q(3)}, {1, q(4)}});
  CHECK(compare_norm(v, q(5)) == 0);
  CHECK(compare_norm(v, q(49, 10)) > 0);
  CHECK(norm_power(v) == q(25));

  Space lin = Space::monomial_linf(Precision::ExactRational);
  // t - t^2 peaks at t = 1/2 with value 1/4.
  ExactVector hump(lin, {{1, q(1)}, {2, q(-1)}});
  CHECK(compare_norm(hump, q(1, 4)) == 0);
  CHECK(compare_norm(hump, q(1, 5)) > 0);
  // 1 - 3t + 3t^2 has minimum 1/4 at 1/2 and maximum 1 at the ends.
  ExactVector p(lin, {{0, q(1)}, {1, q(-3)}, {2, q(3)}});
  CHECK(compare_norm(p, q(1)) == 0);
}

TEST_CASE("pairings") {
  FloatFunctional L(Space::seq_l1(), {{0, 1.0}, {1, -1.0}});
  CHECK(pair(L, FloatVector(Space::seq_l1(), {{0, 2.0}, {1, 5.0}})) == doctest::Approx(-3.0));
  CHECK(pair(L, FloatVector(Space::seq_l1())) == 0.0);

  Space lin = Space::monomial_linf(Precision::ExactRational);
  auto unit = ExactFunctional::indicator(lin, q(0), q(1));
  auto half = ExactFunctional::indicator(lin, q(0), q(1, 2));
  for (index_t N = 0; N <= 20; ++N) {
    auto tN = ExactVector::basis(lin, N);
    CHECK(pair(unit, tN) == q(1, N + 1));
    // integral of t^N over [0,1/2] = 2^{-(N+1)} / (N+1)
    CHECK(pair(half, tN) == pow(q(1, 2), N + 1) / q(N + 1));
    // density t^2: integral t^{N+2} = 1/(N+3)
    CHECK(pair(ExactFunctional(lin, {{2, q(1)}}), tN) == q(1, N + 3));
  }
  CHECK_THROWS_AS(ExactFunctional::indicator(Space::seq_l2(Precision::ExactRational), q(0), q(1)), ContractViolation);
}

TEST_CASE("space and precision mismatches are contract violations") {
  FloatVector a(Space::seq_l2(), {{0, 1.0}});
  FloatVector b(Space::seq_c0(), {{0, 1.0}});
  CHECK_THROWS_AS(a += b, ContractViolation);
  CHECK_THROWS_AS(FloatVector(Space::seq_l2(Precision::ExactRational)), ContractViolation);
  CHECK_THROWS_AS(FloatVector(Space::finite_dim(2, 2.0), {{5, 1.0}}), ContractViolation);
}

TEST_CASE("norming families") {
  auto c0 = norming_family(Space::seq_c0());
  CHECK(norming_sup(FloatVector(Space::seq_c0(), {{2, -5.0}, {9, 1.0}}), c0, 10) == doctest::Approx(5.0));
  CHECK(norming_sup(FloatVector(Space::seq_c0(), {{3, 7.0}}), c0, 10) == doctest::Approx(7.0));
  CHECK(norming_sup(FloatVector(Space::seq_c0(), {{3, 7.0}}), c0, 2) == 0.0);

  auto l1 = norming_family(Space::seq_l1());
  FloatVector v(Space::seq_l1(), {{0, 2.0}, {1, -3.0}});
  auto pos = l1_pattern_position(v);
  auto f = to_float(l1.enumerate_exact(pos));
  CHECK(pair(f, v) == doctest::Approx(5.0));
  CHECK(norming_sup(FloatVector(Space::seq_l1(), {{0, 1.0}, {1, 1.0}}), l1, 64) == doctest::Approx(2.0));

  Space l2 = Space::seq_l2();
  auto fam = norming_family(l2);
  auto k = lattice_position(l2, {{0, 3}, {1, 4}}, 4);
  auto g = fam.enumerate_exact(k);
  CHECK(g.coeffs() == Entries<Rational>{{0, q(3, 5)}, {1, q(4, 5)}});

  CHECK_THROWS_AS(norming_family(Space::monomial_linf()), NotNorming);
  CHECK_FALSE(monomial_test_family().norming());
}

TEST_CASE("enumerated functionals have norm at most one") {
  for (Space s : {Space::seq_l1(), Space::seq_l2(), Space::seq_c0(), Space::torus_trig(), Space::finite_dim(3, 2.0)}) {
    auto fam = norming_family(s);
    for (const auto& f : fam.first(300)) CHECK(operator_norm(f) <= 1.0 + 1e-12);
  }
}

TEST_CASE("norming sup approaches the norm") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coeff(-5, 5);
  for (Space s : {Space::seq_l1(), Space::seq_l2(), Space::seq_c0()}) {
    auto fam = norming_family(s);
    for (int trial = 0; trial < 20; ++trial) {
      FloatVector v(s, {{0, double(coeff(rng))}, {1, double(coeff(rng))}});
      double n = norm(v);
      double sup = norming_sup(v, fam, 4000);
      CHECK(sup <= n + 1e-12);
      CHECK(sup >= n - 0.1 * n - 1e-12);
    }
  }
}

TEST_CASE("torus positions interleave modes") {
  for (index_t p = 0; p < 50; ++p) CHECK(torus_position(torus_mode(p)) == p);
  CHECK(torus_mode(1) == 1);
  CHECK(torus_mode(2) == -1);
}

TEST_CASE("accumulators agree with direct norms") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coeff(-4, 4), idx(0, 12);
  for (Space s : {Space::seq_l1(), Space::seq_l2(), Space::seq_c0(), Space::torus_trig()}) {
    NormAccumulator acc(s);
    ExactNormAccumulator exact(s.with_precision(Precision::ExactRational));
    FloatVector sum(s);
    for (int step = 0; step < 60; ++step) {
      FloatVector t = FloatVector::basis(s, idx(rng), coeff(rng));
      acc.add(t);
      exact.add(to_exact(t));
      sum += t;
      CHECK(acc.norm() == doctest::Approx(norm(sum)));
      CHECK(exact.value() == to_exact(sum));
    }
  }
}
