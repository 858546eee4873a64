#include <doctest.h>

#include <random>

#include "subseries/catalog.hpp"
#include "subseries/randomness.hpp"
#include "subseries/series.hpp"

using namespace subseries;

namespace {

Rational q(long a, long b = 1) { return Rational(a, b); }

FormalSeries c0_basis_series() {
  return FormalSeries(Space::seq_c0(), [](index_t n) { return FloatVector::basis(Space::seq_c0(), n); }, "e_n");
}

FormalSeries l2_harmonic() {
  Space s = Space::seq_l2();
  return FormalSeries(
      s, [s](index_t n) { return FloatVector::basis(s, n, 1.0 / double(n + 1)); }, "e_n/(n+1)", nullptr, std::nullopt,
      [](index_t n) { return ExactVector::basis(Space::seq_l2(Precision::ExactRational), n, Rational(1, n + 1)); });
}

CoefficientSeq signs(std::vector<long> v) {
  std::vector<Rational> r(v.begin(), v.end());
  return CoefficientSeq::from_list(CoefficientKind::Signs, r);
}

CoefficientSeq selectors(std::vector<long> v) {
  std::vector<Rational> r(v.begin(), v.end());
  return CoefficientSeq::from_list(CoefficientKind::Selectors, r);
}

// sum_{n<=N} c_n x_n computed term by term.
ExactVector direct_sum(const FormalSeries& s, const std::vector<Rational>& c, index_t N) {
  ExactVector out(s.space().with_precision(Precision::ExactRational));
  for (index_t n = 0; n <= N; ++n) out.add_scaled(s.exact_term(n), c[static_cast<std::size_t>(n)]);
  return out;
}

}  // namespace

TEST_CASE("partial sums") {
  auto zero = CoefficientSeq::constant(CoefficientKind::Selectors, q(0));
  CHECK(partial_sum(l2_harmonic(), zero, 10).is_zero());

  auto eps = signs({1, -1, -1, 1});
  FloatVector p = partial_sum(c0_basis_series(), eps, 3);
  CHECK(p == FloatVector(Space::seq_c0(), {{0, 1.0}, {1, -1.0}, {2, -1.0}, {3, 1.0}}));
  CHECK(norm(p) == 1.0);

  auto ones = CoefficientSeq::constant(CoefficientKind::Selectors, q(1));
  CHECK(exact_partial_sum(l2_harmonic(), ones, 1) ==
        ExactVector(Space::seq_l2(Precision::ExactRational), {{0, q(1)}, {1, q(1, 2)}}));
}

TEST_CASE("sign to selector transform") {
  auto all_plus = CoefficientSeq::constant(CoefficientKind::Signs, q(1));
  auto sp = sigma_from_s(all_plus);
  CHECK(sp.plus.prefix(5) == std::vector<Rational>(5, q(1)));
  CHECK(sp.minus.prefix(5) == std::vector<Rational>(5, q(0)));

  auto all_minus = CoefficientSeq::constant(CoefficientKind::Signs, q(-1));
  auto sm = sigma_from_s(all_minus);
  CHECK(sm.plus.prefix(5) == std::vector<Rational>(5, q(0)));
  CHECK(sm.minus.prefix(5) == std::vector<Rational>(5, q(1)));

  auto s = l2_harmonic();
  auto eps = signs({1, -1});
  auto pair = sigma_from_s(eps);
  ExactVector lhs = exact_partial_sum(s, eps, 1);
  CHECK(lhs == s.exact_term(0) - s.exact_term(1));
  CHECK(lhs == exact_partial_sum(s, pair.plus, 1) - exact_partial_sum(s, pair.minus, 1));
}

TEST_CASE("selector to sign transform") {
  auto s = l2_harmonic();
  auto ones = CoefficientSeq::constant(CoefficientKind::Selectors, q(1));
  auto sp = s_from_sigma(ones);
  CHECK(sp.signs.prefix(4) == std::vector<Rational>(4, q(1)));

  auto none = CoefficientSeq::constant(CoefficientKind::Selectors, q(0));
  auto sn = s_from_sigma(none);
  CHECK(sn.signs.prefix(4) == std::vector<Rational>(4, q(-1)));
  ExactVector half_sum = exact_partial_sum(s, sn.ones, 6) * q(1, 2) + exact_partial_sum(s, sn.signs, 6) * q(1, 2);
  CHECK(half_sum.is_zero());

  auto chi = selectors({1, 0});
  auto sc = s_from_sigma(chi);
  ExactVector rhs = exact_partial_sum(s, sc.ones, 1) * q(1, 2) + exact_partial_sum(s, sc.signs, 1) * q(1, 2);
  CHECK(exact_partial_sum(s, chi, 1) == s.exact_term(0));
  CHECK(rhs == s.exact_term(0));
}

TEST_CASE("transform identities on random prefixes") {
  std::mt19937_64 rng(5);
  for (const auto& name : family_names()) {
    auto fam = catalog(name);
    for (int trial = 0; trial < 10; ++trial) {
      index_t N = std::uniform_int_distribution<index_t>(0, 40)(rng);
      std::vector<Rational> e, x;
      for (index_t n = 0; n <= N; ++n) {
        e.push_back(rng() & 1 ? 1 : -1);
        x.push_back(rng() & 1 ? 1 : 0);
      }
      auto eps = CoefficientSeq::from_list(CoefficientKind::Signs, e);
      auto chi = CoefficientSeq::from_list(CoefficientKind::Selectors, x);
      // Independent side: build the transformed coefficients by hand.
      std::vector<Rational> plus, minus, sg, one(e.size(), 1);
      for (std::size_t n = 0; n < e.size(); ++n) {
        plus.push_back((1 + e[n]) / 2);
        minus.push_back((1 - e[n]) / 2);
        sg.push_back(2 * x[n] - 1);
      }
      const auto& s = fam.series;
      CHECK(exact_partial_sum(s, eps, N) == direct_sum(s, plus, N) - direct_sum(s, minus, N));
      CHECK(exact_partial_sum(s, chi, N) == direct_sum(s, one, N) * q(1, 2) + direct_sum(s, sg, N) * q(1, 2));
      auto sp = sigma_from_s(eps);
      CHECK(sp.plus.prefix(N + 1) == plus);
      CHECK(sp.minus.prefix(N + 1) == minus);
      CHECK(s_from_sigma(chi).signs.prefix(N + 1) == sg);
    }
  }
}

TEST_CASE("block partitions") {
  BlockPartition p({{0, 1}, {3, 4}});
  CHECK(p.f(0) == 0);
  CHECK(p.f(1) == 0);
  CHECK(p.f(3) == 1);
  CHECK(p.f(2) == 2);
  CHECK(p.f(5) == 3);
  CHECK(p.fiber(2) == std::vector<index_t>{2});
  CHECK(p.fiber(3) == std::vector<index_t>{5});
  CHECK(p.last_claimed() == 4);
  // f(n) = f(m) iff n = m or they share a block.
  for (index_t n = 0; n < 20; ++n) {
    for (index_t m = 0; m < 20; ++m) {
      bool same_block = (n <= 1 && m <= 1) || ((n == 3 || n == 4) && (m == 3 || m == 4));
      CHECK((p.f(n) == p.f(m)) == (n == m || same_block));
    }
    auto fib = p.fiber(p.f(n));
    CHECK(std::find(fib.begin(), fib.end(), n) != fib.end());
  }
  CHECK_THROWS_AS(BlockPartition(std::vector<std::vector<index_t>>{{0, 1}, {1}}), ContractViolation);
  CHECK_THROWS_AS(BlockPartition(std::vector<std::vector<index_t>>(1)), ContractViolation);
}

TEST_CASE("coarse coefficients") {
  auto p = std::make_shared<const BlockPartition>(std::vector<std::vector<index_t>>{{0, 1}, {2}});
  auto c = coarse_coefficients(signs({1, -1}), p);
  CHECK(c.prefix(3) == std::vector<Rational>{1, 1, -1});

  auto single = std::make_shared<const BlockPartition>();
  auto id = coarse_coefficients(signs({1, -1, -1, 1}), single);
  CHECK(id.prefix(4) == std::vector<Rational>{1, -1, -1, 1});

  auto p2 = std::make_shared<const BlockPartition>(std::vector<std::vector<index_t>>{{0, 1}, {3, 4}});
  // ids: block 0 = {0,1}, block 1 = {3,4}, id 2 = {2}
  auto c2 = coarse_coefficients(signs({-1, 1, -1}), p2);
  auto v = c2.prefix(5);
  CHECK(v[0] == -1);
  CHECK(v[1] == -1);
  CHECK(v[2] == -1);
  CHECK(v[3] == 1);
  CHECK(v[4] == 1);
}

TEST_CASE("restriction to block ids") {
  auto fam = catalog("c0_paired");
  auto part = std::make_shared<const BlockPartition>();
  auto all = restrict(fam.series, part, BlockSet::all());
  auto none = restrict(fam.series, part, BlockSet::none());
  auto even = restrict(fam.series, part, BlockSet::even());
  for (index_t n = 0; n < 30; ++n) {
    CHECK(all.term(n) == fam.series.term(n));
    CHECK(none.term(n).is_zero());
    if (n % 2 == 0) {
      CHECK(even.term(n) == fam.series.term(n));
    } else {
      CHECK(even.term(n).is_zero());
    }
  }
}

TEST_CASE("block set parsing") {
  CHECK(BlockSet::parse("all") == BlockSet::all());
  CHECK(BlockSet::parse("none") == BlockSet::none());
  CHECK(BlockSet::parse("0,2,5") == BlockSet::finite({0, 2, 5}));
  CHECK(BlockSet::even().contains(4));
  CHECK_FALSE(BlockSet::odd().contains(4));
  CHECK(BlockSet::even().intersect(BlockSet::finite({1, 2, 3})) == BlockSet::finite({2}));
  CHECK_THROWS_AS(BlockSet::parse("x"), ContractViolation);
}

TEST_CASE("coefficient value constraints") {
  CHECK_THROWS_AS(signs({1, 0}), ContractViolation);
  CHECK_THROWS_AS(selectors({2}), ContractViolation);
  CHECK_THROWS_AS(CoefficientSeq::constant(CoefficientKind::Signs, q(1), 5), ContractViolation);
}
