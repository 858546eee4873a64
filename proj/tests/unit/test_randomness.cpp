#include <doctest.h>

#include <array>
#include <cstdlib>

#include <boost/math/distributions/chi_squared.hpp>

#include "subseries/randomness.hpp"

using namespace subseries;

namespace {

constexpr int kDraws = 100000;

double chi2_pvalue(const std::array<long, 16>& counts, long total) {
  double expected = double(total) / 16.0, stat = 0;
  for (long c : counts) stat += (c - expected) * (c - expected) / expected;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(15), stat));
}

}  // namespace

TEST_CASE("sampling is a pure function of the seed") {
  Seed s{42, 3};
  CHECK(sample_haar(s, 8) == sample_haar(s, 8));
  CHECK(sample_haar(s, 8) != sample_haar(Seed{43, 3}, 8));
  CHECK(sample_haar(s, 8) != sample_haar(s.substream(1), 8));
  // prefix consistency: longer draws extend shorter ones
  auto a = sample_haar(s, 100);
  auto b = sample_haar(s, 10);
  CHECK(std::equal(b.begin(), b.end(), a.begin()));
  SignStream stream(s);
  for (index_t n = 0; n < 100; ++n) CHECK(stream.sign(n) == a[static_cast<std::size_t>(n)]);
}

TEST_CASE("mean and correlation of Haar signs") {
  double mean = 0, corr = 0;
  for (int j = 0; j < kDraws; ++j) {
    auto e = sample_haar(Seed{1234, 0}.substream(j), 2);
    mean += e[0];
    corr += e[0] * e[1];
  }
  CHECK(std::abs(mean / kDraws) <= 0.02);
  CHECK(std::abs(corr / kDraws) <= 0.02);
}

TEST_CASE("Haar patterns of length four are uniform") {
  std::array<long, 16> counts{};
  for (int j = 0; j < kDraws; ++j) {
    auto e = sample_haar(Seed{99, 7}.substream(j), 4);
    int code = 0;
    for (int k = 0; k < 4; ++k) code = 2 * code + (e[k] > 0);
    ++counts[code];
  }
  CHECK(chi2_pvalue(counts, kDraws) > 0.001);
}

TEST_CASE("coarse sampling on the singleton partition is uniform") {
  BlockPartition single;
  std::array<long, 16> counts{};
  for (int j = 0; j < kDraws; ++j) {
    auto e = sample_coarse(Seed{5, 1}.substream(j), single, 4);
    int code = 0;
    for (int k = 0; k < 4; ++k) code = 2 * code + (e[k] > 0);
    ++counts[code];
  }
  CHECK(chi2_pvalue(counts, kDraws) > 0.001);
}

TEST_CASE("coarse samples are constant on blocks") {
  BlockPartition p({{0, 1}, {2, 3}});
  for (int j = 0; j < 1000; ++j) {
    auto e = sample_coarse(Seed{8, 0}.substream(j), p, 6);
    CHECK(e[0] == e[1]);
    CHECK(e[2] == e[3]);
  }
  BlockPartition q({{0, 1}});
  long plus = 0;
  for (int j = 0; j < kDraws; ++j) plus += sample_coarse(Seed{9, 0}.substream(j), q, 2)[0] > 0;
  CHECK(std::abs(double(plus) / kDraws - 0.5) <= 0.02);

  auto part = std::make_shared<const BlockPartition>(p);
  auto c = coarse_signs(Seed{8, 0}, part);
  auto v = sample_coarse(Seed{8, 0}, p, 10);
  for (index_t n = 0; n < 10; ++n) CHECK(c.exact(n) == v[static_cast<std::size_t>(n)]);
}

TEST_CASE("selectors from signs") {
  CHECK(chi_from_eps(std::vector<int>{1}) == std::vector<int>{0});
  CHECK(chi_from_eps(std::vector<int>{-1}) == std::vector<int>{1});
  CHECK(chi_from_eps(std::vector<int>{1, -1, -1, 1}) == std::vector<int>{0, 1, 1, 0});
  auto eps = haar_signs(Seed{3, 0});
  auto chi = chi_from_eps(eps);
  CHECK(chi.kind() == CoefficientKind::Selectors);
  for (index_t n = 0; n < 50; ++n) CHECK(chi.exact(n) == (1 - eps.exact(n)) / 2);
}

TEST_CASE("default seed honours the environment") {
  ::setenv("SUBSERIES_SEED", "777", 1);
  CHECK(default_seed().value == 777);
  ::unsetenv("SUBSERIES_SEED");
  CHECK(default_seed().value == 0x5eed);
}
