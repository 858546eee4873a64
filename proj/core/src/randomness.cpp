#include "subseries/randomness.hpp"

#include <cstdlib>
#include <string>

namespace subseries {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kDefaultSeed = 0x5eedULL;

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Seed Seed::substream(std::uint64_t j) const { return {value, mix64(stream + kGolden) ^ (j + 1)}; }

Seed default_seed() {
  if (const char* env = std::getenv("SUBSERIES_SEED"); env != nullptr && *env != '\0') {
    try {
      return {std::stoull(env, nullptr, 0), 0};
    } catch (const std::exception&) {
      throw ContractViolation(std::string("SUBSERIES_SEED is not an integer: ") + env);
    }
  }
  return {kDefaultSeed, 0};
}

SignStream::SignStream(Seed seed) : key_(mix64(seed.value ^ mix64(seed.stream + kGolden))) {}

std::uint64_t SignStream::bits(index_t n) const {
  if (n < 0) throw ContractViolation("negative sample index");
  return mix64(key_ + (static_cast<std::uint64_t>(n) + 1) * kGolden);
}

std::vector<int> sample_haar(Seed seed, index_t N) {
  if (N < 1) throw ContractViolation("sample_haar needs N >= 1");
  SignStream s(seed);
  std::vector<int> out(static_cast<std::size_t>(N));
  for (index_t n = 0; n < N; ++n) out[static_cast<std::size_t>(n)] = s.sign(n);
  return out;
}

std::vector<int> sample_coarse(Seed seed, const BlockPartition& part, index_t N) {
  if (N < 1) throw ContractViolation("sample_coarse needs N >= 1");
  SignStream s(seed);
  std::vector<int> out(static_cast<std::size_t>(N));
  for (index_t n = 0; n < N; ++n) out[static_cast<std::size_t>(n)] = s.sign(part.f(n));
  return out;
}

std::vector<int> chi_from_eps(const std::vector<int>& eps) {
  std::vector<int> out;
  out.reserve(eps.size());
  for (int e : eps) {
    if (e != 1 && e != -1) throw ContractViolation("sign value must be +1 or -1");
    out.push_back((1 - e) / 2);
  }
  return out;
}

CoefficientSeq haar_signs(Seed seed) {
  SignStream s(seed);
  CoefficientLaw law;
  law.draw = CoefficientLaw::Draw::Haar;
  return CoefficientSeq(
      CoefficientKind::Signs, [s](index_t n) { return Rational(s.sign(n)); },
      [s](index_t n) { return static_cast<double>(s.sign(n)); }, std::move(law), Rational(1));
}

CoefficientSeq haar_selectors(Seed seed) { return chi_from_eps(haar_signs(seed)); }

CoefficientSeq coarse_signs(Seed seed, std::shared_ptr<const BlockPartition> part) {
  return coarse_coefficients(haar_signs(seed), std::move(part));
}

CoefficientSeq chi_from_eps(const CoefficientSeq& eps) {
  if (eps.kind() != CoefficientKind::Signs) throw ContractViolation("chi_from_eps needs signs");
  return affine(eps, CoefficientKind::Selectors, Rational(-1, 2), Rational(1, 2));
}

}  // namespace subseries
