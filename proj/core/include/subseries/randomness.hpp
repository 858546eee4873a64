#pragma once

/**
 * @file randomness.hpp
 * @brief Counter-based sign sampler for Haar measure on {-1,+1}^N and its
 * block-coarsened version.
 *
 * Sample n of stream (value, stream) is a pure function
 *
 *   key   = mix(value ^ mix(stream + 0x9e3779b97f4a7c15))
 *   bits  = mix(key + (n + 1) * 0x9e3779b97f4a7c15)
 *   sign  = top bit of bits ? -1 : +1
 *
 * where mix is the splitmix64 finalizer. Any coefficient can therefore be read
 * in O(1) without generating its predecessors, and parallel workers that use
 * distinct streams never share state.
 */

#include <cstdint>
#include <memory>
#include <vector>

#include "subseries/series.hpp"

namespace subseries {

struct Seed {
  std::uint64_t value = 0;
  std::uint64_t stream = 0;

  /// Independent child stream j (used for per-sample and per-experiment draws).
  Seed substream(std::uint64_t j) const;

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// SUBSERIES_SEED from the environment when set, otherwise a fixed default.
Seed default_seed();

/// splitmix64 output function.
std::uint64_t mix64(std::uint64_t x);

class SignStream {
 public:
  explicit SignStream(Seed seed);
  std::uint64_t bits(index_t n) const;
  int sign(index_t n) const { return (bits(n) >> 63) != 0 ? -1 : 1; }

 private:
  std::uint64_t key_;
};

/// N independent uniform signs.
std::vector<int> sample_haar(Seed seed, index_t N);

/// One uniform sign per block id, expanded along the partition: the output
/// is constant on every block.
std::vector<int> sample_coarse(Seed seed, const BlockPartition& part, index_t N);

/// chi_n = (1 - eps_n)/2.
std::vector<int> chi_from_eps(const std::vector<int>& eps);

/// Infinite versions as coefficient sequences carrying their law.
CoefficientSeq haar_signs(Seed seed);
CoefficientSeq haar_selectors(Seed seed);
CoefficientSeq coarse_signs(Seed seed, std::shared_ptr<const BlockPartition> part);
CoefficientSeq chi_from_eps(const CoefficientSeq& eps);

}  // namespace subseries
