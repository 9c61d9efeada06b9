#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace noclick {

// One block of the Philox 4x64 counter-based generator, 10 rounds.
// Matches the widely used reference constants, so output can be checked
// against independent implementations.
std::array<std::uint64_t, 4> philox4x64_block(const std::array<std::uint64_t, 4>& counter,
                                              const std::array<std::uint64_t, 2>& key);

// Deterministic stream of random numbers keyed by (seed, stream). Distinct
// stream ids give statistically independent sequences, so per-setting
// streams can be consumed in any order without changing results.
class PhiloxStream {
 public:
  explicit PhiloxStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double next_double();

 private:
  void refill();

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_{{0, 0, 0, 0}};
  std::array<std::uint64_t, 4> buffer_{{0, 0, 0, 0}};
  int buffer_pos_ = 4;
};

std::uint64_t fnv1a64(std::string_view bytes);

std::uint64_t splitmix64(std::uint64_t x);

// Stable seed for a named sub-experiment: hash the label into the parent
// seed. Used so that one top-level seed reproducibly fans out.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

// Binomial(n, p) variate. Uses pmf inversion for small n*p and the BTPE
// rejection sampler otherwise, so single draws stay O(1) even for n ~ 1e9.
std::int64_t sample_binomial(PhiloxStream& rng, std::int64_t n, double p);

}  // namespace noclick
