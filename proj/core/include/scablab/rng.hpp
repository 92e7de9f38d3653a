// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_RNG_HPP_
#define SCABLAB_RNG_HPP_

#include <cstdint>
#include <string_view>

namespace scablab {

// SplitMix64 finalizer. Also used to derive stream keys and episode seeds.
std::uint64_t mix64(std::uint64_t x);

// 64-bit FNV-1a over a byte range.
std::uint64_t fnv1a(const void* data, std::size_t len,
                    std::uint64_t seed = 0xcbf29ce484222325ull);

// Deterministic seed for a named sub-computation of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view name,
                          std::uint64_t index = 0);

// Counter-based PRNG. A stream is fully determined by (seed, name, index);
// draws from one stream never depend on how other streams are interleaved.
// That independence is what makes the stealth-identity and replay checks
// byte-exact. State is (key, counter), so streams serialize trivially.
class RngStream {
 public:
  RngStream() : key_(0) {}
  RngStream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

  std::uint64_t next_u64();
  double next_double();  // [0, 1), 53-bit resolution
  std::uint64_t next_below(std::uint64_t n);  // unbiased in [0, n), n > 0
  int uniform_int(int lo, int hi);            // inclusive bounds
  double uniform(double lo, double hi);
  bool bernoulli(double p);
  double normal();  // standard normal; two draws per call, no cached state

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }
  void restore(std::uint64_t key, std::uint64_t counter) {
    key_ = key;
    counter_ = counter;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace scablab

#endif  // SCABLAB_RNG_HPP_
