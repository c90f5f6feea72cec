#pragma once

#include <cstdint>

namespace sdftest {

/// Identifies one reproducible random stream.
struct SamplerState {
  std::uint64_t master_seed = 42;
  std::uint64_t stream_id = 0;
};

/// SplitMix64-style mixing of two words; used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

/// Counter-based 64-bit generator: the i-th output is the SplitMix64
/// finaliser applied to key + i * golden-ratio increment. Any position can
/// be reached in O(1) via `discard`.
class CounterEngine {
 public:
  using result_type = std::uint64_t;

  explicit CounterEngine(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept;
  void discard(std::uint64_t steps) noexcept { counter_ += steps; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Standard normal variates for one (master_seed, stream_id) stream.
///
/// The stream depends only on the state, never on which thread draws it or
/// on how many other streams exist.
class NormalStream {
 public:
  explicit NormalStream(SamplerState state);

  double operator()();

 private:
  CounterEngine engine_;
};

}  // namespace sdftest
