#include "sdftest/random.hpp"

#include <boost/random/normal_distribution.hpp>

namespace sdftest {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t finalise(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
  return finalise((finalise(a + kGolden) ^ (b * 0xd1342543de82ef95ULL + 1)) + kGolden);
}

CounterEngine::result_type CounterEngine::operator()() noexcept {
  return finalise(key_ + ++counter_ * kGolden);
}

NormalStream::NormalStream(SamplerState state)
    : engine_(mix_seed(state.master_seed, state.stream_id)) {}

double NormalStream::operator()() {
  // Ziggurat sampler; holds no state beyond the engine.
  boost::random::normal_distribution<double> normal;
  return normal(engine_);
}

}  // namespace sdftest
