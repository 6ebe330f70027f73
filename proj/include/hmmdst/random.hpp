#pragma once

#include <cstdint>
#include <span>

namespace hmmdst {

// SplitMix64 finalizer. Bijective on u64; the basis for all seeding here.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Derives an independent stream seed: the `stream`-th output of a SplitMix64
// sequence started at `seed`. Used for per-dialog substreams and experiment
// cell seeds, so identical (seed, stream) pairs always replay identically.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

// Counter-based generator: output i is mix64(seed + (i+1)*gamma), i.e. plain
// SplitMix64. Platform-independent by construction, unlike the std
// distributions, which keeps model files and corpora byte-reproducible.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform index in [0, n). Double-based; fine for the small n used here.
  std::size_t uniform_index(std::size_t n) {
    auto i = static_cast<std::size_t>(next_double() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  // Draws from a categorical distribution given by `probs` (sums to ~1).
  std::size_t sample(std::span<const double> probs) {
    const double u = next_double();
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      cum += probs[i];
      if (u < cum) return i;
    }
    return probs.empty() ? 0 : probs.size() - 1;
  }

private:
  std::uint64_t state_;
};

}  // namespace hmmdst
