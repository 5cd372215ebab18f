#pragma once

#include <cstdint>
#include <random>

namespace qnet {

/// Deterministic RNG with cheap independent substreams.
///
/// Monte Carlo trials draw their generator from
/// Rng::substream(master_seed, stream_id), so results are identical no
/// matter how trials are distributed over workers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(mix(seed)) {}

  static Rng substream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return Rng(mix(master_seed) ^ mix(stream_id * 0x9e3779b97f4a7c15ull + 1));
  }

  double uniform() { return dist_(eng_); }

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t next_u64() { return eng_(); }

  std::mt19937_64& engine() { return eng_; }

 private:
  // splitmix64 finalizer; decorrelates nearby seeds.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::mt19937_64 eng_;
  std::uniform_real_distribution<double> dist_{0.0, 1.0};
};

}  // namespace qnet
