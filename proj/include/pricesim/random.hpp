#pragma once

#include <cstdint>
#include <random>

namespace pricesim {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

/// Per-run seed: depends only on (master, run index), never on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_index) noexcept {
  return master_seed ^ splitmix64(run_index);
}

/// Deterministic uniform source owned by exactly one simulation run.
///
/// mt19937_64 output is fully specified by the standard, and the conversion to
/// doubles below does not go through std::uniform_real_distribution, so a seed
/// reproduces the same variates on every conforming toolchain.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  static RandomStream for_run(std::uint64_t master_seed, std::uint64_t run_index) {
    return RandomStream(derive_seed(master_seed, run_index));
  }

  RandomStream(const RandomStream&) = delete;
  RandomStream& operator=(const RandomStream&) = delete;
  RandomStream(RandomStream&&) noexcept = default;
  RandomStream& operator=(RandomStream&&) noexcept = default;

  /// Uniform on (0, 1], 53-bit grid.
  double uniform() { return (static_cast<double>(engine_() >> 11U) + 1.0) * 0x1.0p-53; }

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

}  // namespace pricesim
