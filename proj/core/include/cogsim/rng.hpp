#pragma once

#include <cstdint>
#include <random>

namespace cogsim {

// splitmix64 finalizer, used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seed for sub-stream `index` of `seed`: splitmix64(seed ^ splitmix64(index)).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Seeded random stream. Draws are built from raw mt19937_64 output rather than
// std distributions so sequences are identical across standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cogsim
