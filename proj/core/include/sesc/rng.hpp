#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sesc {

// splitmix64 step; used to derive independent per-channel seeds from one
// master seed so that multi-channel noise streams are reproducible.
std::uint64_t splitmix64(std::uint64_t& state);

std::vector<std::uint64_t> split_seed(std::uint64_t master_seed, int count);

// Standard normal draws from a seeded mt19937_64 via Box-Muller.  The draw
// order is fixed (two 64-bit words per sample), so a trajectory is
// bit-reproducible given (seed, dt).
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

  double operator()();

 private:
  std::mt19937_64 engine_;
};

}  // namespace sesc
