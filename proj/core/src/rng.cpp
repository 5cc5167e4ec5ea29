#include "sesc/rng.hpp"

#include <cmath>
#include <numbers>

namespace sesc {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<std::uint64_t> split_seed(std::uint64_t master_seed, int count) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(count));
  std::uint64_t state = master_seed;
  for (auto& s : seeds) {
    s = splitmix64(state);
  }
  return seeds;
}

namespace {

// Top 53 bits of a 64-bit word mapped to [0, 1).
inline double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace

double NormalSampler::operator()() {
  const double u1 = 1.0 - to_unit(engine_());  // (0, 1]; keeps log finite
  const double u2 = to_unit(engine_());
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace sesc
