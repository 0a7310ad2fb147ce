#pragma once

#include <cstdint>
#include <random>
#include <vector>

// Seeding and sampling primitives. std::uniform_int_distribution and
// std::shuffle are implementation-defined, so everything random in this
// project goes through the helpers below; outputs are then identical across
// compilers and standard libraries.

namespace root13 {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Stable sub-seed for worker `index`: per-tree seeds in the forest and
// per-fold seeds in cross-validation. Mixing keeps parallel schedules
// irrelevant to the result.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 1));
}

// Uniform draw from [0, n) via Lemire's multiply-shift.
inline std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(gen()) * n) >> 64);
}

template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& gen) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[bounded(gen, i)]);
  }
}

}  // namespace root13
