#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace topics {

// The mt19937_64 engine output is pinned by the standard, but the standard
// distributions are not. All randomness below maps engine words manually so
// that a seed produces the same stream on every platform.

inline double uniform_unit(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline std::size_t uniform_index(std::mt19937_64& engine, std::size_t n) {
  return static_cast<std::size_t>(engine() % n);
}

inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace topics
