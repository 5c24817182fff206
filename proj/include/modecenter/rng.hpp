#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace modecenter {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// FNV-1a of a label, so seeds can be keyed by names rather than positions.
constexpr std::uint64_t hash_label(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Child seed for a stream identified by (parent, key). Chains compose:
/// derive_seed(derive_seed(m, a), b) names the stream m/a/b.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key) noexcept {
  return mix64(mix64(parent) ^ (key + 0x632BE59BD9B4E019ULL));
}

inline std::uint64_t derive_seed(std::uint64_t parent, std::string_view label) noexcept {
  return derive_seed(parent, hash_label(label));
}

}  // namespace modecenter
