#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace loglshd {

// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a over the bytes, followed by a keyed finalizer.
constexpr std::uint64_t hash_bytes(std::string_view bytes,
                                   std::uint64_t key = 0) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ key;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h ^ (key * 0x9e3779b97f4a7c15ULL));
}

/// Derives an independent sub-seed for a named pipeline stage, so that every
/// stage can be reproduced on its own from the run seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::string_view stage) noexcept {
  return mix64(hash_bytes(stage, 0x5eed5eed5eed5eedULL) ^ mix64(seed));
}

/// Portable 64-bit generator (SplitMix64 stream). Unlike the standard
/// distributions its output is identical on every platform.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  /// Uniform integer in [0, bound) by rejection; bound must be > 0.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t v = (*this)();
    while (v >= limit) v = (*this)();
    return v % bound;
  }

  /// Uniform real in [0, 1).
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace loglshd
