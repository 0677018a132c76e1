#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace irsense {

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Engine seeded from a global seed plus a string key, so per-topic draws do
// not depend on container iteration order.
inline std::mt19937_64 keyed_engine(std::uint64_t seed, std::string_view key) {
  return std::mt19937_64(mix64(seed ^ fnv1a64(key)));
}

// Bounded draw via the high bits of a 128-bit product. std::uniform_int_distribution
// is implementation-defined, so it cannot back reproducible artifacts.
template <class Engine>
std::uint64_t bounded_draw(Engine& eng, std::uint64_t bound) {
  using u128 = unsigned __int128;
  return static_cast<std::uint64_t>((static_cast<u128>(eng()) * bound) >> 64);
}

// Deterministic partial Fisher-Yates: first k positions of a shuffle of 0..n-1.
template <class Engine>
std::vector<std::size_t> sample_indices(Engine& eng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(bounded_draw(eng, n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k < n ? k : n);
  return idx;
}

}  // namespace irsense
