#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace vstsae {

/// Mixes a 64-bit value (splitmix64 finalizer).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the stream addressed by `path` under `master`. Streams depend only
/// on (master, path), so any schedule that visits the same paths draws the
/// same numbers.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = mix64(master);
  for (std::uint64_t v : path) h = mix64(h ^ mix64(v + 0x632be59bd9b4e019ULL));
  return h;
}

using Engine = std::mt19937_64;

inline Engine make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  return Engine(stream_seed(master, path));
}

/// Stream tags keep purposes apart within one replicate.
enum class StreamTag : std::uint64_t {
  kData = 1,
  kMseBootstrapRE = 2,
  kMseBootstrapYL = 3,
  kIntervalBootstrap = 4,
  kMseBootstrap = 5,
};

constexpr std::uint64_t tag(StreamTag t) noexcept { return static_cast<std::uint64_t>(t); }

}  // namespace vstsae
