#pragma once

#include <cstdint>
#include <random>

namespace stqmle {

using Rng = std::mt19937_64;

// SplitMix64 finaliser; used to derive well-separated stream seeds.
constexpr std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of stream `stream` under master seed `seed`. Distinct (seed, stream)
// pairs give independent generators regardless of how streams are scheduled.
constexpr std::uint64_t StreamSeed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64(SplitMix64(seed) ^ SplitMix64(stream + 0x632be59bd9b4e019ULL));
}

inline Rng MakeStream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(StreamSeed(seed, stream));
}

}  // namespace stqmle
