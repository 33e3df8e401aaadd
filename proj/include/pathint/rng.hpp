#pragma once
#include <cstdint>
#include <random>

namespace pathint {

// splitmix64 step; used only to spread user seeds into engine seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent substream for (seed, stream).  Replica i of an ensemble draws
// from stream i, Monte Carlo block b from stream b; results are therefore
// reproducible for a given seed no matter how work is batched.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  std::uint64_t mixed = splitmix64(s) ^ (0xd1342543de82ef95ULL * (stream + 1));
  std::uint64_t s2 = mixed;
  return std::mt19937_64(splitmix64(s2));
}

}  // namespace pathint
