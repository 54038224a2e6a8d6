#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fibernn {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a path of indices.
// Each index is hashed before mixing, so (1, 2) and (2, 1) give different seeds.
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = splitmix64(base);
  std::uint64_t depth = 0;
  for (std::uint64_t index : path) {
    h = splitmix64(h ^ splitmix64(index + (++depth << 56)));
  }
  return h;
}

inline constexpr const char* kSeedRule =
    "trial_seed = derive_seed(base_seed, {sample_index, trial_index}); "
    "pulse_seed = derive_seed(trial_seed, {group_index, pulse_index}); "
    "derive_seed chains splitmix64 over the hashed indices";

}  // namespace fibernn
