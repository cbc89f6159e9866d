#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace peerpanel {

/// Permutation of [0, n) by Fisher-Yates over mt19937_64; std::shuffle's
/// output differs between standard libraries, this does not.
inline std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng() % i;
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

}  // namespace peerpanel
