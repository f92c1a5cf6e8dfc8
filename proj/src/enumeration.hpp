#pragma once

// Shared enumeration helpers for the brute-force counters and decoders.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace subsetsum::detail {

// C(n,k), saturating at 2^63-1 instead of overflowing.
inline std::uint64_t comb_u64(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  const unsigned __int128 cap = static_cast<unsigned __int128>(UINT64_MAX);
  for (std::int64_t j = 1; j <= k; ++j) {
    r = r * static_cast<unsigned __int128>(n - k + j) / static_cast<unsigned __int128>(j);
    if (r > cap) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

// Advances c (ascending positions, size k) to the next k-combination of
// {0..n-1} in lexicographic order; false once exhausted.
inline bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Combination at a given lexicographic rank (0-based).
inline std::vector<int> unrank_combination(int n, int k, std::uint64_t rank) {
  std::vector<int> c(static_cast<std::size_t>(k));
  int pos = 0;
  for (int i = 0; i < k; ++i) {
    while (true) {
      const std::uint64_t block = comb_u64(n - pos - 1, k - i - 1);
      if (rank < block) break;
      rank -= block;
      ++pos;
    }
    c[static_cast<std::size_t>(i)] = pos++;
  }
  return c;
}

// Big-endian mask of a position set: bit (n-1-i) set when position i is
// included. Ascending keys order the induced spin sequences lexicographically
// with -1 before +1.
inline std::uint64_t bigendian_key(const std::vector<int>& positions, int n) {
  std::uint64_t key = 0;
  for (int i : positions) key |= std::uint64_t{1} << (n - 1 - i);
  return key;
}

inline std::uint64_t reverse_low_bits(std::uint64_t mask, int n) {
  std::uint64_t key = 0;
  for (int i = 0; i < n; ++i)
    if (mask >> i & 1) key |= std::uint64_t{1} << (n - 1 - i);
  return key;
}

}  // namespace subsetsum::detail
