#pragma once

#include <utility>

#include "cencon/errors.hpp"

namespace cencon {

/// Number of unordered pairs of n bodies.
constexpr int pair_count(int n) { return n * (n - 1) / 2; }

/// Canonical lexicographic index of the pair (i,j), 0 <= i < j < n.
/// Order: (0,1),(0,2),...,(0,n-1),(1,2),...,(n-2,n-1).
/// Every module that stores per-pair data uses this function.
inline int pair_index(int i, int j, int n) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n || i == j) throw InputError("pair_index: indices out of range");
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

/// Inverse of pair_index.
inline std::pair<int, int> pair_from_index(int idx, int n) {
  if (idx < 0 || idx >= pair_count(n)) throw InputError("pair_from_index: index out of range");
  int i = 0;
  int row = n - 1;  // pairs with first element i
  while (idx >= row) {
    idx -= row;
    ++i;
    --row;
  }
  return {i, i + 1 + idx};
}

}  // namespace cencon
