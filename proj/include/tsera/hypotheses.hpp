#pragma once

#include <utility>

#include "tsera/tensor.hpp"

namespace tsera {

// Hypotheses are the upper-triangle pairs (i, j), i < j, of an m x m
// structure, enumerated row by row: (0,1), (0,2), ..., (0,m-1), (1,2), ...

constexpr Index pair_count(Index m) { return m * (m - 1) / 2; }

constexpr Index pair_index(Index i, Index j, Index m) {
  return i * (2 * m - i - 1) / 2 + (j - i - 1);
}

inline std::pair<Index, Index> pair_at(Index h, Index m) {
  Index i = 0;
  while (h >= m - 1 - i) {
    h -= m - 1 - i;
    ++i;
  }
  return {i, i + 1 + h};
}

/// Upper-triangle entries of a square matrix in hypothesis order.
inline Vector upper_pairs(const Matrix& A) {
  const Index m = A.rows();
  Vector out(pair_count(m));
  Index h = 0;
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j) out(h++) = A(i, j);
  return out;
}

}  // namespace tsera
