#pragma once

#include <cstdint>
#include <vector>

#include "walkmax/params.hpp"

namespace walkmax {

// Tridiagonal transfer matrix on the level states {0, ..., k}. Entry (i, j)
// is the one-step (walks) or one-block (traffic, ell = 1) probability of
// moving from level j to level i while the running maximum stays <= k;
// columns are substochastic, with deficit only in the top column(s).
// Bands are indexed by row: sub[i] = A(i, i-1), diag[i] = A(i, i),
// super[i] = A(i, i+1).
template <class T>
struct TriBandMatrix {
  int k = 0;
  std::vector<T> sub;    // size k+1, sub[0] unused
  std::vector<T> diag;   // size k+1
  std::vector<T> super;  // size k+1, super[k] unused
};

using TransferMatrix = TriBandMatrix<double>;

// Builds the level-truncated transfer matrix.
//   strong:  k >= 1 (level 0 alone is degenerate: the chain leaves it at
//            step one with certainty; cdf handles k = 0 directly)
//   weak:    k >= 0
//   traffic: k >= 0, ell == 1 only. The k = 0 matrix is [q]: a single
//            surviving block must have no arrival, since an arrival tops
//            out at level 1 mid-block. For k >= 1 the pattern is
//            diag = {1-p^2, 2pq, ..., 2pq, pq}, super = q^2, sub = p^2;
//            the bottom corner pq admits only the no-arrival/no-departure
//            hold, keeping the mid-block value at or below k.
TransferMatrix build_transfer(const Scenario& s, const WalkParams& w, int k);

// Default cap on scalar multiply-adds for one matrix-power evaluation.
inline constexpr std::int64_t kDefaultOpsBudget = 1'000'000'000;

// P{M_n <= k} by iterated band-matrix/vector products in doubles, starting
// from level 0. n is interpreted in the scenario's natural unit (steps for
// walks, whole blocks for traffic; step counts are floored to blocks).
// Returns exactly 1 when k >= n in natural units. Throws BudgetError when
// the evaluation would exceed ops_budget scalar multiply-adds.
double cdf_matrix_power(const Scenario& s, const WalkParams& w, TimeIndex n,
                        int k, std::int64_t ops_budget = kDefaultOpsBudget);

}  // namespace walkmax
