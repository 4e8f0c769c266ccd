#pragma once

#include <vector>

#include "walkmax/params.hpp"
#include "walkmax/rational.hpp"

namespace walkmax {

// Where the traffic queue's running maximum is sampled: after every step
// (the definition used by the exact matrices, series, and roots) or only at
// block boundaries (mid-block excursions invisible). Walks ignore this.
enum class MaxConvention { EveryStep, BlockEnd };

// Exact pmf of the maximum M_n by enumeration of all 2^steps step sequences,
// applying the per-step dynamics directly; index = maximum level. Serves as
// the independent oracle for the matrix/series machinery. Requires exact
// params. Limits: walks n <= 20 steps; traffic n <= 13 blocks with
// blocks * 2 * ell <= 26 enumerated steps (any ell).
std::vector<Rational> brute_force_distribution(
    const Scenario& s, const WalkParams& w, TimeIndex n,
    MaxConvention conv = MaxConvention::EveryStep);

// P{M_n <= k} from the enumerated distribution.
Rational brute_force_cdf(const Scenario& s, const WalkParams& w, TimeIndex n,
                         int k, MaxConvention conv = MaxConvention::EveryStep);

}  // namespace walkmax
