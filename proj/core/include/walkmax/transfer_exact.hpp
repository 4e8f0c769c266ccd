#pragma once

#include "walkmax/rational.hpp"
#include "walkmax/transfer.hpp"

namespace walkmax {

// Exact-rational variants of the transfer machinery; params must carry an
// exact fraction. Kept in a separate header so the double-only surface does
// not pull in multiprecision types.

TriBandMatrix<Rational> build_transfer_exact(const Scenario& s,
                                             const WalkParams& w, int k);

// P{M_n <= k} in exact rational arithmetic (same index conventions as
// cdf_matrix_power). Intended for oracle-scale n.
Rational cdf_matrix_power_exact(const Scenario& s, const WalkParams& w,
                                TimeIndex n, int k);

}  // namespace walkmax
