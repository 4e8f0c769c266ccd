#pragma once

#include <vector>

#include "walkmax/params.hpp"

namespace walkmax {

// Dominant real zero z_k > 1 of the denominator polynomial R_k, solved in
// the t-domain where the root equation is numerically well conditioned.
// For walks t = sqrt(1 - 4pq z^2), for the traffic queue t = sqrt(1 - 4pq z),
// so t decreases from t_max = 1 - 2p (at z = 1) to 0 (at the branch point)
// and the dominant zero corresponds to the unique t_k in (0, t_max).
struct RootResult {
  int k = 0;
  double t = 0.0;            // t_k, root of the t-domain equation
  double gap = 0.0;          // s_k = (1-2p) - t_k, solved directly (> 0)
  double z = 1.0;            // z_k > 1
  double z_minus_1 = 0.0;    // z_k - 1 computed without cancellation
  double residue_amp = 0.0;  // a_k = -Q_k(z_k) / (z_k * R_k'(z_k))
  double mirror_ratio = 0.0; // ratio of the residue at -z_k to a_k when R_k
                             // is even in z (the strong scenario); 0 otherwise
  double residual = 0.0;     // a-posteriori bound on the relative error of
                             // the branch gap (equivalently of z_k - 1): the
                             // final Newton step of the log-form root equation
};

// Smallest level k at which the t-domain equation has an interior root
// (equivalently: R_k has a real zero strictly between 1 and the branch
// point). Derived from the slope of the log-form equation at t = 0:
//   strong walk:  k + 1 > 1 / (1 - 2p)
//   weak walk:    k + 1 > 1 / (sqrt(q/p) - 1)
//   traffic:      2k + 2 > 1 / (1 - 2p)
// Exact-boundary cases have no interior root and are rounded up.
int min_root_level(const Scenario& s, const WalkParams& w);

// Solves the t-domain root equation for level k by safeguarded
// bisection+Newton on the logarithmic form, in the gap variable
// s = t_max - t (conditioning: s_k shrinks geometrically in k while t_k
// saturates at t_max). Throws BracketError when no interior root exists
// (k < min_root_level) after probing the full lobe, and domain_error on
// nonconvergence. Traffic requires ell = 1.
RootResult solve_root(const Scenario& s, const WalkParams& w, int k);

// Dominant-pole approximation to P{M_n <= k}; n in any unit (converted to
// the scenario's natural unit). For the strong scenario R_k is even in z,
// so -z_k is a pole of equal modulus and both residues are summed (the
// mirror term is exact and of relative size (z_k-1)/(z_k+1)). The value is
// clamped to [0,1]: the approximation can marginally exceed 1 for small n.
double pole_cdf(const Scenario& s, const WalkParams& w, TimeIndex n, int k);

struct RootRow {
  int k = 0;
  double z = 0.0;
  double scaled_gap = 0.0;  // (z_k - 1) * (q/p)^(e*k), e = 1 walks, 2 traffic
};

// Rows (k, z_k, scaled gap) for k in [k_lo, k_hi]; the scaled gap converges
// to the scenario's limit constant as k grows.
std::vector<RootRow> root_convergence_table(const Scenario& s,
                                            const WalkParams& w, int k_lo,
                                            int k_hi);

}  // namespace walkmax
