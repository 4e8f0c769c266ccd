#pragma once

#include <vector>

#include "walkmax/params.hpp"

namespace walkmax {

// The survival generating function of the level-k truncated chain is the
// rational function G_k(z) = sum_n P{M_n <= k} z^n = Q_k(z) / R_k(z), where
// R_k is the characteristic (denominator) polynomial of the transfer matrix
// and Q_k collects the initial-state numerator. Both satisfy short linear
// recurrences in k; z counts steps for walks and blocks for traffic.
struct RQPair {
  double R = 0.0;
  double Q = 0.0;
};

// Evaluates R_k(z), Q_k(z) by forward recurrence in k. k >= 0; traffic
// requires ell == 1.
RQPair eval_RQ_recurrence(const Scenario& s, const WalkParams& w, int k,
                          double z);

// Same values through the two-term closed forms (powers of the
// characteristic roots). Preconditions beyond the recurrence form:
//  - z must lie strictly below the branch point z_branch (real split roots),
//    and not within 1e-6 of it;
//  - weak requires z >= 0 (its closed form fixes the positive square-root
//    branch);
//  - |1 - z| >= 1e-12 (the numerator closed form divides by 1 - z).
// Throws std::domain_error when outside this region.
RQPair eval_RQ_closed(const Scenario& s, const WalkParams& w, int k, double z);

// dR_k/dz by the differentiated recurrence.
double eval_R_derivative(const Scenario& s, const WalkParams& w, int k,
                         double z);

// Branch point of the characteristic square root: 1/(2 sqrt(pq)) for walks,
// 1/(4pq) for traffic blocks. The dominant denominator zero z_k approaches 1
// from above as k grows and is real only below this point.
double z_branch(const Scenario& s, const WalkParams& w);

// Coefficient vectors (ascending powers of z) of R_k and Q_k.
struct RQPolynomials {
  std::vector<double> R;
  std::vector<double> Q;
};
RQPolynomials rq_polynomials(const Scenario& s, const WalkParams& w, int k);

// c_n = P{M_n <= k} for n = 0..n_max via formal division of the coefficient
// series (n in natural units: steps for walks, blocks for traffic).
std::vector<double> series_cdf(const Scenario& s, const WalkParams& w, int k,
                               int n_max);

}  // namespace walkmax
