#pragma once

#include "walkmax/params.hpp"

namespace walkmax {

// Parameters of the limiting double-geometric (discrete Gumbel) law of the
// maximum: P{M_n <= k} -> exp(-c * n * r^-k) as n -> infinity with
// k - log_r(n) bounded. c depends on the time unit (traffic: a horizon of m
// blocks is n = 2m steps, so c_steps = c_blocks / 2 and the two
// parameterizations give identical limit CDFs); r does not.
struct GumbelLimit {
  double c = 0.0;       // scale constant, > 0
  double r = 0.0;       // geometric base, > 1
  TimeUnit unit = TimeUnit::Steps;
};

// Asymptotic mean/variance ingredients of M_n (n in steps):
//   E(M_n)  ~ log_r(n) + (gamma + ln c)/ln r + 1/2        (+ tiny periodic)
//   V(M_n)  ~ pi^2/6 * 1/ln(r)^2 + 1/12                   (+ tiny periodic)
// with (c, r) the steps-unit limit constants. The periodic fluctuation
// terms have no closed form; fluctuation_band is the acceptance band used
// in place of modeling them.
struct MomentAsymptotics {
  double mean_offset = 0.0;       // (gamma + ln c)/ln r + 1/2
  double variance = 0.0;          // pi^2/6/ln(r)^2 + 1/12
  double gamma_const = 0.0;       // Euler-Mascheroni constant
  double fluctuation_band = 0.02; // default acceptance band
};

inline constexpr double kEulerGamma = 0.57721566490153286;

// Limit constants per scenario:
//   strong:          c = (1-2p)^2 / (2 q^2),      r = q/p
//   weak:            c = p (1-2p)^2 / q^2,        r = q/p
//   traffic, blocks: c = p (1-2p)^2 / q^3,        r = (q/p)^2
//   traffic, steps:  c = p (1-2p)^2 / (2 q^3),    r = (q/p)^2
// Walks are parameterized in steps only; traffic requires ell = 1.
GumbelLimit limit_constant(const Scenario& s, const WalkParams& w,
                           TimeUnit unit);

// exp(-c * n * r^-k) with (c, r) taken in n's time unit. Exact 1 for n = 0.
double gumbel_cdf(const Scenario& s, const WalkParams& w, TimeIndex n, int k);

// log_r(n) + (gamma + ln c)/ln r + 1/2, in steps units (n converted).
double asymptotic_mean(const Scenario& s, const WalkParams& w, TimeIndex n);

// pi^2/6 * 1/ln(r)^2 + 1/12, r in steps units (unit-free value).
double asymptotic_variance(const Scenario& s, const WalkParams& w);

MomentAsymptotics moment_asymptotics(const Scenario& s, const WalkParams& w);

}  // namespace walkmax
