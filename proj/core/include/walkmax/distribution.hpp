#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "walkmax/params.hpp"
#include "walkmax/transfer.hpp"

namespace walkmax {

// Which engine produced a table's values.
enum class CdfMethod { MatrixPower, Series, BruteForce, PoleApprox, Gumbel };
const char* method_name(CdfMethod m);

// Which engine exact_moments / pmf should draw CDF values from. Auto picks
// matrix power while the operation budget allows, else the pole
// approximation.
enum class CdfSource { Auto, MatrixPower, PoleApprox };

// CDF (and optionally PMF) of the maximum. Normally indexed by level k for
// a fixed horizon n; a series table is instead indexed by the horizon (in
// the scenario's natural unit) for a fixed level (index_is_time = true).
struct DistributionTable {
  Scenario scenario = Scenario::strong();
  WalkParams params;
  TimeIndex n{0, TimeUnit::Steps};
  std::vector<double> cdf;
  std::vector<double> pmf;  // empty unless computed
  CdfMethod method = CdfMethod::MatrixPower;
  bool index_is_time = false;
  int fixed_k = -1;  // the level, for index_is_time tables
};

struct Moments {
  double mean = 0.0;
  double mean_square = 0.0;
  double variance = 0.0;
  int k_stop = 0;  // last level whose tail term was accumulated
};

// Single CDF value through the selected source. Auto uses matrix power when
// 3*(k+1)*n fits the budget, else the pole approximation.
double cdf_value(const Scenario& s, const WalkParams& w, TimeIndex n, int k,
                 CdfSource source = CdfSource::Auto,
                 std::int64_t budget = kDefaultOpsBudget);

// Levels 0..k_max with both CDF and PMF columns; pmf(k) = cdf(k) - cdf(k-1)
// with cdf(-1) = 0. Strictly negative differences beyond a 1e-12 rounding
// slack are rejected; within the slack they are clamped to 0.
DistributionTable pmf(const Scenario& s, const WalkParams& w, TimeIndex n,
                      int k_max, CdfSource source = CdfSource::Auto,
                      std::int64_t budget = kDefaultOpsBudget);

// Matrix-power table over levels 0..k_max.
DistributionTable matrix_table(const Scenario& s, const WalkParams& w,
                               TimeIndex n, int k_max,
                               std::int64_t budget = kDefaultOpsBudget);

// Series-extraction table for one level: cdf[i] = P{M_i <= k} over horizons
// i = 0..n_max in the scenario's natural unit.
DistributionTable series_table(const Scenario& s, const WalkParams& w, int k,
                               std::int64_t n_max);

// mean = sum_k (1 - cdf(k)), mean_square = sum_k (2k+1)(1 - cdf(k)),
// truncated when 1 - cdf(k) < 1e-15. With the pole source, levels below the
// root-existence threshold contribute 1 - cdf = 1 exactly (their true CDF is
// below branch-point decay, which requires n large enough that the neglected
// mass is < 1e-30; smaller horizons are rejected). Throws if truncation is
// not reached by k = n (inconsistent source).
Moments exact_moments(const Scenario& s, const WalkParams& w, TimeIndex n,
                      CdfSource source = CdfSource::Auto,
                      std::int64_t budget = kDefaultOpsBudget);

}  // namespace walkmax
