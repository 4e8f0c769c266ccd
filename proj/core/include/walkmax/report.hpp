#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "walkmax/distribution.hpp"
#include "walkmax/params.hpp"
#include "walkmax/simulate.hpp"

namespace walkmax {

// One level of the cross-method comparison. Absent values are NaN (emitted
// as empty CSV cells / JSON nulls): the exact column is absent beyond the
// operation budget and for traffic signals with ell >= 2 (where the
// pole/gumbel columns carry the ell=1 overlay instead), and pole values are
// absent below the root-existence threshold.
struct ComparisonRow {
  int k = 0;
  double cdf_exact = 0.0;
  double cdf_pole = 0.0;
  double cdf_gumbel = 0.0;
  double cdf_empirical = 0.0;
  double pmf_theory = 0.0;
  double pmf_empirical = 0.0;
  double dkw_band = 0.0;   // allowed |empirical - reference| at this level
  bool within_band = true;
};

struct ComparisonSummary {
  EnsembleStats empirical;
  double exact_mean = 0.0;
  double exact_variance = 0.0;
  double asymptotic_mean_value = 0.0;
  double asymptotic_variance_value = 0.0;
  double mean_residual = 0.0;  // empirical mean - reference mean
  double mean_band = 0.0;      // max(3*SEM, 0.03)
  double mean_gap_over_sem = 0.0;
  bool mean_within_band = true;
  bool bands_pass = true;
  // Traffic with ell >= 2 has no exact theory; the ell=1 overlay is
  // reported, its mismatch is expected, and bands are not failures.
  bool theory_mismatch_expected = false;
};

struct ComparisonMetadata {
  Scenario scenario = Scenario::strong();
  WalkParams params;
  std::int64_t n_steps = 0;
  std::int64_t n_natural = 0;
  TimeUnit natural_unit = TimeUnit::Steps;
  std::int64_t trials = 0;
  std::uint64_t base_seed = 0;
  std::string rng;
  MaxConvention max_convention = MaxConvention::EveryStep;
  bool truncated = false;
  std::string version;
};

struct ComparisonReport {
  ComparisonMetadata metadata;
  std::vector<ComparisonRow> rows;
  ComparisonSummary summary;
};

// Runs the ensemble and assembles the full cross-method report. Theory
// columns use the exact pipeline where available (matrix power within
// budget, else pole approximation; ell >= 2 gets the ell=1 overlay and the
// expected-mismatch flag). The DKW-style band is
// 4*sqrt(F(1-F)/trials) + 1e-3 against the reference CDF.
ComparisonReport build_comparison(const SimConfig& cfg,
                                  std::int64_t budget = 1000000000);

// CSV: `#`-prefixed metadata/summary lines, then a header row and per-k
// rows; probabilities with 17 significant digits; absent values empty.
std::string report_to_csv(const ComparisonReport& r);

// JSON with stable key order and a schema marker; round-trips bit-exactly
// through report_from_json + report_to_json.
std::string report_to_json(const ComparisonReport& r);
ComparisonReport report_from_json(const std::string& text);

// Two-column overlay data for plotting: per-k empirical frequency and
// theoretical pmf.
std::string figure_data_csv(const ComparisonReport& r);

// Distribution table emitters (`k,cdf,pmf` CSV; JSON mirror with metadata).
std::string table_to_csv(const DistributionTable& t);
std::string table_to_json(const DistributionTable& t);

// Ensemble emitters (`k,count,frequency` CSV plus a stats block; JSON
// mirror). Worker count is deliberately not part of the output: results are
// partition-independent.
std::string ensemble_to_csv(const SimConfig& cfg, const EnsembleResult& r);
std::string ensemble_to_json(const SimConfig& cfg, const EnsembleResult& r);

}  // namespace walkmax
