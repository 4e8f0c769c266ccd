#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "walkmax/brute.hpp"
#include "walkmax/params.hpp"

namespace walkmax {

struct SimConfig {
  Scenario scenario = Scenario::strong();
  WalkParams params;
  std::int64_t n_steps = 0;  // horizon in steps (traffic: truncated down to
                             // whole blocks; recorded in `truncated`)
  std::int64_t trials = 1;
  std::uint64_t base_seed = 0;
  int workers = 1;
  MaxConvention max_convention = MaxConvention::EveryStep;
};

struct Histogram {
  std::map<int, std::int64_t> counts;  // level -> trial count
  std::int64_t trials = 0;
  int min_level = 0;
  int max_level = 0;
};

struct EnsembleStats {
  double mean = 0.0;
  double mean_square = 0.0;
  double stddev = 0.0;
  double standard_error_of_mean = 0.0;
};

struct EnsembleResult {
  Histogram histogram;
  EnsembleStats stats;
  std::int64_t n_steps_used = 0;  // after any block truncation
  bool truncated = false;
};

// One realization of the maximum M_n (n in steps), O(1) memory. The RNG
// stream is fully determined by (seed, trial_index).
int simulate_max(const Scenario& s, const WalkParams& w, std::int64_t n_steps,
                 std::uint64_t seed, std::uint64_t trial_index = 0,
                 MaxConvention conv = MaxConvention::EveryStep);

// cfg.trials independent realizations, partitioned across cfg.workers
// threads. Per-trial counter-based seeding makes the result bit-identical
// for any workers value.
EnsembleResult run_ensemble(const SimConfig& cfg);

// Moments of a histogram; SEM = stddev / sqrt(trials).
EnsembleStats empirical_summary(const Histogram& h);

}  // namespace walkmax
