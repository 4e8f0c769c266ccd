#include "walkmax/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "walkmax/rng.hpp"

namespace walkmax {

std::uint64_t bernoulli_threshold(const WalkParams& w) {
  if (w.has_rational) {
    // floor(num * 2^64 / den), exact in 128-bit arithmetic
    const unsigned __int128 scaled =
        (static_cast<unsigned __int128>(w.num) << 64) /
        static_cast<unsigned __int128>(w.den);
    return static_cast<std::uint64_t>(scaled);
  }
  const long double scaled = std::floor(
      static_cast<long double>(w.p) * 18446744073709551616.0L + 0.5L);
  return static_cast<std::uint64_t>(scaled);
}

namespace {

int run_strong(Xoshiro256pp& rng, std::int64_t n, std::uint64_t thr) {
  std::int64_t s = 0;
  std::int64_t mx = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    if (rng.next() < thr) {
      ++s;
      if (s > mx) mx = s;
    } else if (s > 0) {
      --s;
    } else {
      s = 1;
      if (mx == 0) mx = 1;
    }
  }
  return static_cast<int>(mx);
}

int run_weak(Xoshiro256pp& rng, std::int64_t n, std::uint64_t thr) {
  std::int64_t s = 0;
  std::int64_t mx = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    if (rng.next() < thr) {
      ++s;
      if (s > mx) mx = s;
    } else if (s > 0) {
      --s;
    }
  }
  return static_cast<int>(mx);
}

// Traffic signal: ell red steps (arrival w.p. p) then ell green steps
// (departure w.p. q), repeating. Only arrivals can raise the level, so the
// every-step maximum needs checking after red steps only; the block-end
// maximum is sampled once per 2*ell steps.
int run_traffic(Xoshiro256pp& rng, std::int64_t n, std::uint64_t thr_p,
                std::uint64_t thr_q, int ell, MaxConvention conv) {
  std::int64_t s = 0;
  std::int64_t mx = 0;
  const std::int64_t blocks = n / (2 * ell);
  if (conv == MaxConvention::EveryStep) {
    for (std::int64_t b = 0; b < blocks; ++b) {
      for (int i = 0; i < ell; ++i) {
        if (rng.next() < thr_p) {
          ++s;
          if (s > mx) mx = s;
        }
      }
      for (int i = 0; i < ell; ++i) {
        if (rng.next() < thr_q && s > 0) --s;
      }
    }
  } else {
    for (std::int64_t b = 0; b < blocks; ++b) {
      for (int i = 0; i < ell; ++i) {
        if (rng.next() < thr_p) ++s;
      }
      for (int i = 0; i < ell; ++i) {
        if (rng.next() < thr_q && s > 0) --s;
      }
      if (s > mx) mx = s;
    }
  }
  return static_cast<int>(mx);
}

}  // namespace

int simulate_max(const Scenario& s, const WalkParams& w, std::int64_t n_steps,
                 std::uint64_t seed, std::uint64_t trial_index,
                 MaxConvention conv) {
  if (n_steps < 0) throw std::invalid_argument("negative horizon");
  Xoshiro256pp rng(seed, trial_index);
  const std::uint64_t thr_p = bernoulli_threshold(w);
  switch (s.kind) {
    case ScenarioKind::StrongReflect:
      return run_strong(rng, n_steps, thr_p);
    case ScenarioKind::WeakReflect:
      return run_weak(rng, n_steps, thr_p);
    case ScenarioKind::TrafficLight: {
      // departure probability is q = 1-p: u < thr_q with thr_q = 2^64-thr_p
      const std::uint64_t thr_q = ~thr_p + 1;  // wraps to 0 only if p = 1
      return run_traffic(rng, n_steps, thr_p, thr_q, s.ell, conv);
    }
  }
  throw std::logic_error("unknown scenario");
}

EnsembleStats empirical_summary(const Histogram& h) {
  if (h.trials <= 0) throw std::invalid_argument("empty histogram");
  double mean = 0.0, mean_sq = 0.0;
  const double inv = 1.0 / static_cast<double>(h.trials);
  for (const auto& [level, count] : h.counts) {
    const double f = static_cast<double>(count) * inv;
    mean += f * static_cast<double>(level);
    mean_sq += f * static_cast<double>(level) * static_cast<double>(level);
  }
  EnsembleStats st;
  st.mean = mean;
  st.mean_square = mean_sq;
  st.stddev = std::sqrt(std::max(0.0, mean_sq - mean * mean));
  st.standard_error_of_mean =
      st.stddev / std::sqrt(static_cast<double>(h.trials));
  return st;
}

EnsembleResult run_ensemble(const SimConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("need at least one trial");
  if (cfg.n_steps < 1) throw std::invalid_argument("need at least one step");
  const int workers = std::max(1, cfg.workers);

  EnsembleResult result;
  result.n_steps_used = cfg.n_steps;
  if (cfg.scenario.is_traffic()) {
    const std::int64_t block_len = 2 * cfg.scenario.ell;
    const std::int64_t whole = (cfg.n_steps / block_len) * block_len;
    if (whole != cfg.n_steps) {
      if (whole == 0)
        throw std::invalid_argument(
            "horizon shorter than one signal block (2*ell steps)");
      result.truncated = true;
      result.n_steps_used = whole;
    }
  }

  // Each worker simulates a contiguous range of trial indices into a local
  // level->count vector; per-trial seeding makes the partition irrelevant.
  const std::int64_t per =
      (cfg.trials + workers - 1) / static_cast<std::int64_t>(workers);
  std::vector<std::vector<std::int64_t>> local(
      static_cast<std::size_t>(workers));
  auto work = [&](int widx) {
    const std::int64_t lo = widx * per;
    const std::int64_t hi = std::min<std::int64_t>(lo + per, cfg.trials);
    auto& counts = local[static_cast<std::size_t>(widx)];
    for (std::int64_t i = lo; i < hi; ++i) {
      const int level = simulate_max(
          cfg.scenario, cfg.params, result.n_steps_used, cfg.base_seed,
          static_cast<std::uint64_t>(i), cfg.max_convention);
      if (static_cast<std::size_t>(level) >= counts.size())
        counts.resize(static_cast<std::size_t>(level) + 1, 0);
      ++counts[static_cast<std::size_t>(level)];
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  std::vector<std::int64_t> merged;
  for (const auto& counts : local) {
    if (counts.size() > merged.size()) merged.resize(counts.size(), 0);
    for (std::size_t i = 0; i < counts.size(); ++i) merged[i] += counts[i];
  }
  result.histogram.trials = cfg.trials;
  bool first = true;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (merged[i] == 0) continue;
    const int level = static_cast<int>(i);
    result.histogram.counts[level] = merged[i];
    if (first) {
      result.histogram.min_level = level;
      first = false;
    }
    result.histogram.max_level = level;
  }
  result.stats = empirical_summary(result.histogram);
  return result;
}

}  // namespace walkmax
