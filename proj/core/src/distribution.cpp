#include "walkmax/distribution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "walkmax/errors.hpp"
#include "walkmax/roots.hpp"
#include "walkmax/rq.hpp"

namespace walkmax {
namespace {

// Estimated level span needed by moment summation / auto dispatch: the CDF
// transition sits near log_r(n) and the 1e-15 truncation adds a
// p-dependent but modest number of levels beyond it.
int estimate_k_span(const Scenario& s, const WalkParams& w,
                    std::int64_t nat_n) {
  const double e = s.is_traffic() ? 2.0 : 1.0;
  const double lnr = e * std::log(w.q / w.p);
  const double kstar =
      std::log(std::max<double>(2.0, static_cast<double>(nat_n))) / lnr;
  const double extra = std::log(1e16) / lnr;  // decades to cross 1e-15
  return static_cast<int>(kstar + extra) + 8;
}

bool matrix_within_budget(const Scenario& s, TimeIndex n, int k,
                          std::int64_t budget) {
  const std::int64_t nat = natural_index(s, n);
  const std::int64_t ops = 3 * (static_cast<std::int64_t>(k) + 1) * nat;
  return ops <= budget;
}

}  // namespace

const char* method_name(CdfMethod m) {
  switch (m) {
    case CdfMethod::MatrixPower: return "matrix-power";
    case CdfMethod::Series: return "series";
    case CdfMethod::BruteForce: return "brute-force";
    case CdfMethod::PoleApprox: return "pole-approx";
    case CdfMethod::Gumbel: return "gumbel";
  }
  return "unknown";
}

double cdf_value(const Scenario& s, const WalkParams& w, TimeIndex n, int k,
                 CdfSource source, std::int64_t budget) {
  switch (source) {
    case CdfSource::MatrixPower:
      return cdf_matrix_power(s, w, n, k, budget);
    case CdfSource::PoleApprox:
      return pole_cdf(s, w, n, k);
    case CdfSource::Auto:
      if (matrix_within_budget(s, n, k, budget))
        return cdf_matrix_power(s, w, n, k, budget);
      return pole_cdf(s, w, n, k);
  }
  throw std::logic_error("unknown CDF source");
}

DistributionTable matrix_table(const Scenario& s, const WalkParams& w,
                               TimeIndex n, int k_max, std::int64_t budget) {
  if (k_max < 0) throw std::invalid_argument("k_max must be nonnegative");
  DistributionTable t;
  t.scenario = s;
  t.params = w;
  t.n = n;
  t.method = CdfMethod::MatrixPower;
  t.cdf.reserve(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k)
    t.cdf.push_back(cdf_matrix_power(s, w, n, k, budget));
  return t;
}

DistributionTable series_table(const Scenario& s, const WalkParams& w, int k,
                               std::int64_t n_max) {
  DistributionTable t;
  t.scenario = s;
  t.params = w;
  t.n = TimeIndex{n_max, s.is_traffic() ? TimeUnit::Blocks : TimeUnit::Steps};
  t.method = CdfMethod::Series;
  t.index_is_time = true;
  t.fixed_k = k;
  t.cdf = series_cdf(s, w, k, n_max);
  return t;
}

DistributionTable pmf(const Scenario& s, const WalkParams& w, TimeIndex n,
                      int k_max, CdfSource source, std::int64_t budget) {
  if (k_max < 0) throw std::invalid_argument("k_max must be nonnegative");
  DistributionTable t;
  t.scenario = s;
  t.params = w;
  t.n = n;
  t.method = source == CdfSource::PoleApprox ||
                     (source == CdfSource::Auto &&
                      !matrix_within_budget(s, n, k_max, budget))
                 ? CdfMethod::PoleApprox
                 : CdfMethod::MatrixPower;
  t.cdf.reserve(static_cast<std::size_t>(k_max) + 1);
  t.pmf.reserve(static_cast<std::size_t>(k_max) + 1);
  double prev = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    const CdfSource eff = t.method == CdfMethod::PoleApprox
                              ? CdfSource::PoleApprox
                              : CdfSource::MatrixPower;
    const double c = cdf_value(s, w, n, k, eff, budget);
    double d = c - prev;
    if (d < 0.0) {
      if (d < -1e-12)
        throw std::domain_error("CDF source is not monotone at level " +
                                std::to_string(k));
      d = 0.0;
    }
    t.cdf.push_back(c);
    t.pmf.push_back(d);
    prev = c;
  }
  return t;
}

Moments exact_moments(const Scenario& s, const WalkParams& w, TimeIndex n,
                      CdfSource source, std::int64_t budget) {
  const std::int64_t nat = natural_index(s, n);
  if (nat < 0) throw std::invalid_argument("negative time index");
  Moments m;
  if (nat == 0) return m;

  CdfSource eff = source;
  if (source == CdfSource::Auto) {
    const int span = estimate_k_span(s, w, nat);
    eff = matrix_within_budget(s, n, span, budget)
              ? CdfSource::MatrixPower
              : CdfSource::PoleApprox;
  }

  int k_threshold = 0;
  if (eff == CdfSource::PoleApprox) {
    k_threshold = min_root_level(s, w);
    if (k_threshold > 0) {
      // Below the threshold the true CDF decays at least like the branch-
      // point rate; treating it as 0 must be a < 1e-30 error to be usable.
      const double ln_zb = std::log(z_branch(s, w));
      if (static_cast<double>(nat) * ln_zb < 70.0)
        throw std::domain_error(
            "pole-based moments need a larger horizon: levels below the "
            "root threshold (k < " +
            std::to_string(k_threshold) +
            ") are only negligible when n*ln(z_branch) is large");
    }
  }

  double mean = 0.0, mean_sq = 0.0;
  bool truncated = false;
  double prev_tail = 2.0;
  for (std::int64_t k = 0;; ++k) {
    double c;
    if (eff == CdfSource::PoleApprox && k < k_threshold)
      c = 0.0;
    else
      c = cdf_value(s, w, n, static_cast<int>(k), eff, budget);
    const double tail = 1.0 - c;
    // Truncate at 1e-15, or at the source's rounding floor: a true tail
    // shrinks by at least the factor p/q < 1 per level, so a tail that
    // stops decreasing while already below 1e-11 is numerical noise, not
    // probability mass (a long matrix power cannot resolve 1 - cdf beyond
    // its accumulated rounding, ~1e-13 at n = 1e4).
    if (tail < 1e-15 || (tail < 1e-11 && tail >= prev_tail)) {
      m.k_stop = static_cast<int>(k);
      truncated = true;
      break;
    }
    prev_tail = tail;
    mean += tail;
    mean_sq += static_cast<double>(2 * k + 1) * tail;
    if (k >= nat) break;  // M_n <= n in natural units; cdf must be 1 here
  }
  if (!truncated)
    throw std::domain_error(
        "CDF source never reached the truncation bound (inconsistent "
        "source)");
  m.mean = mean;
  m.mean_square = mean_sq;
  m.variance = mean_sq - mean * mean;
  return m;
}

}  // namespace walkmax
