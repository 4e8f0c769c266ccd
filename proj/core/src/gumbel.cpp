#include "walkmax/gumbel.hpp"

#include <cmath>
#include <stdexcept>

namespace walkmax {

GumbelLimit limit_constant(const Scenario& s, const WalkParams& w,
                           TimeUnit unit) {
  const double p = w.p, q = w.q;
  const double d = 1.0 - 2.0 * p;  // q - p
  GumbelLimit lim;
  lim.unit = unit;
  switch (s.kind) {
    case ScenarioKind::StrongReflect:
      if (unit != TimeUnit::Steps)
        throw std::invalid_argument("walk horizons are measured in steps");
      lim.c = d * d / (2.0 * q * q);
      lim.r = q / p;
      return lim;
    case ScenarioKind::WeakReflect:
      if (unit != TimeUnit::Steps)
        throw std::invalid_argument("walk horizons are measured in steps");
      lim.c = p * d * d / (q * q);
      lim.r = q / p;
      return lim;
    case ScenarioKind::TrafficLight: {
      if (s.ell != 1)
        throw std::invalid_argument(
            "limit constants are only available for the one-step signal "
            "(ell = 1)");
      const double c_blocks = p * d * d / (q * q * q);
      lim.c = unit == TimeUnit::Blocks ? c_blocks : c_blocks / 2.0;
      lim.r = (q / p) * (q / p);
      return lim;
    }
  }
  throw std::logic_error("unknown scenario");
}

double gumbel_cdf(const Scenario& s, const WalkParams& w, TimeIndex n, int k) {
  if (n.value < 0) throw std::invalid_argument("negative time index");
  if (n.value == 0) return 1.0;
  const GumbelLimit lim = limit_constant(s, w, n.unit);
  if (k < 0) return 0.0;
  // c * n * r^-k evaluated in log form so large k underflows to exponent 0
  // (CDF -> 1) instead of overflowing intermediate powers.
  const double log_term = std::log(lim.c) +
                          std::log(static_cast<double>(n.value)) -
                          static_cast<double>(k) * std::log(lim.r);
  return std::exp(-std::exp(log_term));
}

double asymptotic_mean(const Scenario& s, const WalkParams& w, TimeIndex n) {
  const std::int64_t steps = natural_steps(s, n);
  if (steps < 2) throw std::invalid_argument("horizon too small (need n >= 2)");
  const GumbelLimit lim = limit_constant(s, w, TimeUnit::Steps);
  const double lnr = std::log(lim.r);
  return std::log(static_cast<double>(steps)) / lnr +
         (kEulerGamma + std::log(lim.c)) / lnr + 0.5;
}

double asymptotic_variance(const Scenario& s, const WalkParams& w) {
  const GumbelLimit lim = limit_constant(s, w, TimeUnit::Steps);
  const double lnr = std::log(lim.r);
  const double pi = 3.14159265358979323846;
  return pi * pi / 6.0 / (lnr * lnr) + 1.0 / 12.0;
}

MomentAsymptotics moment_asymptotics(const Scenario& s, const WalkParams& w) {
  const GumbelLimit lim = limit_constant(s, w, TimeUnit::Steps);
  const double lnr = std::log(lim.r);
  MomentAsymptotics ma;
  ma.gamma_const = kEulerGamma;
  ma.mean_offset = (kEulerGamma + std::log(lim.c)) / lnr + 0.5;
  ma.variance = asymptotic_variance(s, w);
  ma.fluctuation_band = 0.02;
  return ma;
}

}  // namespace walkmax
