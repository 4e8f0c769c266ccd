#include "walkmax/roots.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "walkmax/errors.hpp"
#include "walkmax/gumbel.hpp"
#include "walkmax/rq.hpp"

namespace walkmax {
namespace {

// ln((1+t)/(1-t)), accurate for small t.
double log_ratio(double t) { return std::log1p(2.0 * t / (1.0 - t)); }

// The t-domain root equation in logarithmic form. With s = t_max - t,
//   g = m * ln((1+t)/(1-t)) - ln(RHSnum(t)) + ln(s),
// whose interior zero on t in (0, t_max) gives the dominant root. g(t=0) = 0
// is a trivial root; an interior root exists iff g has a positive lobe,
// which happens iff the slope at t = 0 is positive (see min_root_level).
//
//   strong/traffic: RHSnum = (1 - 2p) + t            (m = k+1 / 2k+2)
//   weak:           RHSnum = p (W+t-1)(1+t+W)/(1+t)  (m = k+1),
//                   W = sqrt((q/p)(1 - t^2))
// The weak form is the exact rationalization of the textbook right side
// (1-t-W)/(1+t-W): its denominator equals -(1+t) s / (p (1+t+W)), which
// isolates the vanishing factor s without cancellation.
struct TEquation {
  ScenarioKind kind = ScenarioKind::StrongReflect;
  double p = 0.0, q = 0.0, t_max = 0.0;
  int m = 0;

  double ln_rhs_num(double t, double* dln) const {
    if (kind == ScenarioKind::WeakReflect) {
      const double W = std::sqrt((q / p) * (1.0 - t) * (1.0 + t));
      const double A = W + t - 1.0;
      const double B = 1.0 + t + W;
      if (dln) {
        const double Wp = -(q / p) * t / W;
        *dln = (1.0 + Wp) * (1.0 / A + 1.0 / B) - 1.0 / (1.0 + t);
      }
      return std::log(p * A * B / (1.0 + t));
    }
    if (dln) *dln = 1.0 / (t_max + t);
    return std::log(t_max + t);
  }

  // g and dg/dx as functions of x = ln s.
  double eval(double x, double* dGdx) const {
    const double s = std::exp(x);
    const double t = t_max - s;
    double dln = 0.0;
    const double g =
        m * log_ratio(t) - ln_rhs_num(t, dGdx ? &dln : nullptr) + x;
    if (dGdx)
      *dGdx = 1.0 - s * (2.0 * m / ((1.0 - t) * (1.0 + t)) - dln);
    return g;
  }
};

TEquation make_equation(const Scenario& s, const WalkParams& w, int k) {
  if (s.is_traffic() && s.ell != 1)
    throw std::invalid_argument(
        "dominant roots are only available for the one-step signal (ell = 1)");
  if (k < 0) throw std::invalid_argument("level must be nonnegative");
  TEquation eq;
  eq.kind = s.kind;
  eq.p = w.p;
  eq.q = w.q;
  eq.t_max = 1.0 - 2.0 * w.p;
  eq.m = s.is_traffic() ? 2 * k + 2 : k + 1;
  return eq;
}

// Scans t = t_max * 2^-j for a point inside the positive lobe of g. Returns
// x = ln(t_max - t) there, or nothing when no lobe is detectable (no
// interior root at this level).
std::optional<double> probe_positive_lobe(const TEquation& eq) {
  for (int j = 1; j <= 52; ++j) {
    const double t = std::ldexp(eq.t_max, -j);
    const double sp = eq.t_max - t;
    if (!(sp > 0.0) || sp == eq.t_max) break;  // t below double resolution
    const double x = std::log(sp);
    // Rounding noise in g is O(eps * (m + |x|)); accept only a solidly
    // positive lobe so threshold-adjacent levels are reported as rootless
    // instead of yielding a spurious near-branch-point "root".
    const double tol = 1e-11 * (1.0 + std::abs(x)) + 4e-15 * eq.m;
    if (eq.eval(x, nullptr) > tol) return x;
  }
  return std::nullopt;
}

bool root_exists(const Scenario& s, const WalkParams& w, int k) {
  if (s.kind == ScenarioKind::StrongReflect && k == 0) return false;
  return probe_positive_lobe(make_equation(s, w, k)).has_value();
}

int analytic_threshold_guess(const Scenario& s, const WalkParams& w) {
  if (w.has_rational) {
    const std::int64_t num = w.num, den = w.den;
    const std::int64_t d2 = den - 2 * num;  // > 0
    switch (s.kind) {
      case ScenarioKind::StrongReflect:
        return static_cast<int>(den / d2);  // smallest k with (k+1)d2 > den
      case ScenarioKind::TrafficLight:
        return static_cast<int>(den / (2 * d2));
      case ScenarioKind::WeakReflect: {
        // smallest m = k+1 with q m^2 > p (m+1)^2, exactly in integers
        using I128 = __int128;
        const double tw = 1.0 / (std::sqrt(w.q / w.p) - 1.0);
        std::int64_t m = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(tw) - 2);
        while (static_cast<I128>(den - num) * m * m <=
               static_cast<I128>(num) * (m + 1) * (m + 1)) {
          if (++m > (std::int64_t{1} << 31))
            throw std::domain_error(
                "p too close to 1/2 for a representable root threshold");
        }
        return static_cast<int>(m - 1);
      }
    }
  }
  switch (s.kind) {
    case ScenarioKind::StrongReflect:
      return static_cast<int>(std::floor(1.0 / (1.0 - 2.0 * w.p)));
    case ScenarioKind::TrafficLight:
      return static_cast<int>(std::floor(0.5 / (1.0 - 2.0 * w.p)));
    case ScenarioKind::WeakReflect:
      return static_cast<int>(std::floor(1.0 / (std::sqrt(w.q / w.p) - 1.0)));
  }
  throw std::logic_error("unknown scenario");
}

double branch_gap_to_zm1(const Scenario& s, const WalkParams& w, double gap) {
  // z^2 - 1 (walks) or z - 1 (traffic) equals s (2 t_max - s) / (4pq).
  const double t_max = 1.0 - 2.0 * w.p;
  const double d = gap * (2.0 * t_max - gap) / (4.0 * w.p * w.q);
  if (s.is_traffic()) return d;
  return d / (1.0 + std::sqrt(1.0 + d));  // z - 1 = (z^2-1)/(1+z)
}

}  // namespace

int min_root_level(const Scenario& s, const WalkParams& w) {
  const int floor_k = s.kind == ScenarioKind::StrongReflect ? 1 : 0;
  int k = std::max(analytic_threshold_guess(s, w), floor_k);
  while (k > floor_k && root_exists(s, w, k - 1)) --k;
  int guard = 0;
  while (!root_exists(s, w, k)) {
    ++k;
    if (++guard > 128)
      throw std::domain_error(
          "unable to locate the root existence threshold (level " +
          std::to_string(k) + ")");
  }
  return k;
}

RootResult solve_root(const Scenario& s, const WalkParams& w, int k) {
  const TEquation eq = make_equation(s, w, k);
  if (s.kind == ScenarioKind::StrongReflect && k == 0)
    throw BracketError(
        "no dominant root at level 0 under strong reflection (the level-0 "
        "denominator is constant)");

  const std::optional<double> lobe = probe_positive_lobe(eq);
  if (!lobe) {
    throw BracketError(
        "no interior dominant root at level k=" + std::to_string(k) +
        " (smallest admissible level for this p is k=" +
        std::to_string(min_root_level(s, w)) + ")");
  }

  // Bracket [x_lo, x_hi] with g(x_lo) < 0 < g(x_hi); g -> -infinity as
  // x -> -infinity because of the +x term.
  double x_hi = *lobe;
  double x_lo = x_hi;
  for (int i = 0; i < 200; ++i) {
    x_lo -= 64.0;
    if (eq.eval(x_lo, nullptr) < 0.0) break;
    if (i == 199)
      throw std::domain_error("failed to bracket the dominant root from below");
  }

  // Initial estimate from the limit law: z - 1 ~ c r^-k in the natural unit.
  double x = 0.5 * (x_lo + x_hi);
  {
    const GumbelLimit lim = limit_constant(
        s, w, s.is_traffic() ? TimeUnit::Blocks : TimeUnit::Steps);
    const double ln_zm1 =
        std::log(lim.c) - static_cast<double>(k) * std::log(lim.r);
    const double t_max = eq.t_max;
    // invert z(s): s ~ 4pq (z-1) / t_max (walks: extra 1/(z+1) ~ 1/2 folded
    // via the factor 2), s ~ 2pq... both forms only seed Newton.
    const double factor = s.is_traffic() ? 2.0 * w.p * w.q : 4.0 * w.p * w.q;
    const double guess = std::log(factor / t_max) + ln_zm1;
    if (guess > x_lo + 1.0 && guess < x_hi - 1e-3) x = guess;
  }

  double g = 0.0, dg = 0.0;
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    g = eq.eval(x, &dg);
    if (g < 0.0)
      x_lo = x;
    else
      x_hi = x;
    double x_new;
    if (dg > 0.0) {
      x_new = x - g / dg;
      if (!(x_new > x_lo && x_new < x_hi)) x_new = 0.5 * (x_lo + x_hi);
    } else {
      x_new = 0.5 * (x_lo + x_hi);
    }
    if (std::abs(x_new - x) <= 1e-15 * (1.0 + std::abs(x_new)) ||
        x_hi - x_lo <= 4e-16 * (1.0 + std::abs(x_new))) {
      x = x_new;
      converged = true;
      break;
    }
    x = x_new;
  }
  if (!converged)
    throw std::domain_error("dominant-root iteration did not converge at k=" +
                            std::to_string(k));

  RootResult res;
  res.k = k;
  res.gap = std::exp(x);
  res.t = eq.t_max - res.gap;
  res.z_minus_1 = branch_gap_to_zm1(s, w, res.gap);
  res.z = 1.0 + res.z_minus_1;

  const RQPair rq = eval_RQ_recurrence(s, w, k, res.z);
  const double dR = eval_R_derivative(s, w, k, res.z);
  if (dR == 0.0 || !std::isfinite(dR))
    throw std::domain_error(
        "level too large for a double-precision residue at k=" +
        std::to_string(k));
  res.residue_amp = -rq.Q / (res.z * dR);
  // A-posteriori scaled residual: the final Newton step of the log-form
  // equation, i.e. the relative error bound on the gap s_k (equivalently on
  // z_k - 1). Evaluating R(z_k) directly in the z-domain is meaningless at
  // large k: the root sits within rounding distance of z = 1 and the
  // polynomial's evaluation noise there swamps any true residual.
  {
    double dg_final = 0.0;
    const double g_final = eq.eval(x, &dg_final);
    res.residual = std::abs(g_final) / std::max(std::abs(dg_final), 1e-3);
  }
  if (s.kind == ScenarioKind::StrongReflect) {
    // R_k is even in z, so -z_k is a zero of the same modulus. From the
    // closed numerator relation at the two zeros, the residue ratio is
    // exactly (-1)^k (z_k - 1)/(z_k + 1).
    const double ratio = res.z_minus_1 / (2.0 + res.z_minus_1);
    res.mirror_ratio = (k % 2 == 0) ? ratio : -ratio;
  }
  return res;
}

double pole_cdf(const Scenario& s, const WalkParams& w, TimeIndex n, int k) {
  if (k < 0) return 0.0;
  const std::int64_t nat = natural_index(s, n);
  if (nat < 0) throw std::invalid_argument("negative time index");
  if (nat == 0) return 1.0;
  const RootResult root = solve_root(s, w, k);
  const double log_decay =
      -static_cast<double>(nat) * std::log1p(root.z_minus_1);
  double value = root.residue_amp * std::exp(log_decay);
  if (s.kind == ScenarioKind::StrongReflect) {
    const double sign = (nat % 2 == 0) ? 1.0 : -1.0;
    value *= 1.0 + sign * root.mirror_ratio;
  }
  return std::clamp(value, 0.0, 1.0);
}

std::vector<RootRow> root_convergence_table(const Scenario& s,
                                            const WalkParams& w, int k_lo,
                                            int k_hi) {
  if (k_lo > k_hi) throw std::invalid_argument("empty level range");
  const double e = s.is_traffic() ? 2.0 : 1.0;
  const double ln_ratio = std::log(w.q / w.p);
  std::vector<RootRow> rows;
  rows.reserve(static_cast<std::size_t>(k_hi - k_lo) + 1);
  for (int k = k_lo; k <= k_hi; ++k) {
    const RootResult r = solve_root(s, w, k);
    RootRow row;
    row.k = k;
    row.z = r.z;
    row.scaled_gap =
        std::exp(std::log(r.z_minus_1) + e * static_cast<double>(k) * ln_ratio);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace walkmax
