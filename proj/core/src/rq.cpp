#include "walkmax/rq.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

#include "walkmax/rational.hpp"

namespace walkmax {

namespace {

void check_exact_scenario(const Scenario& s, int k) {
  if (s.is_traffic() && s.ell != 1)
    throw std::invalid_argument(
        "R/Q machinery: traffic requires ell == 1 (ell >= 2 is "
        "simulation-only)");
  if (k < 0) throw std::invalid_argument("R/Q machinery: k must be >= 0");
}

// One step of the shared three-term recurrence x_j = x_{j-1} - c x_{j-2}
// used by both walk scenarios (c = pq z^2).
struct WalkState {
  double prev2, prev1;
  void advance(double c, double extra = 0.0) {
    double next = prev1 - c * prev2 + extra;
    prev2 = prev1;
    prev1 = next;
  }
};

}  // namespace

RQPair eval_RQ_recurrence(const Scenario& s, const WalkParams& w, int k,
                          double z) {
  check_exact_scenario(s, k);
  const double p = w.p, q = w.q;

  if (s.kind == ScenarioKind::StrongReflect) {
    const double c = p * q * z * z;
    if (k == 0) return {1.0, 1.0};
    WalkState R{1.0, 1.0 - q * z * z};       // R_0, R_1
    WalkState Q{1.0, 1.0 + z};               // Q_0, Q_1
    double pk = p, zk = z * z;               // p^{j-1} z^j at j = 2
    for (int j = 2; j <= k; ++j) {
      R.advance(c);
      Q.advance(c, pk * zk);
      pk *= p;
      zk *= z;
    }
    return {R.prev1, Q.prev1};
  }

  if (s.kind == ScenarioKind::WeakReflect) {
    const double c = p * q * z * z;
    WalkState R{1.0, 1.0 - q * z};           // R_{-1}, R_0
    WalkState Q{0.0, 1.0};                   // Q_{-1}, Q_0
    double pk = p, zk = z;                   // p^j z^j at j = 1
    for (int j = 1; j <= k; ++j) {
      R.advance(c);
      Q.advance(c, pk * zk);
      pk *= p;
      zk *= z;
    }
    return {R.prev1, Q.prev1};
  }

  // Traffic, ell == 1, z in blocks. The tilde recurrences build the
  // principal-minor family; the bottom corner correction produces R_k, Q_k.
  const double a = 1.0 - 2.0 * p * q * z;
  const double c = p * p * q * q * z * z;
  WalkState Rt{1.0, 1.0 - (1.0 - p * p) * z};  // Rt_{-1}, Rt_0
  WalkState Qt{0.0, 1.0};                      // Qt_{-1}, Qt_0
  double p2k = p * p, zk = z;                  // p^{2j} z^j at j = 1
  for (int j = 1; j <= k; ++j) {
    double Rnext = a * Rt.prev1 - c * Rt.prev2;
    Rt.prev2 = Rt.prev1;
    Rt.prev1 = Rnext;
    double Qnext = a * Qt.prev1 - c * Qt.prev2 + p2k * zk;
    Qt.prev2 = Qt.prev1;
    Qt.prev1 = Qnext;
    p2k *= p * p;
    zk *= z;
  }
  const double corr = p * q * z;
  return {Rt.prev1 + corr * Rt.prev2, Qt.prev1 + corr * Qt.prev2};
}

double z_branch(const Scenario& s, const WalkParams& w) {
  if (s.is_traffic()) return 1.0 / (4.0 * w.p * w.q);
  return 1.0 / (2.0 * std::sqrt(w.p * w.q));
}

RQPair eval_RQ_closed(const Scenario& s, const WalkParams& w, int k,
                      double z) {
  check_exact_scenario(s, k);
  const double p = w.p, q = w.q;
  const double zb = z_branch(s, w);
  if (std::abs(z) > zb - 1e-6)
    throw std::domain_error(
        "closed form: z at or beyond the branch point (characteristic roots "
        "not split); use the recurrence");
  if (std::abs(1.0 - z) < 1e-12)
    throw std::domain_error("closed form: z too close to 1 (numerator form "
                            "divides by 1 - z); use the recurrence");

  if (s.kind == ScenarioKind::StrongReflect) {
    const double t = std::sqrt(1.0 - 4.0 * p * q * z * z);
    const double lp = (1.0 + t) / 2.0, lm = (1.0 - t) / 2.0;
    const double u = 1.0 + t - 2.0 * q * z * z;
    const double v = -1.0 + t + 2.0 * q * z * z;
    const double R =
        (u * std::pow(lp, k) + v * std::pow(lm, k)) / (2.0 * t);
    const double Q = (R - z * std::pow(p * z, k)) / (1.0 - z);
    return {R, Q};
  }

  if (s.kind == ScenarioKind::WeakReflect) {
    if (z < 0.0)
      throw std::domain_error("closed form: weak scenario requires z >= 0");
    const double t = std::sqrt(1.0 - 4.0 * p * q * z * z);
    const double lp = (1.0 + t) / 2.0, lm = (1.0 - t) / 2.0;
    const double u = (1.0 + t) * (1.0 + t - 2.0 * q * z) / 2.0;
    const double v = (1.0 - t) * (-(1.0 - t) + 2.0 * q * z) / 2.0;
    const double R =
        (u * std::pow(lp, k) + v * std::pow(lm, k)) / (2.0 * t);
    const double Q = (R - std::pow(p * z, k + 1)) / (1.0 - z);
    return {R, Q};
  }

  // Traffic, ell == 1.
  const double t = std::sqrt(1.0 - 4.0 * p * q * z);
  const double base = 1.0 - 2.0 * p * q * z;
  const double lp = (base + t) / 2.0, lm = (base - t) / 2.0;
  const double u = 1.0 + t - (1.0 + 3.0 * p + t + p * t) * q * z +
                   2.0 * p * q * q * z * z;
  const double v = -1.0 + t + (1.0 + 3.0 * p - t - p * t) * q * z -
                   2.0 * p * q * q * z * z;
  auto Rt = [&](int j) -> double {
    if (j < 0) return 1.0;  // recurrence base, not covered by the power form
    return (u * std::pow(lp, j) + v * std::pow(lm, j)) / (2.0 * t);
  };
  auto Qt = [&](int j) -> double {
    if (j < 0) return 0.0;
    return (Rt(j) - std::pow(p * p * z, j + 1)) / (1.0 - z);
  };
  const double corr = p * q * z;
  return {Rt(k) + corr * Rt(k - 1), Qt(k) + corr * Qt(k - 1)};
}

double eval_R_derivative(const Scenario& s, const WalkParams& w, int k,
                         double z) {
  check_exact_scenario(s, k);
  const double p = w.p, q = w.q;

  if (s.kind == ScenarioKind::StrongReflect) {
    if (k == 0) return 0.0;
    const double c = p * q * z * z, dc = 2.0 * p * q * z;
    double R2 = 1.0, R1 = 1.0 - q * z * z;
    double D2 = 0.0, D1 = -2.0 * q * z;
    for (int j = 2; j <= k; ++j) {
      double R0 = R1 - c * R2;
      double D0 = D1 - dc * R2 - c * D2;
      R2 = R1; R1 = R0;
      D2 = D1; D1 = D0;
    }
    return D1;
  }

  if (s.kind == ScenarioKind::WeakReflect) {
    const double c = p * q * z * z, dc = 2.0 * p * q * z;
    double R2 = 1.0, R1 = 1.0 - q * z;
    double D2 = 0.0, D1 = -q;
    for (int j = 1; j <= k; ++j) {
      double R0 = R1 - c * R2;
      double D0 = D1 - dc * R2 - c * D2;
      R2 = R1; R1 = R0;
      D2 = D1; D1 = D0;
    }
    return D1;
  }

  const double a = 1.0 - 2.0 * p * q * z, da = -2.0 * p * q;
  const double c = p * p * q * q * z * z, dc = 2.0 * p * p * q * q * z;
  double R2 = 1.0, R1 = 1.0 - (1.0 - p * p) * z;
  double D2 = 0.0, D1 = -(1.0 - p * p);
  for (int j = 1; j <= k; ++j) {
    double R0 = a * R1 - c * R2;
    double D0 = da * R1 + a * D1 - dc * R2 - c * D2;
    R2 = R1; R1 = R0;
    D2 = D1; D1 = D0;
  }
  // d/dz of Rt_k + pqz Rt_{k-1}
  return D1 + w.p * w.q * (R2 + z * D2);
}

namespace {

// poly helpers on ascending-coefficient vectors, generic over the
// coefficient type (double, or exact rationals for fractional p)
template <class T>
std::vector<T> shift2_scale(const std::vector<T>& a, const T& c) {
  std::vector<T> r(a.size() + 2, T(0));  // c * z^2 * a
  for (size_t i = 0; i < a.size(); ++i) r[i + 2] = c * a[i];
  return r;
}

template <class T>
std::vector<T> sub(std::vector<T> a, const std::vector<T>& b) {  // a - b
  if (b.size() > a.size()) a.resize(b.size(), T(0));
  for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  return a;
}

template <class T>
void add_term(std::vector<T>& a, size_t deg, const T& coef) {
  if (a.size() <= deg) a.resize(deg + 1, T(0));
  a[deg] += coef;
}

template <class T>
std::vector<T> mul_linear(const std::vector<T>& a, const T& c0,
                          const T& c1) {  // (c0 + c1 z) * a
  std::vector<T> r(a.size() + 1, T(0));
  for (size_t i = 0; i < a.size(); ++i) {
    r[i] += c0 * a[i];
    r[i + 1] += c1 * a[i];
  }
  return r;
}

template <class T>
struct PolyPair {
  std::vector<T> R, Q;
};

template <class T>
PolyPair<T> build_rq(const Scenario& s, const T& p, const T& q, int k) {
  using Poly = std::vector<T>;
  const T one(1), zero(0);
  const T pq = p * q;

  if (s.kind == ScenarioKind::StrongReflect) {
    Poly R2{one}, R1{one, zero, -q};  // R_0, R_1
    Poly Q2{one}, Q1{one, one};       // Q_0, Q_1
    if (k == 0) return {R2, Q2};
    T pk = p;
    for (int j = 2; j <= k; ++j) {
      Poly R0 = sub(R1, shift2_scale(R2, pq));
      Poly Q0 = sub(Q1, shift2_scale(Q2, pq));
      add_term(Q0, static_cast<size_t>(j), pk);
      pk *= p;
      R2 = std::move(R1); R1 = std::move(R0);
      Q2 = std::move(Q1); Q1 = std::move(Q0);
    }
    return {R1, Q1};
  }

  if (s.kind == ScenarioKind::WeakReflect) {
    Poly R2{one}, R1{one, -q};  // R_{-1}, R_0
    Poly Q2{zero}, Q1{one};     // Q_{-1}, Q_0
    T pk = p;
    for (int j = 1; j <= k; ++j) {
      Poly R0 = sub(R1, shift2_scale(R2, pq));
      Poly Q0 = sub(Q1, shift2_scale(Q2, pq));
      add_term(Q0, static_cast<size_t>(j), pk);
      pk *= p;
      R2 = std::move(R1); R1 = std::move(R0);
      Q2 = std::move(Q1); Q1 = std::move(Q0);
    }
    return {R1, Q1};
  }

  Poly R2{one}, R1{one, -(one - p * p)};  // Rt_{-1}, Rt_0
  Poly Q2{zero}, Q1{one};                 // Qt_{-1}, Qt_0
  T p2k = p * p;
  const T m2pq = T(-2) * pq, pq2 = pq * pq;
  for (int j = 1; j <= k; ++j) {
    Poly R0 = sub(mul_linear(R1, one, m2pq), shift2_scale(R2, pq2));
    Poly Q0 = sub(mul_linear(Q1, one, m2pq), shift2_scale(Q2, pq2));
    add_term(Q0, static_cast<size_t>(j), p2k);
    p2k *= p * p;
    R2 = std::move(R1); R1 = std::move(R0);
    Q2 = std::move(Q1); Q1 = std::move(Q0);
  }
  // R_k = Rt_k + pq z Rt_{k-1}, same correction for Q.
  Poly R = R1, Q = Q1;
  for (size_t i = 0; i < R2.size(); ++i) add_term(R, i + 1, T(pq * R2[i]));
  for (size_t i = 0; i < Q2.size(); ++i) add_term(Q, i + 1, T(pq * Q2[i]));
  return {R, Q};
}

// Series division c = Q / R as formal power series, \sum R_j c_{n-j} = Q_n,
// assuming R[0] = 1.
template <class T>
std::vector<T> divide_series(const std::vector<T>& R, const std::vector<T>& Q,
                             int n_max) {
  std::vector<T> c(static_cast<size_t>(n_max) + 1, T(0));
  for (int n = 0; n <= n_max; ++n) {
    T acc = n < static_cast<int>(Q.size()) ? Q[static_cast<size_t>(n)] : T(0);
    const int jmax = static_cast<int>(std::min<size_t>(
        R.size() - 1, static_cast<size_t>(n)));
    for (int j = 1; j <= jmax; ++j)
      acc -= R[static_cast<size_t>(j)] * c[static_cast<size_t>(n - j)];
    c[static_cast<size_t>(n)] = std::move(acc);
  }
  return c;
}

}  // namespace

RQPolynomials rq_polynomials(const Scenario& s, const WalkParams& w, int k) {
  check_exact_scenario(s, k);
  PolyPair<double> rq = build_rq<double>(s, w.p, w.q, k);
  return {std::move(rq.R), std::move(rq.Q)};
}

std::vector<double> series_cdf(const Scenario& s, const WalkParams& w, int k,
                               int n_max) {
  if (n_max < 0) throw std::invalid_argument("series_cdf: n_max must be >= 0");
  check_exact_scenario(s, k);

  // The computed R_k is extremely ill-conditioned in its roots once they
  // cluster near |z| = 1 (large k, p near 1/2): double-precision division
  // loses the series entirely. With fractional p the polynomials are exact
  // rationals, so build and divide exactly and round once per coefficient.
  if (w.has_rational) {
    const PolyPair<Rational> rq =
        build_rq<Rational>(s, p_rational(w), q_rational(w), k);
    const std::vector<Rational> c = divide_series(rq.R, rq.Q, n_max);
    std::vector<double> out(c.size());
    for (size_t i = 0; i < c.size(); ++i)
      out[i] = c[i].template convert_to<double>();
    return out;
  }

  const PolyPair<double> rq = build_rq<double>(s, w.p, w.q, k);
  if (std::abs(rq.R[0] - 1.0) > 1e-14)
    throw std::domain_error("series_cdf: denominator not normalized");
  return divide_series(rq.R, rq.Q, n_max);
}

}  // namespace walkmax
