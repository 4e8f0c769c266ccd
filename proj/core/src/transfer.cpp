#include "walkmax/transfer.hpp"

#include <stdexcept>
#include <string>

#include "walkmax/errors.hpp"
#include "walkmax/transfer_exact.hpp"

namespace walkmax {

namespace {

// Shared band-pattern construction; T is double or Rational. pp/qq are the
// scenario's step probabilities in T.
template <class T>
TriBandMatrix<T> build_bands(const Scenario& s, T pp, T qq, int k) {
  if (s.is_traffic() && s.ell != 1)
    throw std::invalid_argument(
        "transfer matrix: traffic requires ell == 1 (ell >= 2 is "
        "simulation-only)");
  const int kmin = s.kind == ScenarioKind::StrongReflect ? 1 : 0;
  if (k < kmin)
    throw std::invalid_argument("transfer matrix: k below scenario minimum");

  TriBandMatrix<T> m;
  m.k = k;
  m.sub.assign(k + 1, T(0));
  m.diag.assign(k + 1, T(0));
  m.super.assign(k + 1, T(0));

  switch (s.kind) {
    case ScenarioKind::StrongReflect:
      // From 0 both steps land on 1; interior moves are p up / q down.
      for (int i = 0; i < k; ++i) m.super[i] = qq;
      m.sub[1] = T(1);
      for (int i = 2; i <= k; ++i) m.sub[i] = pp;
      break;
    case ScenarioKind::WeakReflect:
      m.diag[0] = qq;
      for (int i = 0; i < k; ++i) m.super[i] = qq;
      for (int i = 1; i <= k; ++i) m.sub[i] = pp;
      break;
    case ScenarioKind::TrafficLight: {
      if (k == 0) {
        m.diag[0] = qq;
        break;
      }
      m.diag[0] = T(1) - pp * pp;
      for (int i = 1; i < k; ++i) m.diag[i] = T(2) * pp * qq;
      m.diag[k] = pp * qq;
      for (int i = 0; i < k; ++i) m.super[i] = qq * qq;
      for (int i = 1; i <= k; ++i) m.sub[i] = pp * pp;
      break;
    }
  }
  return m;
}

// v <- A v for the band matrix; scratch must have the same size as v.
template <class T>
void band_apply(const TriBandMatrix<T>& m, std::vector<T>& v,
                std::vector<T>& scratch) {
  const int k = m.k;
  for (int i = 0; i <= k; ++i) {
    T acc = m.diag[i] * v[i];
    if (i > 0) acc += m.sub[i] * v[i - 1];
    if (i < k) acc += m.super[i] * v[i + 1];
    scratch[i] = acc;
  }
  v.swap(scratch);
}

}  // namespace

TransferMatrix build_transfer(const Scenario& s, const WalkParams& w, int k) {
  return build_bands<double>(s, w.p, w.q, k);
}

TriBandMatrix<Rational> build_transfer_exact(const Scenario& s,
                                             const WalkParams& w, int k) {
  return build_bands<Rational>(s, p_rational(w), q_rational(w), k);
}

double cdf_matrix_power(const Scenario& s, const WalkParams& w, TimeIndex n,
                        int k, std::int64_t ops_budget) {
  if (k < 0) throw std::invalid_argument("cdf: k must be >= 0");
  const std::int64_t steps = natural_index(s, n);
  if (steps == 0) return 1.0;
  if (s.kind == ScenarioKind::StrongReflect && k == 0) return 0.0;
  if (k >= steps) return 1.0;  // the maximum gains at most 1 per unit

  const std::int64_t ops = 3 * static_cast<std::int64_t>(k + 1) * steps;
  if (ops > ops_budget)
    throw BudgetError("cdf_matrix_power: " + std::to_string(ops) +
                      " multiply-adds exceed budget of " +
                      std::to_string(ops_budget) +
                      " (raise the budget or use the pole approximation)");

  const TransferMatrix m = build_transfer(s, w, k);
  std::vector<double> v(k + 1, 0.0), scratch(k + 1, 0.0);
  v[0] = 1.0;
  for (std::int64_t i = 0; i < steps; ++i) band_apply(m, v, scratch);
  double sum = 0.0;
  for (double x : v) sum += x;
  if (sum < -1e-12 || sum > 1.0 + 1e-12)
    throw std::domain_error("cdf_matrix_power: probability escaped [0,1]");
  return sum < 0.0 ? 0.0 : (sum > 1.0 ? 1.0 : sum);
}

Rational cdf_matrix_power_exact(const Scenario& s, const WalkParams& w,
                                TimeIndex n, int k) {
  if (k < 0) throw std::invalid_argument("cdf: k must be >= 0");
  const std::int64_t steps = natural_index(s, n);
  if (steps == 0) return Rational(1);
  if (s.kind == ScenarioKind::StrongReflect && k == 0) return Rational(0);
  if (k >= steps) return Rational(1);

  const TriBandMatrix<Rational> m = build_transfer_exact(s, w, k);
  std::vector<Rational> v(k + 1, Rational(0)), scratch(k + 1, Rational(0));
  v[0] = Rational(1);
  for (std::int64_t i = 0; i < steps; ++i) band_apply(m, v, scratch);
  Rational sum(0);
  for (const Rational& x : v) sum += x;
  return sum;
}

}  // namespace walkmax
