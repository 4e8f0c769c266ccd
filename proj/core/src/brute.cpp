#include "walkmax/brute.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace walkmax {
namespace {

using U128 = unsigned __int128;

BigInt to_bigint(U128 x) {
  BigInt hi = static_cast<std::uint64_t>(x >> 64);
  return (hi << 64) | static_cast<std::uint64_t>(x);
}

// Depth-first enumeration over the 2^steps binary event sequences. Each
// path's probability is an integer numerator (product of per-step event
// weights a or b-a) over the common denominator b^steps; numerators of
// paths sharing a maximum are accumulated exactly in 128-bit integers.
struct Enumerator {
  ScenarioKind kind;
  int ell = 0;  // 0 for walks
  int steps = 0;
  MaxConvention conv = MaxConvention::EveryStep;
  std::uint64_t wa = 0;  // weight of the probability-p event
  std::uint64_t wb = 0;  // weight of the probability-q event
  std::vector<U128> acc;

  bool record_max_after(int i) const {
    if (kind != ScenarioKind::TrafficLight) return true;
    if (conv == MaxConvention::EveryStep) return true;
    return (i + 1) % (2 * ell) == 0;
  }

  void dfs(int i, int pos, int mx, U128 num) {
    if (i == steps) {
      acc[static_cast<std::size_t>(mx)] += num;
      return;
    }
    int next_a = pos, next_b = pos;
    switch (kind) {
      case ScenarioKind::StrongReflect:
        // step +1 with prob p; step -1 with reflection |.| , so 0 -> 1 both ways
        next_a = pos + 1;
        next_b = pos > 0 ? pos - 1 : 1;
        break;
      case ScenarioKind::WeakReflect:
        next_a = pos + 1;
        next_b = pos > 0 ? pos - 1 : 0;
        break;
      case ScenarioKind::TrafficLight: {
        const bool red = (i / ell) % 2 == 0;  // blocks start with the red phase
        if (red) {
          next_a = pos + 1;  // arrival (prob p)
          next_b = pos;      // no arrival
        } else {
          next_a = pos;                      // no departure (prob p)
          next_b = pos > 0 ? pos - 1 : 0;    // departure (prob q)
        }
        break;
      }
    }
    const bool rec = record_max_after(i);
    dfs(i + 1, next_a, rec ? std::max(mx, next_a) : mx, num * wa);
    dfs(i + 1, next_b, rec ? std::max(mx, next_b) : mx, num * wb);
  }
};

}  // namespace

std::vector<Rational> brute_force_distribution(const Scenario& s,
                                               const WalkParams& w, TimeIndex n,
                                               MaxConvention conv) {
  if (!w.has_rational)
    throw std::invalid_argument(
        "brute_force_distribution requires an exact rational p");
  Enumerator e;
  e.kind = s.kind;
  e.conv = conv;
  if (s.is_traffic()) {
    const std::int64_t blocks = to_blocks(s, n).value;
    if (blocks < 0) throw std::invalid_argument("negative time index");
    if (blocks > 13)
      throw std::invalid_argument("brute force limited to 13 traffic blocks");
    e.ell = s.ell;
    e.steps = static_cast<int>(blocks) * 2 * s.ell;
  } else {
    const std::int64_t st = natural_index(s, n);
    if (st < 0) throw std::invalid_argument("negative time index");
    if (st > 20)
      throw std::invalid_argument("brute force limited to 20 walk steps");
    e.steps = static_cast<int>(st);
  }
  if (e.steps > 26)
    throw std::invalid_argument("brute force limited to 26 enumerated steps");
  // Numerator products must fit in 128 bits: (b)^steps < 2^127.
  if (e.steps * std::log2(static_cast<double>(w.den)) > 126.0)
    throw std::invalid_argument(
        "denominator too large for exact 128-bit enumeration");

  e.wa = static_cast<std::uint64_t>(w.num);
  e.wb = static_cast<std::uint64_t>(w.den - w.num);
  e.acc.assign(static_cast<std::size_t>(e.steps) + 1, U128{0});
  e.dfs(0, 0, 0, U128{1});

  BigInt denom = 1;
  for (int i = 0; i < e.steps; ++i) denom *= w.den;
  std::vector<Rational> pmf;
  pmf.reserve(e.acc.size());
  for (const U128& a : e.acc) pmf.emplace_back(to_bigint(a), denom);
  return pmf;
}

Rational brute_force_cdf(const Scenario& s, const WalkParams& w, TimeIndex n,
                         int k, MaxConvention conv) {
  if (k < 0) return Rational(0);
  const std::vector<Rational> pmf = brute_force_distribution(s, w, n, conv);
  Rational sum(0);
  const std::size_t stop =
      std::min(pmf.size(), static_cast<std::size_t>(k) + 1);
  for (std::size_t i = 0; i < stop; ++i) sum += pmf[i];
  return sum;
}

}  // namespace walkmax
