#include "walkmax/params.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "walkmax/rational.hpp"

namespace walkmax {

namespace {

bool parse_int64(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

[[noreturn]] void reject(std::string_view text, const char* why) {
  throw std::invalid_argument("invalid p \"" + std::string(text) + "\": " + why);
}

}  // namespace

WalkParams validate_params(double p) {
  if (!std::isfinite(p)) throw std::invalid_argument("invalid p: not finite");
  if (!(p > 0.0) || !(p < 0.5))
    throw std::invalid_argument("invalid p: require 0 < p < 1/2 strictly");
  WalkParams w;
  w.p = p;
  w.q = 1.0 - p;
  return w;
}

WalkParams validate_params(std::string_view text) {
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    std::int64_t num = 0, den = 0;
    if (!parse_int64(text.substr(0, slash), num) ||
        !parse_int64(text.substr(slash + 1), den))
      reject(text, "expected integer numerator and denominator");
    if (den <= 0) reject(text, "denominator must be positive");
    if (num <= 0) reject(text, "require 0 < p < 1/2 strictly");
    if (2 * num >= den) reject(text, "require 0 < p < 1/2 strictly");
    std::int64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
    WalkParams w;
    w.has_rational = true;
    w.num = num;
    w.den = den;
    w.p = static_cast<double>(num) / static_cast<double>(den);
    w.q = static_cast<double>(den - num) / static_cast<double>(den);
    return w;
  }
  double p = 0.0;
  try {
    size_t pos = 0;
    p = std::stod(std::string(text), &pos);
    if (pos != text.size()) reject(text, "trailing characters");
  } catch (const std::invalid_argument&) {
    reject(text, "not a number");
  } catch (const std::out_of_range&) {
    reject(text, "out of range");
  }
  if (!(p > 0.0) || !(p < 0.5)) reject(text, "require 0 < p < 1/2 strictly");
  return validate_params(p);
}

std::string render_p(const WalkParams& w) {
  if (w.has_rational)
    return std::to_string(w.num) + "/" + std::to_string(w.den);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", w.p);
  return buf;
}

Scenario Scenario::traffic(int ell) {
  if (ell < 1) throw std::invalid_argument("traffic ell must be >= 1");
  return {ScenarioKind::TrafficLight, ell};
}

std::string scenario_name(const Scenario& s) {
  switch (s.kind) {
    case ScenarioKind::StrongReflect: return "strong";
    case ScenarioKind::WeakReflect: return "weak";
    case ScenarioKind::TrafficLight: return "traffic";
  }
  return "unknown";
}

Scenario scenario_from_name(std::string_view name, int ell) {
  if (name == "strong") return Scenario::strong();
  if (name == "weak") return Scenario::weak();
  if (name == "traffic") return Scenario::traffic(ell);
  throw std::invalid_argument("unknown scenario \"" + std::string(name) +
                              "\" (expected strong, weak, or traffic)");
}

TimeIndex to_blocks(const Scenario& s, TimeIndex t) {
  if (!s.is_traffic())
    throw std::invalid_argument("to_blocks: scenario has no block structure");
  if (t.value < 0) throw std::invalid_argument("to_blocks: negative time");
  if (t.unit == TimeUnit::Blocks) return t;
  return TimeIndex::blocks(t.value / (2 * s.ell));
}

std::int64_t natural_index(const Scenario& s, TimeIndex t) {
  if (t.value < 0) throw std::invalid_argument("negative time index");
  if (!s.is_traffic()) {
    if (t.unit == TimeUnit::Blocks)
      throw std::invalid_argument("block time index on a non-traffic scenario");
    return t.value;
  }
  return to_blocks(s, t).value;
}

std::int64_t natural_steps(const Scenario& s, TimeIndex t) {
  return natural_index(s, t) * s.steps_per_unit();
}

Rational p_rational(const WalkParams& w) {
  if (!w.has_rational)
    throw std::invalid_argument("params carry no exact fraction for p");
  return Rational(w.num, w.den);
}

Rational q_rational(const WalkParams& w) {
  if (!w.has_rational)
    throw std::invalid_argument("params carry no exact fraction for p");
  return Rational(w.den - w.num, w.den);
}

}  // namespace walkmax
