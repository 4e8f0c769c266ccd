#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace walkmax {

// Step distribution: P{X = +1} = p, P{X = -1} = q = 1 - p, with 0 < p < 1/2
// strictly (negative drift). p may carry an exact fraction num/den alongside
// its double value; exact (rational) code paths require it.
struct WalkParams {
  double p = 0.0;
  double q = 0.0;
  bool has_rational = false;
  std::int64_t num = 0;  // valid when has_rational
  std::int64_t den = 0;
};

// Parses "a/b" (exact) or a decimal literal (double only) and validates
// 0 < p < 1/2. Throws std::invalid_argument otherwise.
WalkParams validate_params(std::string_view text);

// Validates a plain double probability (no exact fraction attached).
WalkParams validate_params(double p);

// Renders p in the form accepted by validate_params: "a/b" when exact,
// otherwise a 17-significant-digit decimal. validate_params(render_p(w))
// reproduces w exactly.
std::string render_p(const WalkParams& w);

enum class ScenarioKind { StrongReflect, WeakReflect, TrafficLight };

// StrongReflect: S <- |S + X|  (bounces off the origin; S_1 = 1 always)
// WeakReflect:   S <- max(S + X, 0)
// TrafficLight:  weakly reflected queue driven by an alternating signal:
//   ell consecutive arrival steps (+1 w.p. p, else 0) then ell consecutive
//   departure steps (-1 w.p. q, else 0). One block = 2*ell steps.
//   Exact machinery (matrices, series, roots) exists for ell == 1 only;
//   ell >= 2 is simulation-only.
struct Scenario {
  ScenarioKind kind = ScenarioKind::StrongReflect;
  int ell = 1;

  static Scenario strong() { return {ScenarioKind::StrongReflect, 1}; }
  static Scenario weak() { return {ScenarioKind::WeakReflect, 1}; }
  static Scenario traffic(int ell = 1);

  bool is_traffic() const { return kind == ScenarioKind::TrafficLight; }
  bool exact_supported() const { return !is_traffic() || ell == 1; }
  // Steps per unit of the scenario's natural time index (blocks for traffic).
  int steps_per_unit() const { return is_traffic() ? 2 * ell : 1; }
};

std::string scenario_name(const Scenario& s);
Scenario scenario_from_name(std::string_view name, int ell);

enum class TimeUnit { Steps, Blocks };

// Walk time indices are in steps; traffic accepts steps or blocks.
struct TimeIndex {
  std::int64_t value = 0;
  TimeUnit unit = TimeUnit::Steps;

  static TimeIndex steps(std::int64_t n) { return {n, TimeUnit::Steps}; }
  static TimeIndex blocks(std::int64_t n) { return {n, TimeUnit::Blocks}; }
};

// Converts a traffic time index to whole elapsed blocks (floor for steps).
// Blocks pass through unchanged. Throws for non-traffic scenarios and for
// negative values.
TimeIndex to_blocks(const Scenario& s, TimeIndex t);

// The scenario's natural exact-analysis index: elapsed steps for walks,
// whole elapsed blocks for traffic.
std::int64_t natural_index(const Scenario& s, TimeIndex t);

// Steps actually consumed by natural_index (for traffic, blocks * 2 * ell).
std::int64_t natural_steps(const Scenario& s, TimeIndex t);

}  // namespace walkmax
