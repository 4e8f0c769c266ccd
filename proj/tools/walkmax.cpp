// Command-line front end: exact/asymptotic/simulated distribution queries,
// cross-method comparison reports, and figure-data emission.
//
// Exit codes: 0 success (all enabled consistency bands pass), 2 a comparison
// band failed, 1 usage or computation error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "walkmax/brute.hpp"
#include "walkmax/distribution.hpp"
#include "walkmax/errors.hpp"
#include "walkmax/gumbel.hpp"
#include "walkmax/params.hpp"
#include "walkmax/report.hpp"
#include "walkmax/rng.hpp"
#include "walkmax/roots.hpp"
#include "walkmax/rq.hpp"
#include "walkmax/simulate.hpp"
#include "walkmax/version.hpp"

namespace {

using walkmax::Scenario;
using walkmax::TimeIndex;
using walkmax::TimeUnit;
using walkmax::WalkParams;
using ordered_json = nlohmann::ordered_json;

struct CommonArgs {
  std::string scenario = "strong";
  std::string p_text;
  int ell = 1;
  std::string unit = "steps";
  std::string format = "csv";
  std::string out_path;  // empty = stdout
};

struct Ctx {
  Scenario scenario;
  WalkParams params;
  TimeUnit unit = TimeUnit::Steps;
};

Ctx make_context(const CommonArgs& a) {
  Ctx c;
  c.scenario = walkmax::scenario_from_name(a.scenario, a.ell);
  if (!c.scenario.is_traffic() && a.ell != 1)
    throw CLI::ValidationError("--ell applies to the traffic scenario only");
  c.params = walkmax::validate_params(a.p_text);
  c.unit = a.unit == "blocks" ? TimeUnit::Blocks : TimeUnit::Steps;
  if (c.unit == TimeUnit::Blocks && !c.scenario.is_traffic())
    throw CLI::ValidationError("--unit blocks requires the traffic scenario");
  return c;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  f << text;
  if (!f) throw std::runtime_error("failed writing output file: " + out_path);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Empty cell for absent (NaN) values.
std::string cell(double v) { return std::isnan(v) ? std::string() : fmt17(v); }

ordered_json json_opt(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

const char* unit_name(TimeUnit u) {
  return u == TimeUnit::Blocks ? "blocks" : "steps";
}

walkmax::MaxConvention convention_from_flag(const std::string& name) {
  if (name == "block-end") return walkmax::MaxConvention::BlockEnd;
  return walkmax::MaxConvention::EveryStep;
}

// Steps consumed by a horizon expressed in the command's --unit.
std::int64_t horizon_steps(const Ctx& c, std::int64_t n) {
  return c.unit == TimeUnit::Blocks ? n * c.scenario.steps_per_unit() : n;
}

// Gate for very long runs: print a runtime estimate, and require an explicit
// acknowledgement flag before proceeding.
void gate_large_run(std::int64_t n_steps, std::int64_t trials, int workers,
                    bool confirmed) {
  const double total = static_cast<double>(n_steps) * trials;
  if (total <= 1e8 && n_steps <= 100000000) return;
  const double rate = 2e8;  // nominal sequential step rate
  const double secs = total / rate / std::max(workers, 1);
  std::ostringstream msg;
  msg << "estimated runtime: ~" << std::llround(std::max(secs, 1.0))
      << " s (" << fmt17(total) << " total steps at ~2e8 steps/s per worker, "
      << workers << " worker" << (workers == 1 ? "" : "s") << ")";
  if (!confirmed)
    throw CLI::ValidationError(
        msg.str() + "\nhorizons beyond 1e8 total steps require --confirm-large");
  std::cerr << msg.str() << "\n";
}

// ---------------------------------------------------------------------------
// exact

struct ExactArgs : CommonArgs {
  std::int64_t n = 0;
  int kmax = -1;  // -1 = auto: up to the first level with cdf == 1
  std::string method = "auto";
  std::int64_t budget = walkmax::kDefaultOpsBudget;
};

int run_exact(const ExactArgs& a) {
  const Ctx c = make_context(a);
  if (!c.scenario.exact_supported())
    throw CLI::ValidationError(
        "exact computation supports the traffic scenario only at --ell 1; "
        "use the simulate command for larger ell");
  const TimeIndex n{a.n, c.unit};
  const std::int64_t nat = walkmax::natural_index(c.scenario, n);

  int k_max = a.kmax;
  walkmax::CdfSource source = walkmax::CdfSource::MatrixPower;
  const bool use_series = a.method == "series";

  auto cdf_at = [&](int k) -> double {
    if (use_series) {
      const std::vector<double> cs = walkmax::series_cdf(
          c.scenario, c.params, k, static_cast<int>(nat));
      return cs.back();
    }
    return walkmax::cdf_value(c.scenario, c.params, n, k, source, a.budget);
  };

  try {
    if (k_max < 0) {
      // Default span: up to the first level whose CDF has reached 1.
      k_max = 0;
      while (k_max < nat && cdf_at(k_max) < 1.0 - 1e-15) ++k_max;
    }

    walkmax::DistributionTable t;
    if (use_series) {
      t.scenario = c.scenario;
      t.params = c.params;
      t.n = n;
      t.method = walkmax::CdfMethod::Series;
      t.cdf.resize(static_cast<std::size_t>(k_max) + 1);
      t.pmf.resize(static_cast<std::size_t>(k_max) + 1);
      for (int k = 0; k <= k_max; ++k) {
        t.cdf[static_cast<std::size_t>(k)] = cdf_at(k);
        const double lo = k == 0 ? 0.0 : t.cdf[static_cast<std::size_t>(k) - 1];
        t.pmf[static_cast<std::size_t>(k)] =
            std::max(0.0, t.cdf[static_cast<std::size_t>(k)] - lo);
      }
    } else {
      t = walkmax::pmf(c.scenario, c.params, n, k_max, source, a.budget);
    }
    emit(a.format == "json" ? walkmax::table_to_json(t)
                            : walkmax::table_to_csv(t),
         a.out_path);
  } catch (const walkmax::BudgetError& e) {
    throw std::runtime_error(
        std::string(e.what()) +
        "\nhint: this horizon exceeds the exact operation budget; use the "
        "asymptotic command (dominant-pole / limit CDF), or raise --budget");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// asymptotic

struct AsymptoticArgs : CommonArgs {
  std::int64_t n = 0;
  std::string k_range;  // "lo:hi" -> emit the root-convergence table instead
};

void parse_k_range(const std::string& text, int& lo, int& hi) {
  const auto pos = text.find(':');
  if (pos == std::string::npos)
    throw CLI::ValidationError("--k-range must be of the form lo:hi");
  try {
    lo = std::stoi(text.substr(0, pos));
    hi = std::stoi(text.substr(pos + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--k-range must be of the form lo:hi");
  }
  if (lo < 0 || hi < lo)
    throw CLI::ValidationError("--k-range needs 0 <= lo <= hi");
}

int run_asymptotic(const AsymptoticArgs& a) {
  Ctx c = make_context(a);
  if (!c.scenario.exact_supported())
    throw CLI::ValidationError(
        "asymptotic theory covers the traffic scenario at --ell 1 only");
  const TimeIndex n{a.n, c.unit};
  const std::int64_t n_steps = walkmax::natural_steps(c.scenario, n);

  const walkmax::GumbelLimit lim_steps =
      walkmax::limit_constant(c.scenario, c.params, TimeUnit::Steps);
  const int k_min = walkmax::min_root_level(c.scenario, c.params);
  const double a_mean =
      n_steps >= 2
          ? walkmax::asymptotic_mean(c.scenario, c.params,
                                     TimeIndex::steps(n_steps))
          : std::numeric_limits<double>::quiet_NaN();
  const double a_var = walkmax::asymptotic_variance(c.scenario, c.params);

  const bool root_table = !a.k_range.empty();
  std::vector<walkmax::RootRow> roots;
  struct CdfRow {
    int k;
    double pole, gumbel;
  };
  std::vector<CdfRow> rows;

  if (root_table) {
    int lo = 0, hi = 0;
    parse_k_range(a.k_range, lo, hi);
    // Levels below the first rooted one have no dominant root; clamp the
    // low end so the table starts where the quantity is defined.
    roots = walkmax::root_convergence_table(c.scenario, c.params,
                                            std::max(lo, k_min), hi);
  } else {
    int k_lo = 0, k_hi = 8;
    if (std::isfinite(a_mean)) {
      k_lo = std::max(0, static_cast<int>(std::floor(a_mean)) - 8);
      k_hi = static_cast<int>(std::ceil(a_mean)) + 4;
    }
    for (int guard = 0; guard < 256; ++guard) {
      if (walkmax::gumbel_cdf(c.scenario, c.params, n, k_hi) > 1.0 - 1e-9)
        break;
      ++k_hi;
    }
    for (int k = k_lo; k <= k_hi; ++k) {
      double pole = std::numeric_limits<double>::quiet_NaN();
      if (k >= k_min) pole = walkmax::pole_cdf(c.scenario, c.params, n, k);
      rows.push_back({k, pole, walkmax::gumbel_cdf(c.scenario, c.params, n, k)});
    }
  }

  std::ostringstream csv;
  ordered_json j;
  const bool json = a.format == "json";
  if (json) {
    j["schema"] = 1;
    j["kind"] = root_table ? "root-table" : "asymptotic";
    ordered_json m;
    m["scenario"] = walkmax::scenario_name(c.scenario);
    m["ell"] = c.scenario.ell;
    m["p"] = walkmax::render_p(c.params);
    m["p_decimal"] = c.params.p;
    m["n"] = a.n;
    m["unit"] = unit_name(c.unit);
    m["version"] = walkmax::kVersion;
    j["metadata"] = std::move(m);
    ordered_json cst;
    cst["c_steps"] = lim_steps.c;
    cst["r"] = lim_steps.r;
    if (c.scenario.is_traffic())
      cst["c_blocks"] =
          walkmax::limit_constant(c.scenario, c.params, TimeUnit::Blocks).c;
    cst["asymptotic_mean"] = json_opt(a_mean);
    cst["asymptotic_variance"] = a_var;
    cst["min_root_level"] = k_min;
    j["constants"] = std::move(cst);
    ordered_json jrows = ordered_json::array();
    if (root_table) {
      for (const walkmax::RootRow& r : roots) {
        ordered_json jr;
        jr["k"] = r.k;
        jr["z"] = r.z;
        jr["scaled_gap"] = r.scaled_gap;
        jrows.push_back(std::move(jr));
      }
    } else {
      for (const CdfRow& r : rows) {
        ordered_json jr;
        jr["k"] = r.k;
        jr["cdf_pole"] = json_opt(r.pole);
        jr["cdf_gumbel"] = r.gumbel;
        jrows.push_back(std::move(jr));
      }
    }
    j["rows"] = std::move(jrows);
    emit(j.dump(2) + "\n", a.out_path);
    return 0;
  }

  csv << "# schema,1\n";
  csv << "# kind," << (root_table ? "root-table" : "asymptotic") << "\n";
  csv << "# scenario," << walkmax::scenario_name(c.scenario) << "\n";
  csv << "# ell," << c.scenario.ell << "\n";
  csv << "# p," << walkmax::render_p(c.params) << "\n";
  csv << "# p_decimal," << fmt17(c.params.p) << "\n";
  csv << "# n," << a.n << "\n";
  csv << "# unit," << unit_name(c.unit) << "\n";
  csv << "# version," << walkmax::kVersion << "\n";
  csv << "# c_steps," << fmt17(lim_steps.c) << "\n";
  csv << "# r," << fmt17(lim_steps.r) << "\n";
  if (c.scenario.is_traffic())
    csv << "# c_blocks,"
        << fmt17(walkmax::limit_constant(c.scenario, c.params,
                                         TimeUnit::Blocks)
                     .c)
        << "\n";
  csv << "# asymptotic_mean," << cell(a_mean) << "\n";
  csv << "# asymptotic_variance," << fmt17(a_var) << "\n";
  csv << "# min_root_level," << k_min << "\n";
  if (root_table) {
    csv << "k,z,scaled_gap\n";
    for (const walkmax::RootRow& r : roots)
      csv << r.k << ',' << fmt17(r.z) << ',' << fmt17(r.scaled_gap) << "\n";
  } else {
    csv << "k,cdf_pole,cdf_gumbel\n";
    for (const CdfRow& r : rows)
      csv << r.k << ',' << cell(r.pole) << ',' << fmt17(r.gumbel) << "\n";
  }
  emit(csv.str(), a.out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs : CommonArgs {
  std::int64_t n = 0;
  std::int64_t trials = 1;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string max_convention = "every-step";
  bool confirm_large = false;
};

walkmax::SimConfig make_sim_config(const SimulateArgs& a, const Ctx& c) {
  walkmax::SimConfig cfg;
  cfg.scenario = c.scenario;
  cfg.params = c.params;
  cfg.n_steps = horizon_steps(c, a.n);
  cfg.trials = a.trials;
  cfg.base_seed = a.seed;
  cfg.workers = a.workers;
  cfg.max_convention = convention_from_flag(a.max_convention);
  return cfg;
}

int run_simulate(const SimulateArgs& a) {
  const Ctx c = make_context(a);
  const walkmax::SimConfig cfg = make_sim_config(a, c);
  gate_large_run(cfg.n_steps, cfg.trials, cfg.workers, a.confirm_large);
  const walkmax::EnsembleResult r = walkmax::run_ensemble(cfg);
  emit(a.format == "json" ? walkmax::ensemble_to_json(cfg, r)
                          : walkmax::ensemble_to_csv(cfg, r),
       a.out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// compare

struct CompareArgs : SimulateArgs {
  std::string figure_data_path;
  std::int64_t budget = walkmax::kDefaultOpsBudget;
};

int run_compare(const CompareArgs& a) {
  const Ctx c = make_context(a);
  const walkmax::SimConfig cfg = make_sim_config(a, c);
  gate_large_run(cfg.n_steps, cfg.trials, cfg.workers, a.confirm_large);
  const walkmax::ComparisonReport rep =
      walkmax::build_comparison(cfg, a.budget);
  emit(a.format == "json" ? walkmax::report_to_json(rep)
                          : walkmax::report_to_csv(rep),
       a.out_path);
  if (!a.figure_data_path.empty())
    emit(walkmax::figure_data_csv(rep), a.figure_data_path);
  if (!rep.summary.bands_pass) {
    std::cerr << "comparison bands FAILED (mean residual "
              << fmt17(rep.summary.mean_residual) << ", band "
              << fmt17(rep.summary.mean_band) << ")\n";
    return 2;
  }
  if (rep.summary.theory_mismatch_expected)
    std::cerr << "note: no exact theory for this configuration; the overlay "
                 "columns show the ell=1 reference and the mismatch is "
                 "expected\n";
  return 0;
}

// ---------------------------------------------------------------------------
// render (report round-trip)

struct RenderArgs {
  std::string in_path;
  std::string format = "json";
  std::string out_path;
};

int run_render(const RenderArgs& a) {
  std::ifstream f(a.in_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open input file: " + a.in_path);
  std::ostringstream buf;
  buf << f.rdbuf();
  const walkmax::ComparisonReport rep = walkmax::report_from_json(buf.str());
  emit(a.format == "json" ? walkmax::report_to_json(rep)
                          : walkmax::report_to_csv(rep),
       a.out_path);
  return 0;
}

// ---------------------------------------------------------------------------

void add_common(CLI::App* cmd, CommonArgs& a, bool scenario_needed = true) {
  if (scenario_needed) {
    cmd->add_option("--scenario", a.scenario,
                    "Reflection scenario: strong (|S+X|), weak (max(S+X,0)), "
                    "or traffic (alternating arrival/departure queue)")
        ->required()
        ->check(CLI::IsMember({"strong", "weak", "traffic"}));
    cmd->add_option("--p", a.p_text,
                    "Up-step probability, 0 < p < 1/2; a fraction like 1/3 "
                    "enables exact arithmetic, a decimal is double-only")
        ->required();
    cmd->add_option("--ell", a.ell,
                    "Traffic signal half-period (steps per phase); exact "
                    "machinery needs ell=1, simulation accepts any ell")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--unit", a.unit,
                    "Unit of --n: steps, or blocks (traffic only; one block "
                    "is 2*ell steps)")
        ->check(CLI::IsMember({"steps", "blocks"}));
  }
  cmd->add_option("--format", a.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", a.out_path, "Output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Distribution, moments, and extreme-value asymptotics of the maximum "
      "of reflected random walks and a traffic-light queue"};
  app.set_version_flag("--version", walkmax::kVersion);
  app.require_subcommand(1);

  ExactArgs ex;
  CLI::App* cmd_exact = app.add_subcommand(
      "exact", "Exact CDF/PMF of the maximum at a fixed horizon");
  add_common(cmd_exact, ex);
  cmd_exact->add_option("--n", ex.n, "Horizon")
      ->required()
      ->check(CLI::NonNegativeNumber);
  cmd_exact->add_option("--kmax", ex.kmax,
                        "Largest level in the table (default: up to the "
                        "first level with CDF = 1)");
  cmd_exact
      ->add_option("--method", ex.method,
                   "Engine: matrix (iterated transfer-matrix products), "
                   "series (generating-function coefficients), or auto")
      ->check(CLI::IsMember({"matrix", "series", "auto"}));
  cmd_exact->add_option("--budget", ex.budget,
                        "Operation budget for the exact engine");

  AsymptoticArgs as;
  CLI::App* cmd_asym = app.add_subcommand(
      "asymptotic",
      "Limit constants, asymptotic moments, and pole/limit CDF tables");
  add_common(cmd_asym, as);
  cmd_asym->add_option("--n", as.n, "Horizon")
      ->required()
      ->check(CLI::NonNegativeNumber);
  cmd_asym->add_option(
      "--k-range", as.k_range,
      "lo:hi -> emit the dominant-root convergence table (k, z_k, scaled "
      "gap) instead of the CDF table");

  SimulateArgs sim;
  CLI::App* cmd_sim = app.add_subcommand(
      "simulate", "Monte Carlo ensemble of maxima: histogram and moments");
  add_common(cmd_sim, sim);
  cmd_sim->add_option("--n", sim.n, "Horizon")
      ->required()
      ->check(CLI::NonNegativeNumber);
  cmd_sim->add_option("--trials", sim.trials, "Number of independent walks")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd_sim->add_option("--seed", sim.seed, "Base seed (per-trial streams are "
                                          "derived deterministically)");
  cmd_sim->add_option("--workers", sim.workers, "Worker threads")
      ->envname("WALKMAX_WORKERS")
      ->check(CLI::PositiveNumber);
  cmd_sim
      ->add_option("--max-convention", sim.max_convention,
                   "Traffic only: track the running maximum after every step "
                   "or only at block ends")
      ->check(CLI::IsMember({"every-step", "block-end"}));
  cmd_sim->add_flag("--confirm-large", sim.confirm_large,
                    "Acknowledge a run beyond 1e8 total steps (a runtime "
                    "estimate is printed first)");

  CompareArgs cmp;
  CLI::App* cmd_cmp = app.add_subcommand(
      "compare",
      "Simulate and cross-check against exact/pole/limit theory; exit 2 if "
      "a consistency band fails");
  add_common(cmd_cmp, cmp);
  cmd_cmp->add_option("--n", cmp.n, "Horizon")
      ->required()
      ->check(CLI::NonNegativeNumber);
  cmd_cmp->add_option("--trials", cmp.trials, "Number of independent walks")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd_cmp->add_option("--seed", cmp.seed, "Base seed");
  cmd_cmp->add_option("--workers", cmp.workers, "Worker threads")
      ->envname("WALKMAX_WORKERS")
      ->check(CLI::PositiveNumber);
  cmd_cmp
      ->add_option("--max-convention", cmp.max_convention,
                   "Traffic only: every-step or block-end maxima")
      ->check(CLI::IsMember({"every-step", "block-end"}));
  cmd_cmp->add_flag("--confirm-large", cmp.confirm_large,
                    "Acknowledge a run beyond 1e8 total steps");
  cmd_cmp->add_option("--figure-data", cmp.figure_data_path,
                      "Also write per-level empirical frequency vs "
                      "theoretical pmf overlay CSV to this file");
  cmd_cmp->add_option("--budget", cmp.budget,
                      "Operation budget for the exact reference columns");

  RenderArgs ren;
  CLI::App* cmd_ren = app.add_subcommand(
      "render", "Re-emit a JSON comparison report (CSV or JSON)");
  cmd_ren->add_option("--in", ren.in_path, "Input JSON report")->required();
  cmd_ren->add_option("--format", ren.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd_ren->add_option("--out", ren.out_path, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
    if (*cmd_exact) return run_exact(ex);
    if (*cmd_asym) return run_asymptotic(as);
    if (*cmd_sim) return run_simulate(sim);
    if (*cmd_cmp) return run_compare(cmp);
    if (*cmd_ren) return run_render(ren);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
