// Acceptance checks. Each criterion prints one PASS/FAIL line plus indented
// measurements; the process exits nonzero if any selected criterion fails.
// Criteria are selected by number on the command line (default: all).
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "walkmax/brute.hpp"
#include "walkmax/distribution.hpp"
#include "walkmax/errors.hpp"
#include "walkmax/gumbel.hpp"
#include "walkmax/params.hpp"
#include "walkmax/rational.hpp"
#include "walkmax/report.hpp"
#include "walkmax/roots.hpp"
#include "walkmax/rq.hpp"
#include "walkmax/simulate.hpp"
#include "walkmax/transfer.hpp"
#include "walkmax/transfer_exact.hpp"

using namespace walkmax;

namespace {

std::vector<WalkParams> p_set() {
  return {validate_params("1/5"), validate_params("1/4"),
          validate_params("1/3"), validate_params("3/7"),
          validate_params("1/8")};
}

std::vector<Scenario> all_scenarios() {
  return {Scenario::strong(), Scenario::weak(), Scenario::traffic(1)};
}

TimeIndex natural(const Scenario& s, std::int64_t n) {
  return s.is_traffic() ? TimeIndex::blocks(n) : TimeIndex::steps(n);
}

std::string tag(const Scenario& s, const WalkParams& w) {
  return scenario_name(s) + " p=" + render_p(w);
}

int default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(16u, std::max(1u, hw)));
}

// P{M_n <= k} for every n in [n_lo, n_hi] from one incremental power
// iteration (identical arithmetic to per-call matrix powers; spot anchors
// below tie the two together).
std::vector<double> cdf_march(const Scenario& s, const WalkParams& w, int k,
                              std::int64_t n_lo, std::int64_t n_hi) {
  const TransferMatrix A = build_transfer(s, w, k);
  std::vector<double> v(static_cast<std::size_t>(k) + 1, 0.0);
  std::vector<double> nv(v);
  v[0] = 1.0;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_hi - n_lo) + 1);
  for (std::int64_t n = 1; n <= n_hi; ++n) {
    for (int i = 0; i <= k; ++i) {
      double acc = A.diag[static_cast<std::size_t>(i)] *
                   v[static_cast<std::size_t>(i)];
      if (i > 0)
        acc += A.sub[static_cast<std::size_t>(i)] *
               v[static_cast<std::size_t>(i) - 1];
      if (i < k)
        acc += A.super[static_cast<std::size_t>(i)] *
               v[static_cast<std::size_t>(i) + 1];
      nv[static_cast<std::size_t>(i)] = acc;
    }
    v.swap(nv);
    if (n >= n_lo) {
      double sum = 0.0;
      for (double x : v) sum += x;
      out.push_back(sum);
    }
  }
  return out;
}

// ---------------------------------------------------------------- criterion 1
bool criterion1(std::ostream& out) {
  bool pass = true;
  std::int64_t combos = 0;
  for (const Scenario& s : all_scenarios()) {
    for (const WalkParams& w : p_set()) {
      for (std::int64_t n = 0; n <= 12; ++n) {
        const TimeIndex idx = natural(s, n);
        const std::vector<Rational> pmf = brute_force_distribution(s, w, idx);
        Rational prefix(0);
        for (int k = 0; k <= static_cast<int>(pmf.size()); ++k) {
          if (k < static_cast<int>(pmf.size()))
            prefix += pmf[static_cast<std::size_t>(k)];
          const Rational exact = cdf_matrix_power_exact(s, w, idx, k);
          ++combos;
          if (prefix != exact) {
            pass = false;
            out << "    MISMATCH " << tag(s, w) << " n=" << n << " k=" << k
                << "\n";
          }
        }
        if (prefix != Rational(1)) {
          pass = false;
          out << "    pmf does not sum to 1: " << tag(s, w) << " n=" << n
              << "\n";
        }
      }
    }
  }
  out << "    " << combos << " (scenario,p,n,k) combos compared exactly in "
      << "rational arithmetic; every enumerated pmf sums to 1\n";
  return pass;
}

// ---------------------------------------------------------------- criterion 2
bool criterion2(std::ostream& out) {
  double worst = 0.0;
  std::string worst_at = "-";
  for (const Scenario& s : all_scenarios()) {
    for (const WalkParams& w : p_set()) {
      for (int k = 0; k <= 20; ++k) {
        const std::vector<double> series = series_cdf(s, w, k, 200);
        for (std::int64_t n = 0; n <= 200; ++n) {
          const double m = cdf_matrix_power(s, w, natural(s, n), k);
          const double d = std::abs(series[static_cast<std::size_t>(n)] - m);
          if (d > worst) {
            worst = d;
            worst_at = tag(s, w) + " n=" + std::to_string(n) +
                       " k=" + std::to_string(k);
          }
        }
      }
    }
  }
  out << "    max |series - matrix| = " << worst << " at " << worst_at
      << " (tolerance 1e-10)\n";
  return worst <= 1e-10;
}

// ---------------------------------------------------------------- criterion 3
bool criterion3(std::ostream& out) {
  const double fractions[] = {-0.95, -0.85, -0.75, -0.65, -0.55, -0.45,
                              -0.35, -0.25, -0.15, -0.05, 0.05,  0.15,
                              0.25,  0.35,  0.45,  0.55,  0.65,  0.75,
                              0.85,  0.95,  0.98,  0.99,  0.995};
  const int levels[] = {0,  1,  2,  3,  4,  5,  6,  7,  8,  9,
                        10, 12, 15, 20, 25, 30, 40, 50, 60};
  double worst = 0.0;
  std::string worst_at = "-";
  std::int64_t points = 0;
  for (const Scenario& s : all_scenarios()) {
    for (const WalkParams& w : p_set()) {
      const double zb = z_branch(s, w);
      std::vector<double> zs;
      for (double f : fractions) zs.push_back(f * zb);
      zs.push_back(zb - 2e-6);
      for (int k : levels) {
        for (double z : zs) {
          if (s.kind == ScenarioKind::WeakReflect && z < 0.0) continue;
          if (std::abs(1.0 - z) < 1e-4) continue;
          const RQPair rec = eval_RQ_recurrence(s, w, k, z);
          const RQPair cls = eval_RQ_closed(s, w, k, z);
          const double eR =
              std::abs(cls.R - rec.R) / std::max(1.0, std::abs(rec.R));
          const double eQ =
              std::abs(cls.Q - rec.Q) / std::max(1.0, std::abs(rec.Q));
          ++points;
          const double e = std::max(eR, eQ);
          if (e > worst) {
            worst = e;
            worst_at = tag(s, w) + " k=" + std::to_string(k) +
                       " z=" + std::to_string(z);
          }
        }
      }
    }
  }
  out << "    " << points << " grid points; max error scaled by max(1,|value|)"
      << " = " << worst << " at " << worst_at << " (tolerance 1e-10)\n";
  return worst <= 1e-10;
}

// ---------------------------------------------------------------- criterion 4
bool criterion4(std::ostream& out) {
  bool pass = true;
  struct Case {
    Scenario s;
    int k;
    TimeUnit unit;
    std::vector<const char*> ps;
  };
  const std::vector<Case> cases = {
      {Scenario::strong(), 40, TimeUnit::Steps,
       {"1/5", "1/4", "1/3", "3/7", "1/8"}},
      {Scenario::weak(), 40, TimeUnit::Steps,
       {"1/5", "1/4", "1/3", "3/7", "1/8"}},
      {Scenario::traffic(1), 25, TimeUnit::Blocks, {"1/5", "1/3"}},
  };
  for (const Case& c : cases) {
    for (const char* pt : c.ps) {
      const WalkParams w = validate_params(pt);
      const auto rows = root_convergence_table(c.s, w, c.k, c.k);
      const double limit = limit_constant(c.s, w, c.unit).c;
      const double rel = std::abs(rows[0].scaled_gap / limit - 1.0);
      out << "    " << tag(c.s, w) << " k=" << c.k
          << ": scaled gap = " << rows[0].scaled_gap << ", limit = " << limit
          << ", relative gap = " << rel << "\n";
      if (!(rel <= 0.005)) pass = false;
    }
  }
  out << "    tolerance: relative gap <= 0.5%\n";
  return pass;
}

// ---------------------------------------------------------------- criterion 5
bool criterion5(std::ostream& out) {
  bool tolerance_ok = true;
  bool thresholds_ok = true;
  double worst = 0.0;
  std::string worst_at = "-";
  Scenario worst_s = Scenario::strong();
  WalkParams worst_w = validate_params("1/3");
  int worst_k = -1;
  for (const Scenario& s : all_scenarios()) {
    for (const WalkParams& w : p_set()) {
      const int k_min = min_root_level(s, w);
      // The bracket must refuse exactly the levels below the empirical
      // root-existence threshold, which the integer-arithmetic predictor
      // pins down per (scenario, p).
      for (int k = 5; k <= 25; ++k) {
        bool has_root = true;
        try {
          (void)pole_cdf(s, w, natural(s, 500), k);
        } catch (const BracketError&) {
          has_root = false;
        }
        if (has_root != (k >= k_min)) {
          thresholds_ok = false;
          out << "    threshold mismatch at " << tag(s, w) << " k=" << k
              << " (k_min=" << k_min << ")\n";
        }
      }
      double local_worst = 0.0;
      std::string local_at = "-";
      int local_k_arg = -1;
      for (int k = std::max(5, k_min); k <= 25; ++k) {
        const std::vector<double> exact = cdf_march(s, w, k, 200, 2000);
        // anchor the incremental march to the public per-call evaluation
        for (std::int64_t na : {std::int64_t{200}, std::int64_t{911},
                                std::int64_t{2000}}) {
          const double direct = cdf_matrix_power(s, w, natural(s, na), k);
          if (std::abs(direct - exact[static_cast<std::size_t>(na - 200)]) >
              1e-12) {
            tolerance_ok = false;
            out << "    march/per-call divergence at " << tag(s, w)
                << " n=" << na << " k=" << k << "\n";
          }
        }
        for (std::int64_t n = 200; n <= 2000; ++n) {
          const double pole = pole_cdf(s, w, natural(s, n), k);
          const double d =
              std::abs(pole - exact[static_cast<std::size_t>(n - 200)]);
          if (d > local_worst) {
            local_worst = d;
            local_at = "n=" + std::to_string(n) + " k=" + std::to_string(k);
            local_k_arg = k;
          }
        }
      }
      if (local_worst > worst) {
        worst = local_worst;
        worst_at = tag(s, w) + " " + local_at;
        worst_s = s;
        worst_w = w;
        worst_k = local_k_arg;
      }
      out << "    " << tag(s, w) << ": levels without a dominant root: "
          << (k_min > 5 ? "k in [5," + std::to_string(k_min - 1) + "]"
                        : "none in range")
          << "; max |pole - matrix| = " << local_worst << " at " << local_at
          << "\n";
    }
  }
  out << "    worst overall: " << worst << " at " << worst_at
      << " (tolerance 1e-6); bracket refusals "
      << (thresholds_ok ? "match" : "DO NOT match")
      << " the integer-arithmetic thresholds\n";
  if (!(worst <= 1e-6) && worst_k >= 0) {
    // Characterize the excess: if it is the matrix power's subdominant-
    // eigenvalue transient (which the single-pole form omits by design),
    // the gap decays geometrically in n at a fixed rate below 1.
    const std::vector<double> ex = cdf_march(worst_s, worst_w, worst_k, 200,
                                             1000);
    out << "    gap vs n at " << tag(worst_s, worst_w) << " k=" << worst_k
        << ":";
    double e200 = 0.0, e1000 = 0.0;
    for (std::int64_t n : {std::int64_t{200}, std::int64_t{400},
                           std::int64_t{600}, std::int64_t{800},
                           std::int64_t{1000}}) {
      const double e = std::abs(
          pole_cdf(worst_s, worst_w, natural(worst_s, n), worst_k) -
          ex[static_cast<std::size_t>(n - 200)]);
      if (n == 200) e200 = e;
      if (n == 1000) e1000 = e;
      out << "  e(" << n << ")=" << e;
    }
    out << "\n    measured per-step decay of the gap: "
        << std::pow(e1000 / e200, 1.0 / 800.0)
        << " (geometric transient, not a plateau)\n";
  }
  return tolerance_ok && thresholds_ok && worst <= 1e-6;
}

// ---------------------------------------------------------------- criterion 6
bool criterion6(std::ostream& out) {
  bool pass = true;
  for (const Scenario& s : all_scenarios()) {
    for (const WalkParams& w : p_set()) {
      const int k_min = min_root_level(s, w);
      const TimeIndex n = TimeIndex::steps(1000000);
      double sup = 0.0;
      int arg_k = -1;
      for (int k = k_min; k <= k_min + 400; ++k) {
        const double g = gumbel_cdf(s, w, n, k);
        const double p = pole_cdf(s, w, n, k);
        const double d = std::abs(g - p);
        if (d > sup) {
          sup = d;
          arg_k = k;
        }
        if (g > 1.0 - 1e-12 && p > 1.0 - 1e-12) break;
      }
      out << "    " << tag(s, w) << ": sup_k |gumbel - pole| = " << sup
          << " at k=" << arg_k << "\n";
      if (!(sup <= 0.01)) pass = false;
    }
  }
  out << "    tolerance: 0.01 at n = 1e6 steps\n";
  return pass;
}

// ---------------------------------------------------------------- criterion 7
bool criterion7(std::ostream& out) {
  bool pass = true;
  double worst_mean = 0.0, worst_var = 0.0;
  std::string at_mean = "-", at_var = "-";
  int combos = 0, in_band = 0;
  for (const Scenario& s : all_scenarios()) {
    for (const WalkParams& w : p_set()) {
      for (std::int64_t n : {std::int64_t{10000}, std::int64_t{1000000},
                             std::int64_t{100000000}}) {
        const TimeIndex idx = TimeIndex::steps(n);
        const Moments m = exact_moments(s, w, idx, CdfSource::PoleApprox);
        const double dm = std::abs(m.mean - asymptotic_mean(s, w, idx));
        const double dv =
            std::abs(m.variance - asymptotic_variance(s, w));
        if (dm > worst_mean) {
          worst_mean = dm;
          at_mean = tag(s, w) + " n=" + std::to_string(n);
        }
        if (dv > worst_var) {
          worst_var = dv;
          at_var = tag(s, w) + " n=" + std::to_string(n);
        }
        ++combos;
        if (dm <= 0.02 && dv <= 0.02) {
          ++in_band;
        } else {
          pass = false;
          out << "    EXCEEDS band: " << tag(s, w) << " n=" << n
              << " |dmean|=" << dm << " |dvar|=" << dv << "\n";
        }
      }
    }
  }
  out << "    " << in_band << " of " << combos
      << " (scenario, p, n) combinations within the 0.02 band\n";
  out << "    worst |mean - asymptotic| = " << worst_mean << " at " << at_mean
      << "\n";
  out << "    worst |variance - asymptotic| = " << worst_var << " at "
      << at_var << "\n";
  out << "    tolerance: 0.02 for both, n in {1e4, 1e6, 1e8} steps\n";
  if (!pass) {
    // The exceedances track the two terms the constant-plus-band model
    // ignores: a log-periodic oscillation whose amplitude grows with the
    // tail ratio r (large-r configurations sit far outside the band at
    // every n), and a slowly decaying correction visible at n = 1e4 for
    // p = 3/7 where the decay rate is closest to 1.
    out << "    moment identity check (pole vs matrix power at n = 1e4):\n";
    for (const Scenario& s : all_scenarios()) {
      const WalkParams w = validate_params("1/3");
      const TimeIndex idx = TimeIndex::steps(10000);
      const Moments mp = exact_moments(s, w, idx, CdfSource::PoleApprox);
      const Moments mm = exact_moments(s, w, idx, CdfSource::MatrixPower);
      out << "      " << tag(s, w) << ": |mean_pole - mean_matrix| = "
          << std::abs(mp.mean - mm.mean)
          << ", |var_pole - var_matrix| = "
          << std::abs(mp.variance - mm.variance) << "\n";
    }
  }
  return pass;
}

// ---------------------------------------------------------------- criterion 8
bool criterion8(std::ostream& out) {
  bool pass = true;
  int idx = 0;
  for (const Scenario& s : {Scenario::strong(), Scenario::weak()}) {
    for (const char* pt : {"1/5", "1/3"}) {
      SimConfig cfg;
      cfg.scenario = s;
      cfg.params = validate_params(pt);
      cfg.n_steps = 1000000;
      cfg.trials = 40000;
      cfg.base_seed = 20260816u + static_cast<std::uint64_t>(idx++);
      cfg.workers = default_workers();
      const ComparisonReport rep = build_comparison(cfg);
      int rows_checked = 0;
      double min_margin = 1e300;
      for (const ComparisonRow& row : rep.rows) {
        const double ref =
            std::isnan(row.cdf_exact) ? row.cdf_pole : row.cdf_exact;
        if (std::isnan(ref)) continue;
        ++rows_checked;
        min_margin = std::min(
            min_margin, row.dkw_band - std::abs(row.cdf_empirical - ref));
      }
      out << "    " << tag(cfg.scenario, cfg.params)
          << ": mean residual = " << rep.summary.mean_residual
          << " (band " << rep.summary.mean_band << "), " << rows_checked
          << " CDF rows, min band margin = " << min_margin
          << ", bands_pass = " << (rep.summary.bands_pass ? 1 : 0) << "\n";
      if (!rep.summary.bands_pass) pass = false;
    }
  }
  out << "    n = 1e6 steps, 40000 trials per configuration\n";
  return pass;
}

// ---------------------------------------------------------------- criterion 9
bool criterion9(std::ostream& out) {
  SimConfig cfg;
  cfg.params = validate_params("1/3");
  cfg.n_steps = 1000000;
  cfg.trials = 40000;
  cfg.base_seed = 31415926u;
  cfg.workers = default_workers();

  cfg.scenario = Scenario::traffic(2);
  const ComparisonReport two = build_comparison(cfg);
  out << "    two-step signal: empirical mean = " << two.summary.empirical.mean
      << ", one-step prediction = " << two.summary.asymptotic_mean_value
      << ", gap / SEM = " << two.summary.mean_gap_over_sem
      << " (needs > 5), expected-mismatch flag = "
      << (two.summary.theory_mismatch_expected ? 1 : 0) << "\n";

  cfg.scenario = Scenario::traffic(1);
  const ComparisonReport one = build_comparison(cfg);
  out << "    one-step signal: mean residual = " << one.summary.mean_residual
      << " (band " << one.summary.mean_band
      << "), bands_pass = " << (one.summary.bands_pass ? 1 : 0) << "\n";

  return two.summary.mean_gap_over_sem > 5.0 &&
         two.summary.theory_mismatch_expected && one.summary.bands_pass &&
         !one.summary.theory_mismatch_expected;
}

// --------------------------------------------------------------- criterion 10
bool criterion10(std::ostream& out) {
  SimConfig cfg;
  cfg.scenario = Scenario::strong();
  cfg.params = validate_params("1/3");
  cfg.n_steps = 100000;
  cfg.trials = 4000;
  cfg.base_seed = 777;

  bool pass = true;
  std::string csv_ref, json_ref;
  Histogram hist_ref;
  for (int workers : {1, 4, 16}) {
    cfg.workers = workers;
    const EnsembleResult r = run_ensemble(cfg);
    const std::string csv = ensemble_to_csv(cfg, r);
    const std::string js = report_to_json(build_comparison(cfg));
    if (workers == 1) {
      csv_ref = csv;
      json_ref = js;
      hist_ref = r.histogram;
      continue;
    }
    if (csv != csv_ref) {
      pass = false;
      out << "    ensemble CSV differs between workers=1 and workers="
          << workers << "\n";
    }
    if (js != json_ref) {
      pass = false;
      out << "    comparison JSON differs between workers=1 and workers="
          << workers << "\n";
    }
    if (!(hist_ref.counts == r.histogram.counts)) {
      pass = false;
      out << "    histogram differs between workers=1 and workers=" << workers
          << "\n";
    }
  }
  if (pass)
    out << "    ensemble CSV, comparison JSON, and histograms byte-identical "
        << "for workers in {1, 4, 16}\n";
  return pass;
}

struct Criterion {
  int id;
  const char* label;
  bool (*fn)(std::ostream&);
};

const Criterion kCriteria[] = {
    {1, "exhaustive enumeration equals exact rational matrix power "
        "(3 scenarios x 5 fractions, n <= 12, all k)",
     criterion1},
    {2, "series extraction matches matrix power within 1e-10 "
        "(n <= 200, k <= 20, all scenarios and fractions)",
     criterion2},
    {3, "closed forms match recurrences within 1e-10 "
        "(k <= 60, split-root z grid, all scenarios and fractions)",
     criterion3},
    {4, "scaled root gaps reach the limit constants within 0.5% "
        "(k=40 walks, k=25 traffic)",
     criterion4},
    {5, "pole CDF within 1e-6 of matrix power (n in [200,2000], k in [5,25], "
        "all scenarios and fractions)",
     criterion5},
    {6, "limit CDF within 0.01 of pole CDF at n=1e6 "
        "(all scenarios and fractions)",
     criterion6},
    {7, "pole-summed moments within 0.02 of asymptotic mean/variance "
        "(n in {1e4,1e6,1e8} steps)",
     criterion7},
    {8, "40000-trial ensembles match exact mean and CDF bands "
        "(strong/weak, p in {1/5,1/3}, n=1e6)",
     criterion8},
    {9, "two-step signal departs from one-step theory by more than 5 SEM "
        "while one-step passes the same bands",
     criterion9},
    {10, "histograms and reports byte-identical across workers 1/4/16",
     criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    try {
      const int id = std::stoi(argv[i]);
      if (id < 1 || id > 10) throw std::out_of_range("id");
      selected.push_back(id);
    } catch (const std::exception&) {
      std::cerr << "usage: " << argv[0] << " [criterion numbers 1..10]\n";
      return 2;
    }
  }
  if (selected.empty())
    for (const Criterion& c : kCriteria) selected.push_back(c.id);

  bool all_pass = true;
  for (int id : selected) {
    const Criterion& c = kCriteria[id - 1];
    std::ostringstream detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail << "    unexpected exception: " << e.what() << "\n";
      ok = false;
    }
    std::cout << "criterion " << c.id << ": " << (ok ? "PASS" : "FAIL")
              << " -- " << c.label << "\n"
              << detail.str();
    std::cout.flush();
    if (!ok) all_pass = false;
  }
  return all_pass ? 0 : 1;
}
