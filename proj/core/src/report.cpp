#include "walkmax/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "walkmax/errors.hpp"
#include "walkmax/gumbel.hpp"
#include "walkmax/rng.hpp"
#include "walkmax/roots.hpp"
#include "walkmax/rq.hpp"
#include "walkmax/transfer.hpp"
#include "walkmax/version.hpp"

namespace walkmax {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string cell(double v) { return std::isnan(v) ? std::string() : fmt17(v); }

const char* convention_name(MaxConvention c) {
  return c == MaxConvention::EveryStep ? "every-step" : "block-end";
}

MaxConvention convention_from_name(const std::string& s) {
  if (s == "every-step") return MaxConvention::EveryStep;
  if (s == "block-end") return MaxConvention::BlockEnd;
  throw std::invalid_argument("unknown max convention: " + s);
}

double json_d(const ordered_json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nan("");
  return it->get<double>();
}

ordered_json json_opt(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

ordered_json metadata_json(const ComparisonMetadata& m) {
  ordered_json j;
  j["scenario"] = scenario_name(m.scenario);
  j["ell"] = m.scenario.ell;
  j["p"] = render_p(m.params);
  j["p_decimal"] = m.params.p;
  j["n_steps"] = m.n_steps;
  j["n_natural"] = m.n_natural;
  j["natural_unit"] = m.natural_unit == TimeUnit::Blocks ? "blocks" : "steps";
  j["trials"] = m.trials;
  j["base_seed"] = m.base_seed;
  j["rng"] = m.rng;
  j["max_convention"] = convention_name(m.max_convention);
  j["truncated"] = m.truncated;
  j["version"] = m.version;
  return j;
}

ComparisonMetadata metadata_from_json(const ordered_json& j) {
  ComparisonMetadata m;
  const std::string sc = j.at("scenario").get<std::string>();
  const int ell = j.at("ell").get<int>();
  m.scenario = scenario_from_name(sc, ell);
  m.params = validate_params(j.at("p").get<std::string>());
  m.n_steps = j.at("n_steps").get<std::int64_t>();
  m.n_natural = j.at("n_natural").get<std::int64_t>();
  m.natural_unit = j.at("natural_unit").get<std::string>() == "blocks"
                       ? TimeUnit::Blocks
                       : TimeUnit::Steps;
  m.trials = j.at("trials").get<std::int64_t>();
  m.base_seed = j.at("base_seed").get<std::uint64_t>();
  m.rng = j.at("rng").get<std::string>();
  m.max_convention =
      convention_from_name(j.at("max_convention").get<std::string>());
  m.truncated = j.at("truncated").get<bool>();
  m.version = j.at("version").get<std::string>();
  return m;
}

void append_metadata_csv(std::ostringstream& out, const ComparisonMetadata& m) {
  out << "# schema,1\n";
  out << "# scenario," << scenario_name(m.scenario) << "\n";
  out << "# ell," << m.scenario.ell << "\n";
  out << "# p," << render_p(m.params) << "\n";
  out << "# p_decimal," << fmt17(m.params.p) << "\n";
  out << "# n_steps," << m.n_steps << "\n";
  out << "# n_natural," << m.n_natural << "\n";
  out << "# natural_unit,"
      << (m.natural_unit == TimeUnit::Blocks ? "blocks" : "steps") << "\n";
  out << "# trials," << m.trials << "\n";
  out << "# base_seed," << m.base_seed << "\n";
  out << "# rng," << m.rng << "\n";
  out << "# max_convention," << convention_name(m.max_convention) << "\n";
  out << "# truncated," << (m.truncated ? 1 : 0) << "\n";
  out << "# version," << m.version << "\n";
}

}  // namespace

ComparisonReport build_comparison(const SimConfig& cfg, std::int64_t budget) {
  if (cfg.n_steps < 1)
    throw std::invalid_argument("comparison undefined for an empty horizon");
  const EnsembleResult ens = run_ensemble(cfg);

  ComparisonReport rep;
  rep.metadata.scenario = cfg.scenario;
  rep.metadata.params = cfg.params;
  rep.metadata.n_steps = ens.n_steps_used;
  rep.metadata.n_natural = natural_index(
      cfg.scenario, TimeIndex{ens.n_steps_used, TimeUnit::Steps});
  rep.metadata.natural_unit =
      cfg.scenario.is_traffic() ? TimeUnit::Blocks : TimeUnit::Steps;
  rep.metadata.trials = cfg.trials;
  rep.metadata.base_seed = cfg.base_seed;
  rep.metadata.rng = rng_id();
  rep.metadata.max_convention = cfg.max_convention;
  rep.metadata.truncated = ens.truncated;
  rep.metadata.version = kVersion;

  const bool overlay = cfg.scenario.is_traffic() && cfg.scenario.ell >= 2;
  const Scenario theory_scenario =
      overlay ? Scenario::traffic(1) : cfg.scenario;
  const TimeIndex horizon{ens.n_steps_used, TimeUnit::Steps};
  rep.summary.theory_mismatch_expected = overlay;

  // Row span: observed histogram plus the span where theory is away from 1.
  int k_hi = ens.histogram.max_level;
  for (int guard = 0; guard < 256; ++guard) {
    const double g = gumbel_cdf(theory_scenario, cfg.params, horizon, k_hi);
    if (g > 1.0 - 1e-9) break;
    ++k_hi;
  }

  const bool with_exact =
      !overlay &&
      3 * (static_cast<std::int64_t>(k_hi) + 1) *
              natural_index(theory_scenario, horizon) <=
          budget;

  double ref_prev = 0.0;
  double emp_cum = 0.0;
  bool all_rows_pass = true;
  const double inv_trials = 1.0 / static_cast<double>(cfg.trials);
  for (int k = 0; k <= k_hi; ++k) {
    ComparisonRow row;
    row.k = k;
    row.cdf_exact = with_exact
                        ? cdf_matrix_power(theory_scenario, cfg.params,
                                           horizon, k, budget)
                        : std::nan("");
    try {
      row.cdf_pole = pole_cdf(theory_scenario, cfg.params, horizon, k);
    } catch (const BracketError&) {
      row.cdf_pole = std::nan("");
    }
    row.cdf_gumbel = gumbel_cdf(theory_scenario, cfg.params, horizon, k);
    const auto it = ens.histogram.counts.find(k);
    const double freq =
        it == ens.histogram.counts.end()
            ? 0.0
            : static_cast<double>(it->second) * inv_trials;
    emp_cum += freq;
    row.cdf_empirical = std::min(emp_cum, 1.0);
    row.pmf_empirical = freq;

    const double ref =
        !std::isnan(row.cdf_exact) ? row.cdf_exact : row.cdf_pole;
    if (!std::isnan(ref)) {
      row.pmf_theory = ref - ref_prev;
      row.dkw_band =
          4.0 * std::sqrt(std::max(0.0, ref * (1.0 - ref)) * inv_trials) +
          1e-3;
      row.within_band = std::abs(row.cdf_empirical - ref) <= row.dkw_band;
      ref_prev = ref;
    } else {
      row.pmf_theory = std::nan("");
      row.dkw_band = std::nan("");
      row.within_band = true;
    }
    all_rows_pass = all_rows_pass && row.within_band;
    rep.rows.push_back(row);
  }

  rep.summary.empirical = ens.stats;
  rep.summary.exact_mean = std::nan("");
  rep.summary.exact_variance = std::nan("");
  if (!overlay) {
    try {
      const Moments m = exact_moments(theory_scenario, cfg.params, horizon,
                                      CdfSource::Auto, budget);
      rep.summary.exact_mean = m.mean;
      rep.summary.exact_variance = m.variance;
    } catch (const std::exception&) {
      // leave absent; the asymptotic reference below still applies
    }
  }
  rep.summary.asymptotic_mean_value =
      asymptotic_mean(theory_scenario, cfg.params, horizon);
  rep.summary.asymptotic_variance_value =
      asymptotic_variance(theory_scenario, cfg.params);

  const double mean_ref = !std::isnan(rep.summary.exact_mean)
                              ? rep.summary.exact_mean
                              : rep.summary.asymptotic_mean_value;
  rep.summary.mean_residual = ens.stats.mean - mean_ref;
  rep.summary.mean_band =
      std::max(3.0 * ens.stats.standard_error_of_mean, 0.03);
  rep.summary.mean_gap_over_sem =
      ens.stats.standard_error_of_mean > 0.0
          ? std::abs(rep.summary.mean_residual) /
                ens.stats.standard_error_of_mean
          : std::numeric_limits<double>::infinity();
  rep.summary.mean_within_band =
      std::abs(rep.summary.mean_residual) <= rep.summary.mean_band;
  rep.summary.bands_pass =
      overlay || (all_rows_pass && rep.summary.mean_within_band);
  return rep;
}

std::string report_to_csv(const ComparisonReport& r) {
  std::ostringstream out;
  out << "# kind,comparison\n";
  append_metadata_csv(out, r.metadata);
  const ComparisonSummary& s = r.summary;
  out << "# empirical_mean," << fmt17(s.empirical.mean) << "\n";
  out << "# empirical_mean_square," << fmt17(s.empirical.mean_square) << "\n";
  out << "# empirical_stddev," << fmt17(s.empirical.stddev) << "\n";
  out << "# empirical_sem," << fmt17(s.empirical.standard_error_of_mean)
      << "\n";
  out << "# exact_mean," << cell(s.exact_mean) << "\n";
  out << "# exact_variance," << cell(s.exact_variance) << "\n";
  out << "# asymptotic_mean," << fmt17(s.asymptotic_mean_value) << "\n";
  out << "# asymptotic_variance," << fmt17(s.asymptotic_variance_value)
      << "\n";
  out << "# mean_residual," << fmt17(s.mean_residual) << "\n";
  out << "# mean_band," << fmt17(s.mean_band) << "\n";
  out << "# mean_gap_over_sem," << fmt17(s.mean_gap_over_sem) << "\n";
  out << "# mean_within_band," << (s.mean_within_band ? 1 : 0) << "\n";
  out << "# bands_pass," << (s.bands_pass ? 1 : 0) << "\n";
  out << "# theory_mismatch_expected," << (s.theory_mismatch_expected ? 1 : 0)
      << "\n";
  out << "k,cdf_exact,cdf_pole,cdf_gumbel,cdf_empirical,pmf_theory,"
         "pmf_empirical,dkw_band,within_band\n";
  for (const ComparisonRow& row : r.rows) {
    out << row.k << ',' << cell(row.cdf_exact) << ',' << cell(row.cdf_pole)
        << ',' << cell(row.cdf_gumbel) << ',' << cell(row.cdf_empirical)
        << ',' << cell(row.pmf_theory) << ',' << cell(row.pmf_empirical)
        << ',' << cell(row.dkw_band) << ',' << (row.within_band ? 1 : 0)
        << "\n";
  }
  return out.str();
}

std::string report_to_json(const ComparisonReport& r) {
  ordered_json j;
  j["schema"] = 1;
  j["kind"] = "comparison";
  j["metadata"] = metadata_json(r.metadata);
  ordered_json rows = ordered_json::array();
  for (const ComparisonRow& row : r.rows) {
    ordered_json jr;
    jr["k"] = row.k;
    jr["cdf_exact"] = json_opt(row.cdf_exact);
    jr["cdf_pole"] = json_opt(row.cdf_pole);
    jr["cdf_gumbel"] = json_opt(row.cdf_gumbel);
    jr["cdf_empirical"] = json_opt(row.cdf_empirical);
    jr["pmf_theory"] = json_opt(row.pmf_theory);
    jr["pmf_empirical"] = json_opt(row.pmf_empirical);
    jr["dkw_band"] = json_opt(row.dkw_band);
    jr["within_band"] = row.within_band;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  ordered_json js;
  js["empirical_mean"] = r.summary.empirical.mean;
  js["empirical_mean_square"] = r.summary.empirical.mean_square;
  js["empirical_stddev"] = r.summary.empirical.stddev;
  js["empirical_sem"] = r.summary.empirical.standard_error_of_mean;
  js["exact_mean"] = json_opt(r.summary.exact_mean);
  js["exact_variance"] = json_opt(r.summary.exact_variance);
  js["asymptotic_mean"] = r.summary.asymptotic_mean_value;
  js["asymptotic_variance"] = r.summary.asymptotic_variance_value;
  js["mean_residual"] = r.summary.mean_residual;
  js["mean_band"] = r.summary.mean_band;
  js["mean_gap_over_sem"] = json_opt(r.summary.mean_gap_over_sem);
  js["mean_within_band"] = r.summary.mean_within_band;
  js["bands_pass"] = r.summary.bands_pass;
  js["theory_mismatch_expected"] = r.summary.theory_mismatch_expected;
  j["summary"] = std::move(js);
  return j.dump(2) + "\n";
}

ComparisonReport report_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  if (j.value("schema", 0) != 1)
    throw std::invalid_argument("unsupported report schema");
  if (j.value("kind", std::string()) != "comparison")
    throw std::invalid_argument("not a comparison report");
  ComparisonReport r;
  r.metadata = metadata_from_json(j.at("metadata"));
  for (const ordered_json& jr : j.at("rows")) {
    ComparisonRow row;
    row.k = jr.at("k").get<int>();
    row.cdf_exact = json_d(jr, "cdf_exact");
    row.cdf_pole = json_d(jr, "cdf_pole");
    row.cdf_gumbel = json_d(jr, "cdf_gumbel");
    row.cdf_empirical = json_d(jr, "cdf_empirical");
    row.pmf_theory = json_d(jr, "pmf_theory");
    row.pmf_empirical = json_d(jr, "pmf_empirical");
    row.dkw_band = json_d(jr, "dkw_band");
    row.within_band = jr.at("within_band").get<bool>();
    r.rows.push_back(row);
  }
  const ordered_json& js = j.at("summary");
  r.summary.empirical.mean = js.at("empirical_mean").get<double>();
  r.summary.empirical.mean_square =
      js.at("empirical_mean_square").get<double>();
  r.summary.empirical.stddev = js.at("empirical_stddev").get<double>();
  r.summary.empirical.standard_error_of_mean =
      js.at("empirical_sem").get<double>();
  r.summary.exact_mean = json_d(js, "exact_mean");
  r.summary.exact_variance = json_d(js, "exact_variance");
  r.summary.asymptotic_mean_value = js.at("asymptotic_mean").get<double>();
  r.summary.asymptotic_variance_value =
      js.at("asymptotic_variance").get<double>();
  r.summary.mean_residual = js.at("mean_residual").get<double>();
  r.summary.mean_band = js.at("mean_band").get<double>();
  {
    const auto it = js.find("mean_gap_over_sem");
    r.summary.mean_gap_over_sem =
        (it == js.end() || it->is_null())
            ? std::numeric_limits<double>::infinity()
            : it->get<double>();
  }
  r.summary.mean_within_band = js.at("mean_within_band").get<bool>();
  r.summary.bands_pass = js.at("bands_pass").get<bool>();
  r.summary.theory_mismatch_expected =
      js.at("theory_mismatch_expected").get<bool>();
  return r;
}

std::string figure_data_csv(const ComparisonReport& r) {
  std::ostringstream out;
  out << "k,empirical_frequency,theoretical_pmf\n";
  for (const ComparisonRow& row : r.rows)
    out << row.k << ',' << cell(row.pmf_empirical) << ','
        << cell(row.pmf_theory) << "\n";
  return out.str();
}

std::string table_to_csv(const DistributionTable& t) {
  std::ostringstream out;
  out << "# schema,1\n";
  out << "# kind,distribution\n";
  out << "# scenario," << scenario_name(t.scenario) << "\n";
  out << "# ell," << t.scenario.ell << "\n";
  out << "# p," << render_p(t.params) << "\n";
  out << "# p_decimal," << fmt17(t.params.p) << "\n";
  out << "# n," << t.n.value << "\n";
  out << "# unit," << (t.n.unit == TimeUnit::Blocks ? "blocks" : "steps")
      << "\n";
  out << "# method," << method_name(t.method) << "\n";
  out << "# version," << kVersion << "\n";
  if (t.index_is_time) {
    out << "# fixed_k," << t.fixed_k << "\n";
    out << "n,cdf\n";
    for (std::size_t i = 0; i < t.cdf.size(); ++i)
      out << i << ',' << fmt17(t.cdf[i]) << "\n";
    return out.str();
  }
  out << "k,cdf,pmf\n";
  for (std::size_t i = 0; i < t.cdf.size(); ++i) {
    out << i << ',' << fmt17(t.cdf[i]) << ',';
    if (i < t.pmf.size())
      out << fmt17(t.pmf[i]);
    else
      out << fmt17(t.cdf[i] - (i == 0 ? 0.0 : t.cdf[i - 1]));
    out << "\n";
  }
  return out.str();
}

std::string table_to_json(const DistributionTable& t) {
  ordered_json j;
  j["schema"] = 1;
  j["kind"] = "distribution";
  ordered_json m;
  m["scenario"] = scenario_name(t.scenario);
  m["ell"] = t.scenario.ell;
  m["p"] = render_p(t.params);
  m["p_decimal"] = t.params.p;
  m["n"] = t.n.value;
  m["unit"] = t.n.unit == TimeUnit::Blocks ? "blocks" : "steps";
  m["method"] = method_name(t.method);
  m["version"] = kVersion;
  if (t.index_is_time) m["fixed_k"] = t.fixed_k;
  j["metadata"] = std::move(m);
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < t.cdf.size(); ++i) {
    ordered_json jr;
    jr[t.index_is_time ? "n" : "k"] = i;
    jr["cdf"] = t.cdf[i];
    if (!t.index_is_time)
      jr["pmf"] = i < t.pmf.size()
                      ? t.pmf[i]
                      : t.cdf[i] - (i == 0 ? 0.0 : t.cdf[i - 1]);
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string ensemble_to_csv(const SimConfig& cfg, const EnsembleResult& r) {
  std::ostringstream out;
  out << "# schema,1\n";
  out << "# kind,ensemble\n";
  out << "# scenario," << scenario_name(cfg.scenario) << "\n";
  out << "# ell," << cfg.scenario.ell << "\n";
  out << "# p," << render_p(cfg.params) << "\n";
  out << "# p_decimal," << fmt17(cfg.params.p) << "\n";
  out << "# n_steps," << r.n_steps_used << "\n";
  out << "# trials," << cfg.trials << "\n";
  out << "# base_seed," << cfg.base_seed << "\n";
  out << "# rng," << rng_id() << "\n";
  out << "# max_convention," << convention_name(cfg.max_convention) << "\n";
  out << "# truncated," << (r.truncated ? 1 : 0) << "\n";
  out << "# version," << kVersion << "\n";
  out << "# mean," << fmt17(r.stats.mean) << "\n";
  out << "# mean_square," << fmt17(r.stats.mean_square) << "\n";
  out << "# stddev," << fmt17(r.stats.stddev) << "\n";
  out << "# sem," << fmt17(r.stats.standard_error_of_mean) << "\n";
  out << "k,count,frequency\n";
  const double inv = 1.0 / static_cast<double>(r.histogram.trials);
  for (const auto& [level, count] : r.histogram.counts)
    out << level << ',' << count << ','
        << fmt17(static_cast<double>(count) * inv) << "\n";
  return out.str();
}

std::string ensemble_to_json(const SimConfig& cfg, const EnsembleResult& r) {
  ordered_json j;
  j["schema"] = 1;
  j["kind"] = "ensemble";
  ordered_json m;
  m["scenario"] = scenario_name(cfg.scenario);
  m["ell"] = cfg.scenario.ell;
  m["p"] = render_p(cfg.params);
  m["p_decimal"] = cfg.params.p;
  m["n_steps"] = r.n_steps_used;
  m["trials"] = cfg.trials;
  m["base_seed"] = cfg.base_seed;
  m["rng"] = rng_id();
  m["max_convention"] = convention_name(cfg.max_convention);
  m["truncated"] = r.truncated;
  m["version"] = kVersion;
  j["metadata"] = std::move(m);
  ordered_json rows = ordered_json::array();
  const double inv = 1.0 / static_cast<double>(r.histogram.trials);
  for (const auto& [level, count] : r.histogram.counts) {
    ordered_json jr;
    jr["k"] = level;
    jr["count"] = count;
    jr["frequency"] = static_cast<double>(count) * inv;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  ordered_json st;
  st["mean"] = r.stats.mean;
  st["mean_square"] = r.stats.mean_square;
  st["stddev"] = r.stats.stddev;
  st["sem"] = r.stats.standard_error_of_mean;
  j["stats"] = std::move(st);
  return j.dump(2) + "\n";
}

}  // namespace walkmax
