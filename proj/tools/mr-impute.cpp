// mr-impute: command-line front end for the mrsurvey library.
//
// Subcommands:
//   run        Monte Carlo scenario batches from a JSON config -> CSV table
//              of relative bias / MSE / relative efficiency per scenario,
//              plus a JSON diagnostics sidecar.
//   impute     multiply robust imputation on a CSV sample: fills in missing
//              outcomes, appends influence and conditional-bias columns, and
//              reports the imputed and bias-adjusted totals.
//   gen        generate a synthetic population (or a drawn sample with
//              nonresponse) as CSV.
//   calibrate  adjust imputed values in a CSV so the imputed total hits a
//              target, under a chosen distance.
//
// Exit codes: 0 success, 2 configuration or input error, 3 numerical
// failure, 4 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mrsurvey/bootstrap.hpp"
#include "mrsurvey/calibrate.hpp"
#include "mrsurvey/csv.hpp"
#include "mrsurvey/design.hpp"
#include "mrsurvey/errors.hpp"
#include "mrsurvey/harness.hpp"
#include "mrsurvey/models.hpp"
#include "mrsurvey/rng.hpp"
#include "mrsurvey/simgen.hpp"

using nlohmann::json;
using namespace mrsurvey;

namespace {

// ---- small helpers ----------------------------------------------------------

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in, nullptr, /*allow_exceptions=*/true,
                       /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path);
}

// "1,v1,v1^2" or "1 v1 v1^2" -> {"1","v1","v1^2"}
std::vector<std::string> split_terms(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : text) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Distance distance_from_string(const std::string& name) {
  if (name == "chi-square" || name == "chi2") return Distance::ChiSquare;
  if (name == "logit") return Distance::LogitBounded;
  throw ConfigError("unknown distance '" + name +
                    "' (expected chi-square or logit)");
}

void reject_unknown_keys(const json& obj, const std::vector<std::string>& known,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const std::string& k : known) ok = ok || item.key() == k;
    if (!ok) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

// ---- run: scenario mode -----------------------------------------------------

std::vector<std::vector<std::string>> model_lists(const json& j,
                                                  const std::string& where) {
  if (!j.is_array())
    throw ConfigError(where + " must be an array of term arrays");
  std::vector<std::vector<std::string>> out;
  for (const json& m : j) {
    if (!m.is_array() || m.empty())
      throw ConfigError(where + ": each model must be a non-empty array of terms");
    std::vector<std::string> toks;
    for (const json& t : m) toks.push_back(t.get<std::string>());
    out.push_back(std::move(toks));
  }
  return out;
}

ScenarioConfig scenario_from_json(const json& sc, const json& top, int index) {
  const std::string where = "scenarios[" + std::to_string(index) + "]";
  reject_unknown_keys(
      sc,
      {"name", "family", "beta", "sigma2", "N", "n", "replicates", "seed",
       "threads", "nonresponse_models", "imputation_models", "full_response",
       "bias_method", "bootstrap_replicates", "calibrate", "distance",
       "bounds", "freeze_population", "response"},
      where);

  auto pick = [&](const char* key) -> json {
    if (sc.contains(key)) return sc.at(key);
    if (top.contains(key)) return top.at(key);
    return json();
  };

  ScenarioConfig c;
  if (!sc.contains("family")) throw ConfigError(where + ": missing 'family'");
  c.population.family = family_from_string(sc.at("family").get<std::string>());
  if (!sc.contains("beta")) throw ConfigError(where + ": missing 'beta'");
  const json& beta = sc.at("beta");
  if (!beta.is_array() || beta.size() != 3)
    throw ConfigError(where + ": 'beta' must be [beta0, beta1, beta2]");
  c.population.beta0 = beta[0].get<double>();
  c.population.beta1 = beta[1].get<double>();
  c.population.beta2 = beta[2].get<double>();
  if (!pick("sigma2").is_null()) c.population.sigma2 = pick("sigma2").get<double>();
  if (!pick("N").is_null()) c.population.N = pick("N").get<int>();
  if (!pick("n").is_null()) c.n = pick("n").get<int>();
  if (!pick("replicates").is_null()) c.replicates = pick("replicates").get<int>();
  if (!pick("seed").is_null()) c.seed = pick("seed").get<std::uint64_t>();
  if (!pick("threads").is_null()) c.threads = pick("threads").get<int>();

  const std::map<std::string, int> columns{{"v1", 0}, {"v2", 1}};
  if (!pick("nonresponse_models").is_null())
    for (const auto& toks :
         model_lists(pick("nonresponse_models"), where + ".nonresponse_models"))
      c.suite.nonresponse.push_back(parse_terms(toks, columns));
  if (pick("imputation_models").is_null())
    throw ConfigError(where + ": missing 'imputation_models'");
  for (const auto& toks :
       model_lists(pick("imputation_models"), where + ".imputation_models"))
    c.suite.imputation.push_back(parse_terms(toks, columns));

  if (!pick("full_response").is_null())
    c.full_response = pick("full_response").get<bool>();
  if (!pick("bias_method").is_null()) {
    const std::string m = pick("bias_method").get<std::string>();
    if (m == "taylor")
      c.bias_method = BiasMethod::Taylor;
    else if (m == "bootstrap")
      c.bias_method = BiasMethod::Bootstrap;
    else
      throw ConfigError(where + ": bias_method must be 'taylor' or 'bootstrap'");
  }
  if (!pick("bootstrap_replicates").is_null())
    c.bootstrap_replicates = pick("bootstrap_replicates").get<int>();
  if (!pick("calibrate").is_null()) c.calibrate = pick("calibrate").get<bool>();
  if (!pick("distance").is_null())
    c.distance.distance = distance_from_string(pick("distance").get<std::string>());
  if (!pick("bounds").is_null()) {
    const json& b = pick("bounds");
    if (!b.is_array() || b.size() != 2)
      throw ConfigError(where + ": 'bounds' must be [lo, hi]");
    c.distance.lo = b[0].get<double>();
    c.distance.hi = b[1].get<double>();
  }
  if (!pick("freeze_population").is_null())
    c.freeze_population = pick("freeze_population").get<bool>();
  if (!pick("response").is_null()) {
    const json& a = pick("response");
    if (!a.is_array() || a.size() != 3)
      throw ConfigError(where + ": 'response' must be [a0, a1, a2]");
    c.response.a0 = a[0].get<double>();
    c.response.a1 = a[1].get<double>();
    c.response.a2 = a[2].get<double>();
  }

  if (sc.contains("name")) {
    c.name = sc.at("name").get<std::string>();
  } else {
    std::ostringstream label;
    label << family_name(c.population.family) << "(" << c.population.beta0
          << "," << c.population.beta1 << "," << c.population.beta2
          << ") n=" << c.n;
    c.name = label.str();
  }
  return c;
}

int cmd_run(const std::string& config_path, const std::string& out_path,
            std::string diag_path, bool quiet, int replicates_override,
            std::optional<std::uint64_t> seed_override) {
  const json top = load_json(config_path);
  reject_unknown_keys(top,
                      {"scenarios", "sigma2", "N", "n", "replicates", "seed",
                       "threads", "nonresponse_models", "imputation_models",
                       "full_response", "bias_method", "bootstrap_replicates",
                       "calibrate", "distance", "bounds", "freeze_population",
                       "response"},
                      config_path);
  if (!top.contains("scenarios") || !top.at("scenarios").is_array() ||
      top.at("scenarios").empty())
    throw ConfigError(config_path + ": needs a non-empty 'scenarios' array");

  std::vector<ScenarioConfig> configs;
  int index = 0;
  for (const json& sc : top.at("scenarios")) {
    ScenarioConfig c = scenario_from_json(sc, top, index++);
    if (replicates_override > 0) c.replicates = replicates_override;
    if (seed_override) c.seed = *seed_override;
    configs.push_back(std::move(c));
  }

  CsvTable table;
  table.header = {"name",       "family",   "beta0",   "beta1",
                  "beta2",      "sigma2",   "N",       "n",
                  "replicates", "completed", "dropped", "rb_mr",
                  "mse_mr",     "rb_star",  "mse_star", "re",
                  "clamped",    "max_calibration_gap",  "wall_seconds"};
  json diag;
  diag["config"] = config_path;
  diag["scenarios"] = json::array();

  for (const ScenarioConfig& c : configs) {
    const RunResult r = run_scenario(c);
    table.rows.push_back(
        {r.name, family_name(c.population.family), format_double(c.population.beta0),
         format_double(c.population.beta1), format_double(c.population.beta2),
         format_double(c.population.variance()), std::to_string(c.population.N),
         std::to_string(c.n), std::to_string(r.replicates),
         std::to_string(r.completed), std::to_string(r.dropped),
         format_double(r.mr.rb), format_double(r.mr.mse),
         format_double(r.mr_star.rb), format_double(r.mr_star.mse),
         format_double(r.re), std::to_string(r.clamped),
         format_double(r.max_calibration_gap), format_double(r.wall_seconds)});
    json d;
    d["name"] = r.name;
    d["seed"] = c.seed;
    d["replicates"] = r.replicates;
    d["completed"] = r.completed;
    d["dropped"] = r.dropped;
    d["clamped"] = r.clamped;
    d["max_calibration_gap"] = r.max_calibration_gap;
    d["first_error"] = r.first_error;
    d["wall_seconds"] = r.wall_seconds;
    diag["scenarios"].push_back(std::move(d));
    if (!quiet)
      std::fprintf(stderr, "%-40s RB %7.2f  RB* %7.2f  RE %6.1f  (%d/%d ok, %.1fs)\n",
                   r.name.c_str(), r.mr.rb, r.mr_star.rb, r.re, r.completed,
                   r.replicates, r.wall_seconds);
  }

  if (out_path.empty()) {
    write_csv(std::cout, table);
  } else {
    write_csv_file(out_path, table);
    if (diag_path.empty()) {
      const std::size_t dot = out_path.find_last_of('.');
      diag_path = (dot == std::string::npos ? out_path : out_path.substr(0, dot)) +
                  ".json";
      if (diag_path == out_path) diag_path = out_path + ".diag.json";
    }
  }
  if (!diag_path.empty()) save_text(diag_path, diag.dump(2) + "\n");
  return 0;
}

// ---- impute: dataset mode ---------------------------------------------------

int cmd_impute(const std::string& in_path, const std::string& out_path,
               const std::vector<std::string>& nr_models,
               const std::vector<std::string>& imp_models, int population_size,
               int bootstrap_m, std::uint64_t bootstrap_seed, int threads,
               bool calibrate, const std::string& distance,
               const std::pair<double, double>& bounds, bool phi_unit,
               const std::string& summary_path) {
  DatasetOptions opts;
  for (const std::string& m : nr_models)
    opts.nonresponse_models.push_back(split_terms(m));
  for (const std::string& m : imp_models)
    opts.imputation_models.push_back(split_terms(m));
  if (population_size > 0) opts.population_size = population_size;
  if (bootstrap_m > 0) {
    opts.bias_method = BiasMethod::Bootstrap;
    opts.bootstrap.replicates = bootstrap_m;
    opts.bootstrap.seed = bootstrap_seed;
    opts.bootstrap.threads = threads;
  }
  opts.calibrate = calibrate;
  opts.distance.distance = distance_from_string(distance);
  opts.distance.lo = bounds.first;
  opts.distance.hi = bounds.second;
  if (phi_unit) opts.phi = Phi::Unit;

  const DatasetResult res = impute_dataset(read_csv_file(in_path), opts);
  write_csv_file(out_path, res.table);

  const DatasetSummary& s = res.summary;
  std::printf("n=%d  N=%d  respondents=%d\n", s.n, s.N, s.respondents);
  std::printf("imputed total        %s\n", format_double(s.t_mr).c_str());
  std::printf("bias-adjusted total  %s\n", format_double(s.t_mr_star).c_str());
  std::printf("conditional bias min %s (id %s)  max %s (id %s)\n",
              format_double(s.b_min).c_str(), s.argmin_id.c_str(),
              format_double(s.b_max).c_str(), s.argmax_id.c_str());
  if (s.clamped > 0)
    std::printf("clamped response probabilities: %d\n", s.clamped);
  if (bootstrap_m > 0)
    std::printf("bootstrap replicates dropped: %d\n", s.bootstrap_dropped);
  if (s.calibrated)
    std::printf("calibrated imputed total %s (on the bias-adjusted total)\n",
                format_double(s.calibrated_total).c_str());

  if (!summary_path.empty()) {
    json j;
    j["n"] = s.n;
    j["N"] = s.N;
    j["respondents"] = s.respondents;
    j["t_mr"] = s.t_mr;
    j["t_mr_star"] = s.t_mr_star;
    j["b_min"] = s.b_min;
    j["b_max"] = s.b_max;
    j["argmin_id"] = s.argmin_id;
    j["argmax_id"] = s.argmax_id;
    j["clamped"] = s.clamped;
    j["bootstrap_dropped"] = s.bootstrap_dropped;
    j["calibrated"] = s.calibrated;
    if (s.calibrated) j["calibrated_total"] = s.calibrated_total;
    save_text(summary_path, j.dump(2) + "\n");
  }
  return 0;
}

// ---- gen: synthetic data ----------------------------------------------------

PopulationSpec population_from_json(const json& j, const std::string& where) {
  reject_unknown_keys(j, {"N", "family", "beta", "sigma2", "seed"}, where);
  PopulationSpec ps;
  if (j.contains("N")) ps.N = j.at("N").get<int>();
  if (!j.contains("family")) throw ConfigError(where + ": missing 'family'");
  ps.family = family_from_string(j.at("family").get<std::string>());
  if (!j.contains("beta")) throw ConfigError(where + ": missing 'beta'");
  const json& beta = j.at("beta");
  if (!beta.is_array() || beta.size() != 3)
    throw ConfigError(where + ": 'beta' must be [beta0, beta1, beta2]");
  ps.beta0 = beta[0].get<double>();
  ps.beta1 = beta[1].get<double>();
  ps.beta2 = beta[2].get<double>();
  if (j.contains("sigma2")) ps.sigma2 = j.at("sigma2").get<double>();
  if (j.contains("seed")) ps.seed = j.at("seed").get<std::uint64_t>();
  return ps;
}

int cmd_gen(const std::string& spec_path, const std::string& out_path,
            int sample_n, bool with_response) {
  if (with_response && sample_n <= 0)
    throw ConfigError("--response requires --sample");
  const PopulationSpec ps = population_from_json(load_json(spec_path), spec_path);
  const FinitePopulation pop = gen_population(ps);

  CsvTable table;
  if (sample_n <= 0) {
    table.header = {"id", "v1", "v2", "y"};
    for (int i = 0; i < ps.N; ++i) {
      const UnitRecord& u = pop.units[static_cast<std::size_t>(i)];
      table.rows.push_back({std::to_string(i + 1), format_double(u.v[0]),
                            format_double(u.v[1]), format_double(u.y)});
    }
  } else {
    // Sample mode emits the impute-ready layout (id, w, r, y, predictors).
    std::mt19937_64 gs = substream(ps.seed, {1u});
    const Sample sample = draw_srswor(pop, sample_n, gs);
    std::vector<std::uint8_t> r(static_cast<std::size_t>(sample_n), 1);
    if (with_response) {
      std::vector<double> v1(static_cast<std::size_t>(sample_n));
      for (int i = 0; i < sample_n; ++i)
        v1[static_cast<std::size_t>(i)] =
            pop.units[static_cast<std::size_t>(sample.members[static_cast<std::size_t>(i)])].v[0];
      std::mt19937_64 gr = substream(ps.seed, {2u});
      r = gen_response(v1, ResponseMechanism{}, gr);
    }
    const std::string w = format_double(static_cast<double>(ps.N) / sample_n);
    table.header = {"id", "w", "r", "y", "v1", "v2"};
    for (int i = 0; i < sample_n; ++i) {
      const int m = sample.members[static_cast<std::size_t>(i)];
      const UnitRecord& u = pop.units[static_cast<std::size_t>(m)];
      const bool resp = r[static_cast<std::size_t>(i)] != 0;
      table.rows.push_back({std::to_string(m + 1), w, resp ? "1" : "0",
                            resp ? format_double(u.y) : std::string(),
                            format_double(u.v[0]), format_double(u.v[1])});
    }
  }
  if (out_path.empty())
    write_csv(std::cout, table);
  else
    write_csv_file(out_path, table);
  return 0;
}

// ---- calibrate: CSV mode ----------------------------------------------------

int cmd_calibrate(const std::string& in_path, double target,
                  const std::string& distance,
                  const std::pair<double, double>& bounds,
                  const std::string& out_path) {
  const CsvTable input = read_csv_file(in_path);
  const int w_c = input.column("w");
  const int r_c = input.column("r");
  const int y_c = input.column("y");
  const int ys_c = input.column("y_star");
  const int q_c = input.column("q");  // optional, defaults to 1
  if (w_c < 0 || r_c < 0 || y_c < 0 || ys_c < 0)
    throw InputError(in_path + ": need columns w, r, y, y_star");

  const int n = static_cast<int>(input.rows.size());
  std::vector<double> ys, ws, qs;
  double respondent_total = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& row = input.rows[static_cast<std::size_t>(i)];
    const int lineno = i + 2;
    const double w = parse_double(row[static_cast<std::size_t>(w_c)], lineno, "w");
    const double rv = parse_double(row[static_cast<std::size_t>(r_c)], lineno, "r");
    if (rv != 0.0 && rv != 1.0)
      throw InputError("row " + std::to_string(lineno) + ": r must be 0 or 1");
    if (rv == 1.0) {
      respondent_total +=
          w * parse_double(row[static_cast<std::size_t>(y_c)], lineno, "y");
    } else {
      const std::string& cell = row[static_cast<std::size_t>(ys_c)];
      if (cell.empty())
        throw InputError("row " + std::to_string(lineno) +
                         ": y_star required when r = 0");
      ys.push_back(parse_double(cell, lineno, "y_star"));
      ws.push_back(w);
      qs.push_back(q_c < 0 ? 1.0
                           : parse_double(row[static_cast<std::size_t>(q_c)],
                                          lineno, "q"));
    }
  }

  CalibrationProblem p;
  const Eigen::Index m = static_cast<Eigen::Index>(ys.size());
  p.y_star = Eigen::Map<const Eigen::VectorXd>(ys.data(), m);
  p.w = Eigen::Map<const Eigen::VectorXd>(ws.data(), m);
  p.q = Eigen::Map<const Eigen::VectorXd>(qs.data(), m);
  p.respondent_total = respondent_total;
  p.target_total = target;
  DistanceSpec spec;
  spec.distance = distance_from_string(distance);
  spec.lo = bounds.first;
  spec.hi = bounds.second;
  const Eigen::VectorXd y_final = spec.distance == Distance::ChiSquare
                                      ? calibrate_chi_square(p)
                                      : calibrate_general(p, spec);

  CsvTable out = input;
  out.header.push_back("y_star_final");
  int t = 0;
  for (int i = 0; i < n; ++i) {
    auto& row = out.rows[static_cast<std::size_t>(i)];
    const double rv = parse_double(row[static_cast<std::size_t>(r_c)], i + 2, "r");
    if (rv == 1.0)
      row.push_back(row[static_cast<std::size_t>(y_c)]);
    else
      row.push_back(format_double(y_final[t++]));
  }
  if (out_path.empty())
    write_csv(std::cout, out);
  else
    write_csv_file(out_path, out);

  const double achieved = respondent_total + p.w.dot(y_final);
  std::fprintf(stderr, "calibrated %d imputed values; total %s (target %s)\n",
               static_cast<int>(m), format_double(achieved).c_str(),
               format_double(target).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "multiply robust imputation for survey item nonresponse: Monte Carlo "
      "scenarios, dataset imputation with conditional-bias diagnostics, "
      "synthetic data generation, and calibration of imputed values"};
  app.require_subcommand(1);

  // run
  std::string run_config, run_out, run_diag;
  bool run_quiet = false;
  int run_replicates = 0;
  std::optional<std::uint64_t> run_seed;
  CLI::App* run = app.add_subcommand("run", "run Monte Carlo scenarios from a JSON config");
  run->add_option("--config", run_config, "scenario config (JSON)")
      ->required();
  run->add_option("--out", run_out,
                  "results CSV (stdout when omitted); a JSON diagnostics "
                  "sidecar lands next to it");
  run->add_option("--diagnostics", run_diag, "explicit diagnostics JSON path");
  run->add_option("--replicates", run_replicates,
                  "override the replicate count of every scenario");
  run->add_option("--seed", run_seed, "override the seed of every scenario");
  run->add_flag("--quiet", run_quiet, "suppress per-scenario progress on stderr");

  // impute
  std::string imp_in, imp_out, imp_summary, imp_distance = "chi-square";
  std::vector<std::string> imp_nr, imp_imp;
  int imp_N = 0, imp_boot = 0, imp_threads = 1;
  std::uint64_t imp_boot_seed = 1;
  bool imp_cal = false, imp_phi_unit = false;
  std::pair<double, double> imp_bounds{0.5, 2.0};
  CLI::App* imp = app.add_subcommand(
      "impute", "multiply robust imputation on a CSV sample (columns: id, w, "
                "r, y, predictors)");
  imp->add_option("--in", imp_in, "input CSV")->required();
  imp->add_option("--out", imp_out, "output CSV (input + y_imputed, psi_hat, cond_bias)")
      ->required();
  imp->add_option("--nr-model", imp_nr,
                  "nonresponse model terms, e.g. '1,v1,v1^2' (repeatable)");
  imp->add_option("--imp-model", imp_imp,
                  "imputation model terms (repeatable; default: intercept + "
                  "every predictor)");
  imp->add_option("--N", imp_N, "population size (default: inferred from weights)");
  imp->add_option("--bootstrap", imp_boot,
                  "estimate conditional biases with this many bootstrap "
                  "replicates instead of linearization");
  imp->add_option("--bootstrap-seed", imp_boot_seed, "bootstrap seed (default 1)");
  imp->add_option("--threads", imp_threads, "bootstrap worker threads");
  imp->add_flag("--calibrate", imp_cal,
                "calibrate imputed values onto the bias-adjusted total");
  imp->add_option("--distance", imp_distance, "calibration distance: chi-square | logit");
  imp->add_option("--bounds", imp_bounds, "logit distance bounds: lo hi");
  imp->add_flag("--phi-unit", imp_phi_unit,
                "fit models with unit weights instead of design weights");
  imp->add_option("--summary", imp_summary, "write the summary block as JSON here");

  // gen
  std::string gen_spec, gen_out;
  int gen_sample = 0;
  bool gen_response_flag = false;
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic population CSV");
  gen->add_option("--spec", gen_spec, "population spec (JSON)")->required();
  gen->add_option("--out", gen_out, "output CSV (stdout when omitted)");
  gen->add_option("--sample", gen_sample,
                  "draw an equal-probability sample of this size and emit the "
                  "impute-ready layout instead of the full population");
  gen->add_flag("--response", gen_response_flag,
                "with --sample: draw nonresponse and blank the missing y");

  // calibrate
  std::string cal_in, cal_out, cal_distance = "chi-square";
  double cal_target = 0.0;
  std::pair<double, double> cal_bounds{0.5, 2.0};
  CLI::App* cal = app.add_subcommand(
      "calibrate", "calibrate imputed values in a CSV (columns: id, w, r, y, "
                   "y_star[, q]) to a target total");
  cal->add_option("--in", cal_in, "input CSV")->required();
  cal->add_option("--target", cal_target, "target value of the imputed total")
      ->required();
  cal->add_option("--distance", cal_distance, "chi-square | logit");
  cal->add_option("--bounds", cal_bounds, "logit distance bounds: lo hi");
  cal->add_option("--out", cal_out, "output CSV (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(run))
      return cmd_run(run_config, run_out, run_diag, run_quiet, run_replicates,
                     run_seed);
    if (app.got_subcommand(imp))
      return cmd_impute(imp_in, imp_out, imp_nr, imp_imp, imp_N, imp_boot,
                        imp_boot_seed, imp_threads, imp_cal, imp_distance,
                        imp_bounds, imp_phi_unit, imp_summary);
    if (app.got_subcommand(gen))
      return cmd_gen(gen_spec, gen_out, gen_sample, gen_response_flag);
    if (app.got_subcommand(cal))
      return cmd_calibrate(cal_in, cal_target, cal_distance, cal_bounds, cal_out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "mr-impute: config error: %s\n", e.what());
    return 2;
  } catch (const InputError& e) {
    std::fprintf(stderr, "mr-impute: input error: %s\n", e.what());
    return 2;
  } catch (const InvalidDesignError& e) {
    std::fprintf(stderr, "mr-impute: config error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "mr-impute: i/o error: %s\n", e.what());
    return 4;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "mr-impute: config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "mr-impute: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mr-impute: %s\n", e.what());
    return 3;
  }
  return 0;
}
