#include "mrsurvey/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "mrsurvey/parallel.hpp"
#include "mrsurvey/rng.hpp"

namespace mrsurvey {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double pairwise_sum(const std::vector<double>& x) {
  struct Rec {
    static double sum(const double* p, std::size_t n) {
      if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += p[i];
        return s;
      }
      const std::size_t half = n / 2;
      return sum(p, half) + sum(p + half, n - half);
    }
  };
  return Rec::sum(x.data(), x.size());
}

Metrics metrics(const std::vector<double>& estimates,
                const std::vector<double>& truths) {
  if (estimates.size() != truths.size())
    throw MetricError("metrics: estimates and truths must align");
  if (estimates.empty()) throw MetricError("metrics: no replicates");
  std::vector<double> rel(estimates.size()), sq(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (truths[i] == 0.0)
      throw MetricError("metrics: zero true total at replicate " +
                        std::to_string(i));
    const double err = estimates[i] - truths[i];
    rel[i] = err / truths[i];
    sq[i] = err * err;
  }
  Metrics m;
  const double k = static_cast<double>(estimates.size());
  m.rb = 100.0 * pairwise_sum(rel) / k;
  m.mse = pairwise_sum(sq) / k;
  return m;
}

namespace {

// Calibrates the imputed values to hit the bias-adjusted total; returns the
// achieved total's gap. Used both per replicate and in dataset mode.
double run_calibration(const SampleData& data, const ImputationResult& imp,
                       double target, const DistanceSpec& distance,
                       Eigen::VectorXd* y_final_out = nullptr) {
  CalibrationProblem prob;
  const int n = data.n();
  int m = 0;
  for (int i = 0; i < n; ++i) m += data.r[static_cast<std::size_t>(i)] ? 0 : 1;
  prob.y_star.resize(m);
  prob.w.resize(m);
  prob.q = Eigen::VectorXd::Ones(m);
  prob.respondent_total = 0.0;
  int t = 0;
  for (int i = 0; i < n; ++i) {
    if (data.r[static_cast<std::size_t>(i)]) {
      prob.respondent_total += data.w[i] * data.y[i];
    } else {
      prob.y_star[t] = imp.y_star[i];
      prob.w[t] = data.w[i];
      ++t;
    }
  }
  prob.target_total = target;
  const Eigen::VectorXd y_final = distance.distance == Distance::ChiSquare
                                      ? calibrate_chi_square(prob)
                                      : calibrate_general(prob, distance);
  const double achieved = prob.respondent_total + prob.w.dot(y_final);
  if (y_final_out) *y_final_out = y_final;
  return std::abs(achieved - target);
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config) {
  if (config.replicates < 1)
    throw ConfigError("run_scenario: replicates must be >= 1");
  if (config.n < 1 || config.n > config.population.N)
    throw ConfigError("run_scenario: need 1 <= n <= N");
  if (config.suite.imputation.empty())
    throw ConfigError("run_scenario: the model suite needs an imputation model");
  if (config.bias_method == BiasMethod::Bootstrap && config.bootstrap_replicates < 1)
    throw ConfigError("run_scenario: bootstrap needs replicates >= 1");
  config.population.variance();  // validates sigma2 early

  const auto t0 = std::chrono::steady_clock::now();
  const int R = config.replicates;

  std::optional<FinitePopulation> frozen;
  if (config.freeze_population) {
    PopulationSpec ps = config.population;
    ps.seed = mix_seed(config.seed, {0u, 1u});
    frozen = gen_population(ps);
  }

  std::vector<double> t_mr(static_cast<std::size_t>(R), kNaN);
  std::vector<double> t_star(static_cast<std::size_t>(R), kNaN);
  std::vector<double> t_y(static_cast<std::size_t>(R), kNaN);
  std::vector<long> clamped(static_cast<std::size_t>(R), 0);
  std::vector<double> calib_gap(static_cast<std::size_t>(R), 0.0);
  std::vector<std::string> errors(static_cast<std::size_t>(R));

  parallel_for(R, config.threads, [&](int rep) {
    const std::size_t s = static_cast<std::size_t>(rep);
    const std::uint64_t u = static_cast<std::uint64_t>(rep);
    FinitePopulation local;
    const FinitePopulation* pop = nullptr;
    if (frozen) {
      pop = &*frozen;
    } else {
      PopulationSpec ps = config.population;
      ps.seed = mix_seed(config.seed, {u, 1u});
      local = gen_population(ps);
      pop = &local;
    }
    try {
      t_y[s] = pop->total_y();
      std::mt19937_64 gs = substream(config.seed, {u, 2u});
      const Sample sample = draw_srswor(*pop, config.n, gs);
      std::vector<std::uint8_t> r;
      if (config.full_response) {
        r.assign(static_cast<std::size_t>(config.n), 1);
      } else {
        std::vector<double> v1(static_cast<std::size_t>(config.n));
        for (int t = 0; t < config.n; ++t)
          v1[static_cast<std::size_t>(t)] =
              pop->units[static_cast<std::size_t>(sample.members[t])].v[0];
        std::mt19937_64 gr = substream(config.seed, {u, 3u});
        r = gen_response(v1, config.response, gr);
      }
      const SampleData data = make_sample_data(*pop, sample, r);

      const bool taylor = config.bias_method == BiasMethod::Taylor;
      const SampleEstimate est = estimate_sample(data, config.suite, taylor);
      t_mr[s] = est.t_mr();
      if (est.suite.has_p()) clamped[s] = est.suite.p.clamped;
      if (taylor) {
        t_star[s] = est.t_mr_star();
      } else {
        BootstrapConfig bc;
        bc.replicates = config.bootstrap_replicates;
        bc.seed = mix_seed(config.seed, {u, 4u});
        bc.threads = 1;
        const BootstrapBias bb = bootstrap_cond_bias(data, config.suite, bc);
        t_star[s] = est.t_mr() - 0.5 * (bb.b_min + bb.b_max);
      }
      if (config.calibrate)
        calib_gap[s] = run_calibration(data, est.imp, t_star[s], config.distance);
    } catch (const Error& e) {
      t_mr[s] = kNaN;
      t_star[s] = kNaN;
      errors[s] = e.what();
    }
  });

  RunResult out;
  out.name = config.name;
  out.replicates = R;
  std::vector<double> ok_mr, ok_star, ok_ty;
  ok_mr.reserve(static_cast<std::size_t>(R));
  ok_star.reserve(static_cast<std::size_t>(R));
  ok_ty.reserve(static_cast<std::size_t>(R));
  for (int rep = 0; rep < R; ++rep) {
    const std::size_t s = static_cast<std::size_t>(rep);
    if (std::isnan(t_mr[s]) || std::isnan(t_star[s])) {
      ++out.dropped;
      if (out.first_error.empty() && !errors[s].empty())
        out.first_error = errors[s];
      continue;
    }
    ++out.completed;
    ok_mr.push_back(t_mr[s]);
    ok_star.push_back(t_star[s]);
    ok_ty.push_back(t_y[s]);
    out.clamped += clamped[s];
    if (calib_gap[s] > out.max_calibration_gap)
      out.max_calibration_gap = calib_gap[s];
  }
  if (out.completed == 0)
    throw NonConvergenceError("run_scenario: every replicate failed; first error: " +
                                  out.first_error,
                              {});
  out.mr = metrics(ok_mr, ok_ty);
  out.mr_star = metrics(ok_star, ok_ty);
  out.re = out.mr.mse > 0.0 ? 100.0 * out.mr_star.mse / out.mr.mse : kNaN;
  if (config.keep_replicates) {
    out.t_mr = std::move(t_mr);
    out.t_mr_star = std::move(t_star);
    out.t_y = std::move(t_y);
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// ---- CSV dataset mode -------------------------------------------------------

DatasetResult impute_dataset(const CsvTable& input, const DatasetOptions& opts) {
  const int id_c = input.column("id"), w_c = input.column("w"),
            r_c = input.column("r"), y_c = input.column("y");
  for (const auto& [c, name] :
       {std::pair{id_c, "id"}, {w_c, "w"}, {r_c, "r"}, {y_c, "y"}})
    if (c < 0) throw InputError(std::string("missing required column '") + name + "'");

  std::vector<int> pred_cols;
  std::vector<std::string> pred_names;
  for (std::size_t c = 0; c < input.header.size(); ++c) {
    const int ci = static_cast<int>(c);
    if (ci == id_c || ci == w_c || ci == r_c || ci == y_c) continue;
    pred_cols.push_back(ci);
    pred_names.push_back(input.header[c]);
  }
  if (pred_cols.empty()) throw InputError("no predictor columns after id,w,r,y");

  const int n = static_cast<int>(input.rows.size());
  if (n < 1) throw InputError("no data rows");

  Eigen::MatrixXd v(n, static_cast<Eigen::Index>(pred_cols.size()));
  Eigen::VectorXd y(n), w(n);
  std::vector<std::uint8_t> r(static_cast<std::size_t>(n));
  std::vector<std::string> ids(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& row = input.rows[static_cast<std::size_t>(i)];
    const int lineno = i + 2;  // header is line 1
    ids[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(id_c)];
    w[i] = parse_double(row[static_cast<std::size_t>(w_c)], lineno, "w");
    const double rv = parse_double(row[static_cast<std::size_t>(r_c)], lineno, "r");
    if (rv != 0.0 && rv != 1.0)
      throw InputError("row " + std::to_string(lineno) + ": r must be 0 or 1");
    r[static_cast<std::size_t>(i)] = rv == 1.0 ? 1 : 0;
    const std::string& ycell = row[static_cast<std::size_t>(y_c)];
    if (r[static_cast<std::size_t>(i)]) {
      y[i] = parse_double(ycell, lineno, "y");
    } else if (!ycell.empty()) {
      throw InputError("row " + std::to_string(lineno) +
                       ": y must be blank when r = 0");
    } else {
      y[i] = kNaN;
    }
    for (std::size_t k = 0; k < pred_cols.size(); ++k)
      v(i, static_cast<Eigen::Index>(k)) = parse_double(
          row[static_cast<std::size_t>(pred_cols[k])], lineno, pred_names[k]);
    if (w[i] != w[0])
      throw InputError("row " + std::to_string(lineno) +
                       ": non-constant weights; this tool handles fixed-size "
                       "equal-probability samples only");
  }

  int N;
  if (opts.population_size) {
    N = *opts.population_size;
    if (N < n) throw InputError("population size smaller than the sample");
    if (std::abs(w[0] - static_cast<double>(N) / n) > 1e-9 * (1.0 + std::abs(w[0])))
      throw InputError("weights disagree with the stated population size");
  } else {
    const double Nf = w[0] * n;
    N = static_cast<int>(std::llround(Nf));
    if (N < n || std::abs(Nf - N) > 1e-6 * std::max(1.0, Nf))
      throw InputError("weights do not define an integer population size; pass "
                       "the population size explicitly");
  }
  std::vector<int> members(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) members[static_cast<std::size_t>(i)] = i;
  const SampleData data{Sample{SrsworDesign(N, n), members}, std::move(v),
                        std::move(y), std::move(r), std::move(w)};

  std::map<std::string, int> columns;
  for (std::size_t k = 0; k < pred_names.size(); ++k)
    columns[pred_names[k]] = static_cast<int>(k);
  SuiteSpec spec;
  spec.phi = opts.phi;
  for (const auto& toks : opts.nonresponse_models)
    spec.nonresponse.push_back(parse_terms(toks, columns));
  if (opts.imputation_models.empty()) {
    ModelTerms all{Term{-1, 1}};
    for (std::size_t k = 0; k < pred_names.size(); ++k)
      all.push_back(Term{static_cast<int>(k), 1});
    spec.imputation.push_back(all);
  } else {
    for (const auto& toks : opts.imputation_models)
      spec.imputation.push_back(parse_terms(toks, columns));
  }

  const SampleEstimate est = estimate_sample(data, spec, true);

  DatasetResult out;
  DatasetSummary& sum = out.summary;
  sum.n = n;
  sum.N = N;
  sum.respondents = est.imp.respondents;
  sum.t_mr = est.t_mr();
  sum.clamped = est.suite.has_p() ? est.suite.p.clamped : 0;

  double b_min = est.robust.bias.b_min, b_max = est.robust.bias.b_max;
  Eigen::VectorXd bvals(n);
  for (int i = 0; i < n; ++i) bvals[i] = est.robust.bias.b[static_cast<std::size_t>(i)];
  double t_star = est.t_mr_star();

  if (opts.bias_method == BiasMethod::Bootstrap) {
    BootstrapConfig bc = opts.bootstrap;
    const BootstrapBias bb = bootstrap_cond_bias(data, spec, bc);
    bvals = bb.b;
    b_min = bb.b_min;
    b_max = bb.b_max;
    t_star = est.t_mr() - 0.5 * (b_min + b_max);
    sum.bootstrap_dropped = bb.dropped;
  }
  int argmin_pos = -1, argmax_pos = -1;
  for (int i = 0; i < n; ++i) {
    if (std::isnan(bvals[i])) continue;
    if (argmin_pos < 0 && bvals[i] == b_min) argmin_pos = i;
    if (argmax_pos < 0 && bvals[i] == b_max) argmax_pos = i;
  }
  if (argmin_pos < 0) argmin_pos = 0;
  if (argmax_pos < 0) argmax_pos = 0;
  sum.t_mr_star = t_star;
  sum.b_min = b_min;
  sum.b_max = b_max;
  sum.argmin_id = ids[static_cast<std::size_t>(argmin_pos)];
  sum.argmax_id = ids[static_cast<std::size_t>(argmax_pos)];

  Eigen::VectorXd y_final;
  if (opts.calibrate) {
    sum.calibrated = true;
    run_calibration(data, est.imp, t_star, opts.distance, &y_final);
    sum.calibrated_total = t_star;
  }

  out.table.header = input.header;
  out.table.header.push_back("y_imputed");
  out.table.header.push_back("psi_hat");
  out.table.header.push_back("cond_bias");
  if (opts.calibrate) out.table.header.push_back("y_final");
  out.table.rows = input.rows;
  int t = 0;
  for (int i = 0; i < n; ++i) {
    auto& row = out.table.rows[static_cast<std::size_t>(i)];
    const bool resp = data.r[static_cast<std::size_t>(i)] != 0;
    row.push_back(format_double(resp ? data.y[i] : est.imp.y_star[i]));
    row.push_back(format_double(est.lin.psi[i]));
    row.push_back(std::isnan(bvals[i]) ? std::string() : format_double(bvals[i]));
    if (opts.calibrate)
      row.push_back(resp ? format_double(data.y[i])
                         : format_double(y_final[t]));
    if (!resp) ++t;
  }
  return out;
}

}  // namespace mrsurvey
