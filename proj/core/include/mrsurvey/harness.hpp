#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrsurvey/bootstrap.hpp"
#include "mrsurvey/calibrate.hpp"
#include "mrsurvey/csv.hpp"
#include "mrsurvey/estimator.hpp"
#include "mrsurvey/simgen.hpp"

namespace mrsurvey {

// Cascade summation: deterministic regardless of thread scheduling, with
// O(log n) rounding-error growth.
double pairwise_sum(const std::vector<double>& x);

// Monte Carlo percent relative bias and mean squared error of an estimator
// against per-replicate true totals.
struct Metrics {
  double rb = 0.0;
  double mse = 0.0;
};

Metrics metrics(const std::vector<double>& estimates,
                const std::vector<double>& truths);

enum class BiasMethod { Taylor, Bootstrap };

// One Monte Carlo scenario: population model, sample size, model suite,
// replication controls.
struct ScenarioConfig {
  std::string name;
  PopulationSpec population;  // seed field ignored; the scenario seed drives
  int n = 50;
  int replicates = 2000;
  std::uint64_t seed = 20260815;
  SuiteSpec suite;  // terms reference auxiliary columns: v1 = 0, v2 = 1
  ResponseMechanism response;
  bool full_response = false;
  BiasMethod bias_method = BiasMethod::Taylor;
  int bootstrap_replicates = 1000;
  bool calibrate = false;
  DistanceSpec distance;
  bool freeze_population = false;
  int threads = 1;
  bool keep_replicates = false;
  // Bookkeeping labels only (e.g. "correct"/"misspecified" per model).
  std::vector<std::string> nonresponse_tags, imputation_tags;
};

struct RunResult {
  std::string name;
  int replicates = 0, completed = 0, dropped = 0;
  Metrics mr, mr_star;
  double re = 0.0;  // 100 * mse(adjusted) / mse(unadjusted)
  long clamped = 0;
  double max_calibration_gap = 0.0;
  std::string first_error;
  double wall_seconds = 0.0;
  // Per-replicate values (NaN on dropped replicates); kept on request.
  std::vector<double> t_mr, t_mr_star, t_y;
};

RunResult run_scenario(const ScenarioConfig& config);

// ---- CSV dataset mode -----------------------------------------------------

struct DatasetOptions {
  // Term lists like {"1","v1","v1^2"} against the input's predictor columns;
  // when no imputation model is given, intercept + every predictor is used.
  std::vector<std::vector<std::string>> nonresponse_models;
  std::vector<std::vector<std::string>> imputation_models;
  Phi phi = Phi::DesignWeight;
  std::optional<int> population_size;  // inferred from weights when unset
  BiasMethod bias_method = BiasMethod::Taylor;
  BootstrapConfig bootstrap;
  bool calibrate = false;
  DistanceSpec distance;
};

struct DatasetSummary {
  int n = 0, N = 0, respondents = 0;
  double t_mr = 0.0, t_mr_star = 0.0;
  double b_min = 0.0, b_max = 0.0;
  std::string argmin_id, argmax_id;
  int clamped = 0;
  int bootstrap_dropped = 0;
  bool calibrated = false;
  double calibrated_total = 0.0;
};

// Output table = input columns + y_imputed, psi_hat, cond_bias
// (+ y_final when calibrating).
struct DatasetResult {
  CsvTable table;
  DatasetSummary summary;
};

// Input columns: id, w, r, y, then predictor columns. r in {0,1}; y must be
// blank exactly when r = 0; weights must be constant (SRSWOR).
DatasetResult impute_dataset(const CsvTable& input, const DatasetOptions& opts);

}  // namespace mrsurvey
