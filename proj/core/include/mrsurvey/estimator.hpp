#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mrsurvey/cond_bias.hpp"
#include "mrsurvey/design.hpp"
#include "mrsurvey/models.hpp"
#include "mrsurvey/mr_impute.hpp"

namespace mrsurvey {

// Column view of one realized sample with its response pattern.
struct SampleData {
  Sample sample;               // members + design
  Eigen::MatrixXd v;           // n x K auxiliary columns
  Eigen::VectorXd y;           // NaN where missing
  std::vector<std::uint8_t> r;
  Eigen::VectorXd w;           // per-unit design weights

  int n() const { return static_cast<int>(r.size()); }
};

SampleData make_sample_data(const FinitePopulation& pop, const Sample& s,
                            const std::vector<std::uint8_t>& r);

// Full estimate on one sample: fitted suite, imputed total, linearization,
// conditional-bias range, bias-adjusted total.
struct SampleEstimate {
  FittedModelSuite suite;
  ImputationResult imp;
  LinearizedPsi lin;
  RobustMrTotal robust;

  double t_mr() const { return imp.t_mr; }
  double t_mr_star() const { return robust.estimate; }
};

// Runs models -> compression -> imputation (always) and the linearized
// conditional-bias adjustment (when with_bias_adjustment).
SampleEstimate estimate_sample(const SampleData& data, const SuiteSpec& spec,
                               bool with_bias_adjustment = true);

}  // namespace mrsurvey
