#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "mrsurvey/estimator.hpp"

namespace mrsurvey {

// Pseudo-population built from a completed sample: every sample unit is
// repeated floor(1/pi) times (fixed part) and once more with probability
// 1/pi - floor(1/pi) (random completion, redrawn for every replicate).
struct PseudoPopulation {
  std::vector<int> source;  // sample row index of each pseudo-unit
  int fixed_count = 0;      // pseudo-units from the deterministic part
  double t_star_y = 0.0;    // total of completed y over the pseudo-population

  int size() const { return static_cast<int>(source.size()); }
};

// y_completed must hold a value for every sample row (observed y for
// respondents, imputed values for nonrespondents).
PseudoPopulation build_pseudo_population(const SampleData& data,
                                         const Eigen::VectorXd& y_completed,
                                         std::mt19937_64& rng);

struct BootstrapConfig {
  int replicates = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
};

// Bootstrap estimate of the per-unit conditional bias of the imputed total:
// for each original sample unit, the average of (replicate total - replicate
// pseudo-population total) over the replicates whose bootstrap sample
// contains at least one copy of the unit.
struct BootstrapBias {
  Eigen::VectorXd b;                    // NaN where never selected
  std::vector<int> times_selected;      // replicates containing each unit
  std::vector<std::uint8_t> missing;    // 1 where times_selected == 0
  int dropped = 0;                      // replicates lost to fit failures
  int completed = 0;

  double b_min = 0.0, b_max = 0.0;
  int argmin_id = -1, argmax_id = -1;   // population ids
};

BootstrapBias bootstrap_cond_bias(const SampleData& data, const SuiteSpec& spec,
                                  const BootstrapConfig& config);

}  // namespace mrsurvey
