#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mrsurvey/models.hpp"

namespace mrsurvey {

// Per-unit regression weights q_i for the final calibration regression:
// (1 - p_i)/p_i when a compressed response probability exists, else 1.
Eigen::VectorXd regression_q(const FittedModelSuite& suite);

// Coefficients of the final weighted regression of y on h = (1, m_hat) over
// respondents, with weights w_i q_i.
Eigen::Vector2d compute_tau(const FittedModelSuite& suite, const Eigen::VectorXd& y,
                            const std::vector<std::uint8_t>& r,
                            const Eigen::VectorXd& w);

// Imputed value h_i' tau for every sample row.
Eigen::VectorXd impute(const FittedModelSuite& suite, const Eigen::Vector2d& tau);

// Total of observed values over respondents plus imputed values over
// nonrespondents, all weighted by w.
double mr_total(const Eigen::VectorXd& y, const std::vector<std::uint8_t>& r,
                const Eigen::VectorXd& w, const Eigen::VectorXd& y_star);

struct ImputationResult {
  Eigen::Vector2d tau;
  Eigen::VectorXd q;       // per-unit regression weights
  Eigen::VectorXd y_star;  // imputed value for every row
  double t_mr = 0.0;
  int respondents = 0;
};

ImputationResult mr_estimate(const FittedModelSuite& suite, const Eigen::VectorXd& y,
                             const std::vector<std::uint8_t>& r,
                             const Eigen::VectorXd& w);

}  // namespace mrsurvey
