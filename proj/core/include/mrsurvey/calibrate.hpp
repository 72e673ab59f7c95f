#pragma once

#include <Eigen/Dense>

namespace mrsurvey {

// Calibration of imputed values: adjust the nonrespondents' imputed values
// y_star as little as possible (in a chosen distance) so that the full
// imputed total hits target_total. Respondent values are never touched.
struct CalibrationProblem {
  Eigen::VectorXd y_star;  // nonrespondent imputed values, all > 0
  Eigen::VectorXd w;       // design weights of those units
  Eigen::VectorXd q;       // per-unit scale factors (default all 1)
  double respondent_total = 0.0;  // sum of w*y over respondents
  double target_total = 0.0;      // desired value of the full imputed total
};

enum class Distance { ChiSquare, LogitBounded };

struct DistanceSpec {
  Distance distance = Distance::ChiSquare;
  // Bounds on y_final/y_star for the logit distance; need lo < 1 < hi.
  double lo = 0.5, hi = 2.0;
};

// Closed-form chi-square calibration:
//   y_final_i = y_star_i * (1 + lambda q_i w_i),
//   lambda = (target - current) / sum(w^2 q y_star).
Eigen::VectorXd calibrate_chi_square(const CalibrationProblem& p);

// General distance via the one-dimensional dual: finds lambda with
//   sum_i w_i y_star_i F(lambda q_i w_i) = target - respondent_total
// where F is the inverse derivative of the distance. Safeguarded Newton
// (bisection fallback), |constraint gap| <= 1e-12 relative.
Eigen::VectorXd calibrate_general(const CalibrationProblem& p,
                                  const DistanceSpec& spec);

}  // namespace mrsurvey
