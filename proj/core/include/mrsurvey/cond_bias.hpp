#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mrsurvey/design.hpp"
#include "mrsurvey/models.hpp"
#include "mrsurvey/mr_impute.hpp"

namespace mrsurvey {

// Per-unit linearization psi of the imputed total under unit reweighting,
// together with the coefficient rows applied to each estimating-equation
// block. sum_k w_k psi_k reproduces the imputed total at the estimates, and
// psi_k is the exact derivative of the total with respect to w_k.
struct LinearizedPsi {
  Eigen::VectorXd psi;
  Eigen::RowVector2d A_tau;
  Eigen::RowVectorXd A_p;                 // empty when no nonresponse model
  Eigen::RowVectorXd A_m;
  std::vector<Eigen::RowVectorXd> A_alpha;
  std::vector<Eigen::RowVectorXd> A_beta;
};

LinearizedPsi linearized_psi(const Eigen::VectorXd& y,
                             const std::vector<std::uint8_t>& r,
                             const Eigen::VectorXd& w,
                             const FittedModelSuite& suite,
                             const ImputationResult& imp);

// Shortcut linearization for plain regression imputation (no nonresponse
// model, one imputation model with design matrix V):
//   a_k   = 1 + (t_v - t_v,resp)' T_resp^{-1} v_k
//   psi_k = y_k + (r_k a_k - 1)(y_k - v_k' beta_resp)
// with beta_resp the w-weighted respondent regression of y on V.
Eigen::VectorXd single_model_psi(const Eigen::VectorXd& y,
                                 const std::vector<std::uint8_t>& r,
                                 const Eigen::VectorXd& w,
                                 const Eigen::MatrixXd& V);

// Estimated conditional bias of the imputed total for every sample member,
// using the linearization values in place of y.
BiasRange est_cond_bias_mr(const Sample& s, const Eigen::VectorXd& psi);

// Bias-adjusted imputed total: subtracts the midrange of the estimated
// conditional biases from t_mr.
struct RobustMrTotal {
  double estimate = 0.0;
  double base = 0.0;  // unadjusted imputed total
  BiasRange bias;
};

RobustMrTotal robust_mr_total(double t_mr, const Sample& s,
                              const Eigen::VectorXd& psi);

}  // namespace mrsurvey
