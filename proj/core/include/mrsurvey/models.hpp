#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mrsurvey/errors.hpp"

namespace mrsurvey {

// One term of a linear predictor: the intercept (col < 0) or v[col]^power.
struct Term {
  int col = -1;
  int power = 1;
};
using ModelTerms = std::vector<Term>;

// Parses tokens like "1", "v1", "v1^2" against a name -> column map.
ModelTerms parse_terms(const std::vector<std::string>& tokens,
                       const std::map<std::string, int>& columns);

// n x p design matrix from auxiliary columns (n x K) and a term list.
Eigen::MatrixXd design_matrix(const Eigen::MatrixXd& v, const ModelTerms& terms);

// Weight choice for the estimating equations: unit weights or design weights.
enum class Phi { Unit, DesignWeight };

struct FitOptions {
  double tol = 1e-10;   // on the score max-norm, relative to the score scale
  int max_iter = 50;
  double divergence_bound = 1e3;  // on the coefficient max-norm
};

struct LogisticFit {
  Eigen::VectorXd alpha;
  Eigen::VectorXd fitted;  // probability for every sample row
  int iterations = 0;
  double score_norm = 0.0;
};

// Weighted logistic regression of r on X by damped Newton-Raphson
// (step halving on the score norm, zero start, separation detection).
LogisticFit fit_nonresponse(const Eigen::MatrixXd& X,
                            const std::vector<std::uint8_t>& r,
                            const Eigen::VectorXd& phi,
                            const FitOptions& opts = {});

struct LinearFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd fitted;  // x_i' beta for every sample row
};

// Weighted least squares of y on X over respondents (r = 1), by normal
// equations with a rank check. y may be NaN on nonrespondent rows.
LinearFit fit_imputation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const std::vector<std::uint8_t>& r,
                         const Eigen::VectorXd& phi,
                         const std::string& label = "imputation model");

// Result of compressing several model predictions into one score.
struct CompressedScores {
  Eigen::VectorXd eta;    // regression coefficients of the target on U
  Eigen::VectorXd kappa;  // eta^2 / (eta'eta), convex weights summing to 1
  Eigen::VectorXd value;  // compressed score per sample row
  int clamped = 0;
  std::vector<std::uint8_t> clamp_mask;  // 1 where value was clamped
};

inline constexpr double kProbFloor = 0.005;
inline constexpr double kProbCeil = 0.995;

// Response-probability side: regress r on the J model probabilities over the
// whole sample, compress, clamp into [kProbFloor, kProbCeil].
CompressedScores compress_probabilities(const Eigen::MatrixXd& U,
                                        const std::vector<std::uint8_t>& r,
                                        const Eigen::VectorXd& w);

// Imputed-mean side: regress y on the L model predictions over respondents,
// compress. No clamping (means are unbounded).
CompressedScores compress_means(const Eigen::MatrixXd& U,
                                const Eigen::VectorXd& y,
                                const std::vector<std::uint8_t>& r,
                                const Eigen::VectorXd& w);

// Model suite specification: J nonresponse models, L >= 1 imputation models.
struct SuiteSpec {
  std::vector<ModelTerms> nonresponse;
  std::vector<ModelTerms> imputation;
  Phi phi = Phi::DesignWeight;
};

// Everything fitted on one sample: per-model fits and design matrices, the
// prediction matrices, and the compressed scores.
struct FittedModelSuite {
  std::vector<LogisticFit> nonresponse;
  std::vector<LinearFit> imputation;
  std::vector<Eigen::MatrixXd> Xp;  // design matrix per nonresponse model
  std::vector<Eigen::MatrixXd> Xm;  // design matrix per imputation model
  Eigen::MatrixXd Up;               // n x J fitted probabilities
  Eigen::MatrixXd Um;               // n x L fitted means
  CompressedScores p;               // empty when J = 0
  CompressedScores m;

  bool has_p() const { return !nonresponse.empty(); }
  int J() const { return static_cast<int>(nonresponse.size()); }
  int L() const { return static_cast<int>(imputation.size()); }
};

// Fits all models of the suite on one sample and compresses the scores.
FittedModelSuite fit_model_suite(const Eigen::MatrixXd& v,
                                 const Eigen::VectorXd& y,
                                 const std::vector<std::uint8_t>& r,
                                 const Eigen::VectorXd& w,
                                 const SuiteSpec& spec);

}  // namespace mrsurvey
