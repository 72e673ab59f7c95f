#include "mrsurvey/mr_impute.hpp"

#include <cmath>
#include <string>

namespace mrsurvey {

Eigen::VectorXd regression_q(const FittedModelSuite& suite) {
  const Eigen::Index n = suite.Um.rows();
  if (!suite.has_p()) return Eigen::VectorXd::Ones(n);
  return suite.p.value.unaryExpr([](double p) { return (1.0 - p) / p; });
}

Eigen::Vector2d compute_tau(const FittedModelSuite& suite, const Eigen::VectorXd& y,
                            const std::vector<std::uint8_t>& r,
                            const Eigen::VectorXd& w) {
  const Eigen::Index n = suite.Um.rows();
  if (y.size() != n || static_cast<Eigen::Index>(r.size()) != n || w.size() != n)
    throw IncompleteDataError("compute_tau: inputs not aligned with the fitted suite");
  const Eigen::VectorXd q = regression_q(suite);
  Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!r[i]) continue;
    if (std::isnan(y[i]))
      throw IncompleteDataError("compute_tau: respondent row " + std::to_string(i) +
                                " has missing y");
    const Eigen::Vector2d h(1.0, suite.m.value[i]);
    const double wi = w[i] * q[i];
    A.noalias() += wi * h * h.transpose();
    b.noalias() += wi * y[i] * h;
  }
  Eigen::ColPivHouseholderQR<Eigen::Matrix2d> qr(A);
  qr.setThreshold(1e-12);
  if (qr.rank() < 2)
    throw SingularSystemError(
        "compute_tau: singular final regression (is the compressed mean constant "
        "across respondents?)");
  return qr.solve(b);
}

Eigen::VectorXd impute(const FittedModelSuite& suite, const Eigen::Vector2d& tau) {
  return tau[0] + tau[1] * suite.m.value.array();
}

double mr_total(const Eigen::VectorXd& y, const std::vector<std::uint8_t>& r,
                const Eigen::VectorXd& w, const Eigen::VectorXd& y_star) {
  const Eigen::Index n = y.size();
  if (static_cast<Eigen::Index>(r.size()) != n || w.size() != n || y_star.size() != n)
    throw IncompleteDataError("mr_total: inputs not aligned");
  double t = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (r[i]) {
      if (std::isnan(y[i]))
        throw IncompleteDataError("mr_total: respondent row " + std::to_string(i) +
                                  " has missing y");
      t += w[i] * y[i];
    } else {
      t += w[i] * y_star[i];
    }
  }
  return t;
}

ImputationResult mr_estimate(const FittedModelSuite& suite, const Eigen::VectorXd& y,
                             const std::vector<std::uint8_t>& r,
                             const Eigen::VectorXd& w) {
  ImputationResult out;
  out.tau = compute_tau(suite, y, r, w);
  out.q = regression_q(suite);
  out.y_star = impute(suite, out.tau);
  out.t_mr = mr_total(y, r, w, out.y_star);
  for (const auto ri : r) out.respondents += ri ? 1 : 0;
  return out;
}

}  // namespace mrsurvey
