#include "mrsurvey/cond_bias.hpp"

#include <cmath>
#include <string>

namespace mrsurvey {

namespace {

// Solves A = -G * E^{-1} for a row block G when E = -P with P symmetric
// positive definite, i.e. A' = P^{-1} G'.
Eigen::MatrixXd adjoint_solve(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Gt,
                              const std::string& label) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(P);
  qr.setThreshold(1e-12);
  if (qr.rank() < P.cols())
    throw SingularSystemError("linearized_psi: singular block (" + label + ")");
  return qr.solve(Gt);
}

// d kappa / d eta for kappa = eta^2 / (eta'eta); zero when there is a single
// model (the compression is then the identity).
Eigen::MatrixXd kappa_jacobian(const Eigen::VectorXd& eta,
                               const Eigen::VectorXd& kappa) {
  const double s = eta.squaredNorm();
  return (2.0 / s) *
         (Eigen::MatrixXd(eta.asDiagonal()) - kappa * eta.transpose());
}

}  // namespace

LinearizedPsi linearized_psi(const Eigen::VectorXd& y,
                             const std::vector<std::uint8_t>& r,
                             const Eigen::VectorXd& w,
                             const FittedModelSuite& suite,
                             const ImputationResult& imp) {
  const Eigen::Index n = y.size();
  if (static_cast<Eigen::Index>(r.size()) != n || w.size() != n ||
      suite.Um.rows() != n)
    throw IncompleteDataError("linearized_psi: inputs not aligned");
  const int J = suite.J(), L = suite.L();
  const bool has_p = suite.has_p();
  const Eigen::Vector2d tau = imp.tau;

  // Per-unit pieces. d is the final-regression residual (respondents only).
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd g(n);   // coefficient of h'tau in the total's k-term
  Eigen::VectorXd base(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double htau = tau[0] + tau[1] * suite.m.value[i];
    if (r[i]) {
      if (std::isnan(y[i]))
        throw IncompleteDataError("linearized_psi: respondent row " +
                                  std::to_string(i) + " has missing y");
      d[i] = y[i] - htau;
      const double invp = has_p ? 1.0 / suite.p.value[i] : 1.0;
      g[i] = 1.0 - invp;
      base[i] = htau + d[i] * invp;
    } else {
      g[i] = 1.0;
      base[i] = htau;
    }
  }

  // Compression Jacobians; derivative flow through clamped units is zero.
  const Eigen::MatrixXd Kp =
      has_p && J > 1 ? kappa_jacobian(suite.p.eta, suite.p.kappa)
                     : Eigen::MatrixXd::Zero(J, J);
  const Eigen::MatrixXd Km = L > 1 ? kappa_jacobian(suite.m.eta, suite.m.kappa)
                                   : Eigen::MatrixXd::Zero(L, L);

  // Adjoint pass, top layer first: the final regression coefficients.
  Eigen::Matrix2d P_tau = Eigen::Matrix2d::Zero();
  Eigen::RowVector2d T_tau = Eigen::RowVector2d::Zero();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d h(1.0, suite.m.value[i]);
    T_tau += w[i] * g[i] * h.transpose();
    if (r[i]) P_tau.noalias() += w[i] * imp.q[i] * h * h.transpose();
  }
  LinearizedPsi out;
  out.A_tau = adjoint_solve(P_tau, T_tau.transpose(), "final regression")
                  .transpose();

  // Response-probability compression layer.
  Eigen::RowVectorXd G_etap = Eigen::RowVectorXd::Zero(J);
  if (has_p) {
    Eigen::MatrixXd P_p = Eigen::MatrixXd::Zero(J, J);
    Eigen::RowVectorXd T_etap = Eigen::RowVectorXd::Zero(J);
    Eigen::MatrixXd E_tau_etap = Eigen::MatrixXd::Zero(2, J);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::RowVectorXd u = suite.Up.row(i);
      P_p.noalias() += w[i] * u.transpose() * u;
      if (!r[i]) continue;
      const bool clamped = suite.p.clamp_mask[static_cast<std::size_t>(i)] != 0;
      if (clamped || J == 1) continue;  // no derivative flow through p-hat
      const double phat = suite.p.value[i];
      const Eigen::RowVectorXd dp = u * Kp;  // d p-hat_i / d eta_p
      const double c = -w[i] * d[i] / (phat * phat);
      T_etap += c * dp;
      const Eigen::Vector2d h(1.0, suite.m.value[i]);
      E_tau_etap.noalias() += c * h * dp;
    }
    if (J > 1) {
      G_etap = T_etap + out.A_tau * E_tau_etap;
      out.A_p = adjoint_solve(P_p, G_etap.transpose(),
                              "response-score compression")
                    .transpose();
    } else {
      // Single model: p-hat does not depend on eta, so its coefficient is 0,
      // but the block must stay well defined.
      out.A_p = Eigen::RowVectorXd::Zero(J);
    }
  }

  // Mean compression layer.
  Eigen::MatrixXd P_m = Eigen::MatrixXd::Zero(L, L);
  Eigen::RowVectorXd T_etam = Eigen::RowVectorXd::Zero(L);
  Eigen::MatrixXd E_tau_etam = Eigen::MatrixXd::Zero(2, L);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!r[i]) continue;
    const Eigen::RowVectorXd u = suite.Um.row(i);
    P_m.noalias() += w[i] * u.transpose() * u;
    if (L == 1) continue;
    const Eigen::RowVectorXd dm = u * Km;  // d m-hat_i / d eta_m
    T_etam += w[i] * g[i] * tau[1] * dm;
    const Eigen::Vector2d h(1.0, suite.m.value[i]);
    const Eigen::Vector2d de2_t2h(-tau[1], d[i] - tau[1] * suite.m.value[i]);
    E_tau_etam.noalias() += w[i] * imp.q[i] * de2_t2h * dm;
  }
  // T_etam also collects nonrespondent terms (g = 1): redo that part.
  if (L > 1) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (r[i]) continue;
      const Eigen::RowVectorXd dm = suite.Um.row(i) * Km;
      T_etam += w[i] * g[i] * tau[1] * dm;
    }
    const Eigen::RowVectorXd G_etam = T_etam + out.A_tau * E_tau_etam;
    out.A_m = adjoint_solve(P_m, G_etam.transpose(), "mean-score compression")
                  .transpose();
  } else {
    out.A_m = Eigen::RowVectorXd::Zero(L);
  }

  // Nonresponse model layers.
  for (int j = 0; j < J; ++j) {
    const Eigen::MatrixXd& X = suite.Xp[static_cast<std::size_t>(j)];
    const Eigen::Index a = X.cols();
    const Eigen::VectorXd& pj = suite.nonresponse[static_cast<std::size_t>(j)].fitted;
    Eigen::MatrixXd P_a = Eigen::MatrixXd::Zero(a, a);
    Eigen::RowVectorXd T_a = Eigen::RowVectorXd::Zero(a);
    Eigen::MatrixXd E_tau_a = Eigen::MatrixXd::Zero(2, a);
    Eigen::MatrixXd E_p_a = Eigen::MatrixXd::Zero(J, a);
    const double kpj = suite.p.kappa[j];
    for (Eigen::Index i = 0; i < n; ++i) {
      const double pd = pj[i] * (1.0 - pj[i]);  // d p_j / d (x'alpha)
      const Eigen::RowVectorXd x = X.row(i);
      P_a.noalias() += w[i] * pd * x.transpose() * x;
      const Eigen::RowVectorXd dpj = pd * x;  // d p_j[i] / d alpha_j
      const Eigen::VectorXd u = suite.Up.row(i).transpose();
      const double resid = (r[i] ? 1.0 : 0.0) - u.dot(suite.p.eta);
      Eigen::VectorXd dUp = -suite.p.eta[j] * u;
      dUp[j] += resid;
      E_p_a.noalias() += w[i] * dUp * dpj;
      if (!r[i] || suite.p.clamp_mask[static_cast<std::size_t>(i)]) continue;
      const double phat = suite.p.value[i];
      const double c = -w[i] * d[i] / (phat * phat) * kpj;
      T_a += c * dpj;
      const Eigen::Vector2d h(1.0, suite.m.value[i]);
      E_tau_a.noalias() += c * h * dpj;
    }
    const Eigen::RowVectorXd G_a =
        T_a + out.A_tau * E_tau_a + out.A_p * E_p_a;
    out.A_alpha.push_back(
        adjoint_solve(P_a, G_a.transpose(),
                      "nonresponse model " + std::to_string(j + 1))
            .transpose());
  }

  // Imputation model layers.
  for (int l = 0; l < L; ++l) {
    const Eigen::MatrixXd& X = suite.Xm[static_cast<std::size_t>(l)];
    const Eigen::Index bdim = X.cols();
    Eigen::MatrixXd P_b = Eigen::MatrixXd::Zero(bdim, bdim);
    Eigen::RowVectorXd T_b = Eigen::RowVectorXd::Zero(bdim);
    Eigen::MatrixXd E_tau_b = Eigen::MatrixXd::Zero(2, bdim);
    Eigen::MatrixXd E_m_b = Eigen::MatrixXd::Zero(L, bdim);
    const double kml = suite.m.kappa[l];
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::RowVectorXd x = X.row(i);
      const Eigen::RowVectorXd dml = kml * x;  // d m-hat_i / d beta_l
      T_b += w[i] * g[i] * tau[1] * dml;
      if (!r[i]) continue;
      P_b.noalias() += w[i] * x.transpose() * x;
      const Eigen::VectorXd u = suite.Um.row(i).transpose();
      const double resid = y[i] - u.dot(suite.m.eta);
      Eigen::VectorXd dUm = -suite.m.eta[l] * u;
      dUm[l] += resid;
      E_m_b.noalias() += w[i] * dUm * x;
      const Eigen::Vector2d de2_t2h(-tau[1], d[i] - tau[1] * suite.m.value[i]);
      E_tau_b.noalias() += w[i] * imp.q[i] * de2_t2h * dml;
    }
    const Eigen::RowVectorXd G_b = T_b + out.A_tau * E_tau_b + out.A_m * E_m_b;
    out.A_beta.push_back(
        adjoint_solve(P_b, G_b.transpose(),
                      "imputation model " + std::to_string(l + 1))
            .transpose());
  }

  // Assemble psi: the explicit k-term plus coefficient-weighted innovations.
  out.psi = base;
  for (Eigen::Index i = 0; i < n; ++i) {
    double add = 0.0;
    if (r[i]) {
      const Eigen::Vector2d h(1.0, suite.m.value[i]);
      add += out.A_tau.dot(imp.q[i] * d[i] * h);
      const Eigen::VectorXd um = suite.Um.row(i).transpose();
      add += out.A_m.dot((y[i] - um.dot(suite.m.eta)) * um);
      for (int l = 0; l < L; ++l) {
        const double resid = y[i] - suite.Um(i, l);
        add += out.A_beta[static_cast<std::size_t>(l)].dot(
            resid * suite.Xm[static_cast<std::size_t>(l)].row(i));
      }
    }
    if (has_p) {
      const Eigen::VectorXd up = suite.Up.row(i).transpose();
      const double resid = (r[i] ? 1.0 : 0.0) - up.dot(suite.p.eta);
      add += out.A_p.dot(resid * up);
      for (int j = 0; j < J; ++j) {
        const double resid_j = (r[i] ? 1.0 : 0.0) - suite.Up(i, j);
        add += out.A_alpha[static_cast<std::size_t>(j)].dot(
            resid_j * suite.Xp[static_cast<std::size_t>(j)].row(i));
      }
    }
    out.psi[i] += add;
  }
  return out;
}

Eigen::VectorXd single_model_psi(const Eigen::VectorXd& y,
                                 const std::vector<std::uint8_t>& r,
                                 const Eigen::VectorXd& w,
                                 const Eigen::MatrixXd& V) {
  const Eigen::Index n = y.size(), p = V.cols();
  if (static_cast<Eigen::Index>(r.size()) != n || w.size() != n || V.rows() != n)
    throw IncompleteDataError("single_model_psi: inputs not aligned");

  Eigen::MatrixXd T_resp = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd b_resp = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd gap = Eigen::VectorXd::Zero(p);  // t_v - t_v,resp
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd v = V.row(i).transpose();
    gap.noalias() += w[i] * v;
    if (!r[i]) continue;
    if (std::isnan(y[i]))
      throw IncompleteDataError("single_model_psi: respondent row " +
                                std::to_string(i) + " has missing y");
    T_resp.noalias() += w[i] * v * v.transpose();
    b_resp.noalias() += w[i] * y[i] * v;
    gap.noalias() -= w[i] * v;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(T_resp);
  qr.setThreshold(1e-12);
  if (qr.rank() < p)
    throw SingularSystemError("single_model_psi: singular respondent Gram matrix");
  const Eigen::VectorXd beta = qr.solve(b_resp);
  const Eigen::VectorXd lever = qr.solve(gap);  // T_resp^{-1} (t_v - t_v,resp)

  Eigen::VectorXd psi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd v = V.row(i).transpose();
    const double fit = v.dot(beta);
    if (r[i]) {
      const double a = 1.0 + lever.dot(v);
      psi[i] = y[i] + (a - 1.0) * (y[i] - fit);
    } else {
      psi[i] = fit;
    }
  }
  return psi;
}

BiasRange est_cond_bias_mr(const Sample& s, const Eigen::VectorXd& psi) {
  if (psi.size() != static_cast<Eigen::Index>(s.members.size()))
    throw IncompleteDataError("est_cond_bias_mr: psi not aligned with sample");
  std::vector<double> vals(psi.data(), psi.data() + psi.size());
  return bias_range(s, vals);
}

RobustMrTotal robust_mr_total(double t_mr, const Sample& s,
                              const Eigen::VectorXd& psi) {
  RobustMrTotal out;
  out.base = t_mr;
  out.bias = est_cond_bias_mr(s, psi);
  out.estimate = t_mr - 0.5 * (out.bias.b_min + out.bias.b_max);
  return out;
}

}  // namespace mrsurvey
