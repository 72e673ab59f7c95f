#include "mrsurvey/models.hpp"

#include <cmath>
#include <limits>

namespace mrsurvey {

namespace {

double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// Solves G x = b with a pivoted rank check (relative pivot tolerance 1e-12).
Eigen::VectorXd solve_checked(const Eigen::MatrixXd& G, const Eigen::VectorXd& b,
                              const std::string& label) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(G);
  qr.setThreshold(1e-12);
  if (qr.rank() < G.cols())
    throw SingularSystemError(label + ": rank-deficient system (rank " +
                              std::to_string(qr.rank()) + " of " +
                              std::to_string(G.cols()) + ")");
  return qr.solve(b);
}

void check_rows(Eigen::Index n, std::size_t r_size, Eigen::Index phi_size,
                const char* who) {
  if (static_cast<Eigen::Index>(r_size) != n || phi_size != n)
    throw IncompleteDataError(std::string(who) + ": rows of X, r and phi must align");
}

}  // namespace

ModelTerms parse_terms(const std::vector<std::string>& tokens,
                       const std::map<std::string, int>& columns) {
  ModelTerms terms;
  for (const auto& tok : tokens) {
    if (tok == "1") {
      terms.push_back(Term{-1, 1});
      continue;
    }
    std::string name = tok;
    int power = 1;
    if (const auto caret = tok.find('^'); caret != std::string::npos) {
      name = tok.substr(0, caret);
      try {
        power = std::stoi(tok.substr(caret + 1));
      } catch (const std::exception&) {
        throw ConfigError("bad power in model term '" + tok + "'");
      }
      if (power < 1) throw ConfigError("model term '" + tok + "' needs power >= 1");
    }
    const auto it = columns.find(name);
    if (it == columns.end())
      throw ConfigError("unknown predictor '" + name + "' in model term '" + tok + "'");
    terms.push_back(Term{it->second, power});
  }
  if (terms.empty()) throw ConfigError("empty model term list");
  return terms;
}

Eigen::MatrixXd design_matrix(const Eigen::MatrixXd& v, const ModelTerms& terms) {
  if (terms.empty()) throw ConfigError("design_matrix: empty term list");
  Eigen::MatrixXd X(v.rows(), static_cast<Eigen::Index>(terms.size()));
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const Term& t = terms[j];
    if (t.col < 0) {
      X.col(static_cast<Eigen::Index>(j)).setOnes();
      continue;
    }
    if (t.col >= v.cols())
      throw ConfigError("model term references predictor column " +
                        std::to_string(t.col) + " but only " +
                        std::to_string(v.cols()) + " are available");
    Eigen::VectorXd c = v.col(t.col);
    for (int p = 1; p < t.power; ++p) c = c.cwiseProduct(v.col(t.col));
    X.col(static_cast<Eigen::Index>(j)) = c;
  }
  return X;
}

LogisticFit fit_nonresponse(const Eigen::MatrixXd& X,
                            const std::vector<std::uint8_t>& r,
                            const Eigen::VectorXd& phi,
                            const FitOptions& opts) {
  const Eigen::Index n = X.rows(), p = X.cols();
  check_rows(n, r.size(), phi.size(), "fit_nonresponse");
  bool any0 = false, any1 = false;
  Eigen::VectorXd rv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rv[i] = r[i] ? 1.0 : 0.0;
    (r[i] ? any1 : any0) = true;
  }
  if (!any0 || !any1)
    throw NonConvergenceError(
        "fit_nonresponse: separation (all response indicators equal)", {});

  // Score scale for the convergence test: 1 + || sum_i phi_i |x_i| ||_inf.
  const double scale =
      1.0 + (X.cwiseAbs().transpose() * phi).lpNorm<Eigen::Infinity>();
  const double tol = opts.tol * scale;

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd prob(n), score(p);
  const auto eval = [&](const Eigen::VectorXd& a, Eigen::VectorXd& pr,
                        Eigen::VectorXd& s) {
    pr = (X * a).unaryExpr([](double t) { return logistic(t); });
    s = X.transpose() * phi.cwiseProduct(rv - pr);
  };
  eval(alpha, prob, score);
  double snorm = score.lpNorm<Eigen::Infinity>();
  std::vector<double> trace{snorm};

  int iter = 0;
  while (snorm > tol) {
    if (iter++ >= opts.max_iter)
      throw NonConvergenceError("fit_nonresponse: no convergence in " +
                                    std::to_string(opts.max_iter) + " iterations",
                                trace);
    const Eigen::VectorXd h = phi.cwiseProduct(prob.cwiseProduct(
        (Eigen::VectorXd::Ones(n) - prob)));
    const Eigen::MatrixXd H = X.transpose() * h.asDiagonal() * X;
    const Eigen::VectorXd delta =
        solve_checked(H, score, "fit_nonresponse: Newton step");

    double step = 1.0;
    Eigen::VectorXd cand, prc(n), sc(p);
    double scnorm = 0.0;
    bool accepted = false;
    for (int halve = 0; halve < 40; ++halve) {
      cand = alpha + step * delta;
      eval(cand, prc, sc);
      scnorm = sc.lpNorm<Eigen::Infinity>();
      if (scnorm < snorm || scnorm <= tol) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted)
      throw NonConvergenceError(
          "fit_nonresponse: step halving found no descent direction", trace);
    alpha = cand;
    prob = prc;
    score = sc;
    snorm = scnorm;
    trace.push_back(snorm);
    if (alpha.lpNorm<Eigen::Infinity>() > opts.divergence_bound)
      throw NonConvergenceError(
          "fit_nonresponse: coefficients diverging (separation suspected)", trace);
  }

  LogisticFit fit;
  fit.alpha = std::move(alpha);
  fit.fitted = std::move(prob);
  fit.iterations = iter;
  fit.score_norm = snorm;
  return fit;
}

LinearFit fit_imputation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const std::vector<std::uint8_t>& r,
                         const Eigen::VectorXd& phi, const std::string& label) {
  const Eigen::Index n = X.rows(), p = X.cols();
  check_rows(n, r.size(), phi.size(), "fit_imputation");
  if (y.size() != n)
    throw IncompleteDataError("fit_imputation: y must align with X rows");

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
  Eigen::Index respondents = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!r[i]) continue;
    if (std::isnan(y[i]))
      throw IncompleteDataError(label + ": respondent row " + std::to_string(i) +
                                " has missing y");
    ++respondents;
    G.noalias() += phi[i] * X.row(i).transpose() * X.row(i);
    b.noalias() += phi[i] * y[i] * X.row(i).transpose();
  }
  if (respondents < p)
    throw SingularSystemError(label + ": fewer respondents (" +
                              std::to_string(respondents) + ") than parameters (" +
                              std::to_string(p) + ")");
  LinearFit fit;
  fit.beta = solve_checked(G, b, label);
  fit.fitted = X * fit.beta;
  return fit;
}

namespace {

CompressedScores compress_impl(const Eigen::MatrixXd& U,
                               const Eigen::VectorXd& target,
                               const Eigen::VectorXd& mask,
                               const Eigen::VectorXd& w, const std::string& label) {
  const Eigen::Index n = U.rows(), k = U.cols();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (mask[i] == 0.0) continue;
    const double wi = w[i] * mask[i];
    G.noalias() += wi * U.row(i).transpose() * U.row(i);
    b.noalias() += wi * target[i] * U.row(i).transpose();
  }
  CompressedScores cs;
  cs.eta = solve_checked(G, b, label);
  const double s2 = cs.eta.squaredNorm();
  if (!(s2 > 0.0))
    throw DegenerateCompressionError(label + ": all compression coefficients are zero");
  cs.kappa = cs.eta.array().square() / s2;
  cs.value = U * cs.kappa;
  cs.clamp_mask.assign(static_cast<std::size_t>(n), 0);
  return cs;
}

}  // namespace

CompressedScores compress_probabilities(const Eigen::MatrixXd& U,
                                        const std::vector<std::uint8_t>& r,
                                        const Eigen::VectorXd& w) {
  const Eigen::Index n = U.rows();
  check_rows(n, r.size(), w.size(), "compress_probabilities");
  Eigen::VectorXd rv(n);
  for (Eigen::Index i = 0; i < n; ++i) rv[i] = r[i] ? 1.0 : 0.0;
  CompressedScores cs = compress_impl(U, rv, Eigen::VectorXd::Ones(n), w,
                                      "response-score compression");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (cs.value[i] < kProbFloor) {
      cs.value[i] = kProbFloor;
      cs.clamp_mask[static_cast<std::size_t>(i)] = 1;
      ++cs.clamped;
    } else if (cs.value[i] > kProbCeil) {
      cs.value[i] = kProbCeil;
      cs.clamp_mask[static_cast<std::size_t>(i)] = 1;
      ++cs.clamped;
    }
  }
  return cs;
}

CompressedScores compress_means(const Eigen::MatrixXd& U, const Eigen::VectorXd& y,
                                const std::vector<std::uint8_t>& r,
                                const Eigen::VectorXd& w) {
  const Eigen::Index n = U.rows();
  check_rows(n, r.size(), w.size(), "compress_means");
  Eigen::VectorXd mask(n), target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mask[i] = r[i] ? 1.0 : 0.0;
    if (r[i] && std::isnan(y[i]))
      throw IncompleteDataError("compress_means: respondent row " +
                                std::to_string(i) + " has missing y");
    target[i] = r[i] ? y[i] : 0.0;
  }
  return compress_impl(U, target, mask, w, "mean-score compression");
}

FittedModelSuite fit_model_suite(const Eigen::MatrixXd& v, const Eigen::VectorXd& y,
                                 const std::vector<std::uint8_t>& r,
                                 const Eigen::VectorXd& w, const SuiteSpec& spec) {
  if (spec.imputation.empty())
    throw ConfigError("model suite needs at least one imputation model");
  const Eigen::Index n = v.rows();
  const Eigen::VectorXd phi =
      spec.phi == Phi::DesignWeight ? w : Eigen::VectorXd::Ones(n);

  FittedModelSuite suite;
  const int J = static_cast<int>(spec.nonresponse.size());
  const int L = static_cast<int>(spec.imputation.size());
  suite.Up.resize(n, J);
  suite.Um.resize(n, L);

  for (int j = 0; j < J; ++j) {
    suite.Xp.push_back(design_matrix(v, spec.nonresponse[j]));
    suite.nonresponse.push_back(fit_nonresponse(suite.Xp.back(), r, phi));
    suite.Up.col(j) = suite.nonresponse.back().fitted;
  }
  for (int l = 0; l < L; ++l) {
    suite.Xm.push_back(design_matrix(v, spec.imputation[l]));
    suite.imputation.push_back(
        fit_imputation(suite.Xm.back(), y, r, phi,
                       "imputation model " + std::to_string(l + 1)));
    suite.Um.col(l) = suite.imputation.back().fitted;
  }

  if (J > 0) suite.p = compress_probabilities(suite.Up, r, w);
  suite.m = compress_means(suite.Um, y, r, w);
  return suite;
}

}  // namespace mrsurvey
