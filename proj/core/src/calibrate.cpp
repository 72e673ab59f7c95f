#include "mrsurvey/calibrate.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "mrsurvey/errors.hpp"

namespace mrsurvey {

namespace {

void validate(const CalibrationProblem& p) {
  const Eigen::Index m = p.y_star.size();
  if (p.w.size() != m || p.q.size() != m)
    throw IncompleteDataError("calibrate: y_star, w and q must align");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(p.y_star[i] > 0.0))
      throw DegenerateCalibrationError(
          "calibrate: imputed value at row " + std::to_string(i) +
          " is not strictly positive; the relative distances are undefined");
    if (!(p.w[i] > 0.0) || !(p.q[i] > 0.0))
      throw DegenerateCalibrationError("calibrate: weights and q must be positive");
  }
}

// True when there is nothing to adjust; throws when an adjustment is
// requested but no nonrespondents exist to carry it.
bool trivially_done(const CalibrationProblem& p, double current_total) {
  if (std::abs(p.target_total - current_total) <=
      1e-12 * (1.0 + std::abs(p.target_total)))
    return true;
  if (p.y_star.size() == 0)
    throw InfeasibleCalibrationError(
        "calibrate: no nonrespondent values to adjust but the target differs "
        "from the current total",
        current_total, current_total);
  return false;
}

}  // namespace

Eigen::VectorXd calibrate_chi_square(const CalibrationProblem& p) {
  validate(p);
  const double current = p.respondent_total + p.w.dot(p.y_star);
  if (trivially_done(p, current)) return p.y_star;
  const double denom =
      (p.w.array().square() * p.q.array() * p.y_star.array()).sum();
  if (!(denom > 0.0))
    throw DegenerateCalibrationError("calibrate_chi_square: zero denominator");
  const double lambda = (p.target_total - current) / denom;
  return (p.y_star.array() *
          (1.0 + lambda * p.q.array() * p.w.array()))
      .matrix();
}

Eigen::VectorXd calibrate_general(const CalibrationProblem& p,
                                  const DistanceSpec& spec) {
  validate(p);
  const double S = p.w.dot(p.y_star);
  const double current = p.respondent_total + S;
  if (trivially_done(p, current)) return p.y_star;
  const double target_nr = p.target_total - p.respondent_total;

  // F = inverse derivative of the distance; F(0) = 1, F' > 0.
  std::function<double(double)> F, Fp;
  if (spec.distance == Distance::ChiSquare) {
    F = [](double z) { return 1.0 + z; };
    Fp = [](double) { return 1.0; };
  } else {
    const double lo = spec.lo, hi = spec.hi;
    if (!(lo < 1.0 && 1.0 < hi))
      throw ConfigError("calibrate_general: logit bounds need lo < 1 < hi");
    const double a = hi - 1.0, b = 1.0 - lo;
    const double A = (hi - lo) / (a * b);
    F = [=](double z) {
      const double e = std::exp(A * z);
      return (lo * a + hi * b * e) / (a + b * e);
    };
    Fp = [=](double z) {
      const double e = std::exp(A * z);
      const double den = a + b * e;
      return A * a * b * (hi - lo) * e / (den * den);
    };
    // The attainable totals form the open interval (lo*S, hi*S).
    if (!(target_nr > lo * S && target_nr < hi * S))
      throw InfeasibleCalibrationError(
          "calibrate_general: target outside the attainable range of the "
          "logit-bounded distance",
          p.respondent_total + lo * S, p.respondent_total + hi * S);
  }

  const auto gap = [&](double lambda) {
    double t = 0.0;
    for (Eigen::Index i = 0; i < p.y_star.size(); ++i)
      t += p.w[i] * p.y_star[i] * F(lambda * p.q[i] * p.w[i]);
    return t - target_nr;
  };
  const auto dgap = [&](double lambda) {
    double t = 0.0;
    for (Eigen::Index i = 0; i < p.y_star.size(); ++i) {
      const double qw = p.q[i] * p.w[i];
      t += p.w[i] * p.y_star[i] * qw * Fp(lambda * qw);
    }
    return t;
  };

  const double tol = 1e-12 * (1.0 + std::abs(target_nr));
  // Bracket the root; gap is strictly increasing in lambda.
  double g0 = gap(0.0);
  double blo = 0.0, bhi = 0.0;
  std::vector<double> trace{std::abs(g0)};
  if (g0 > 0.0) {
    double step = 1.0;
    blo = -step;
    int tries = 0;
    while (gap(blo) > 0.0) {
      if (++tries > 400)
        throw NonConvergenceError("calibrate_general: failed to bracket the root",
                                  trace);
      step *= 2.0;
      blo = -step;
    }
    bhi = 0.0;
  } else {
    double step = 1.0;
    bhi = step;
    int tries = 0;
    while (gap(bhi) < 0.0) {
      if (++tries > 400)
        throw NonConvergenceError("calibrate_general: failed to bracket the root",
                                  trace);
      step *= 2.0;
      bhi = step;
    }
    blo = 0.0;
  }

  double x = 0.5 * (blo + bhi);
  double g = gap(x);
  for (int iter = 0; iter < 200 && std::abs(g) > tol; ++iter) {
    trace.push_back(std::abs(g));
    if (g > 0.0)
      bhi = x;
    else
      blo = x;
    const double slope = dgap(x);
    double next = slope > 0.0 ? x - g / slope : x;
    if (!(next > blo && next < bhi)) next = 0.5 * (blo + bhi);  // bisect
    x = next;
    g = gap(x);
  }
  if (std::abs(g) > tol)
    throw NonConvergenceError("calibrate_general: solver did not reach tolerance",
                              trace);

  Eigen::VectorXd out(p.y_star.size());
  for (Eigen::Index i = 0; i < p.y_star.size(); ++i)
    out[i] = p.y_star[i] * F(x * p.q[i] * p.w[i]);
  return out;
}

}  // namespace mrsurvey
