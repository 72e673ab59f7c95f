#include "mrsurvey/estimator.hpp"

#include <limits>
#include <string>

namespace mrsurvey {

SampleData make_sample_data(const FinitePopulation& pop, const Sample& s,
                            const std::vector<std::uint8_t>& r) {
  const int n = s.size();
  if (static_cast<int>(r.size()) != n)
    throw IncompleteDataError("make_sample_data: response vector not aligned");
  const int K = pop.units.empty() ? 0 : static_cast<int>(pop.units.front().v.size());

  SampleData d{s, Eigen::MatrixXd(n, K), Eigen::VectorXd(n), r,
               Eigen::VectorXd::Constant(n, s.weight())};
  for (int t = 0; t < n; ++t) {
    const UnitRecord& u = pop.units[static_cast<std::size_t>(s.members[t])];
    if (static_cast<int>(u.v.size()) != K)
      throw IncompleteDataError("make_sample_data: ragged auxiliary vectors");
    for (int c = 0; c < K; ++c) d.v(t, c) = u.v[static_cast<std::size_t>(c)];
    d.y[t] = r[t] ? u.y : std::numeric_limits<double>::quiet_NaN();
  }
  return d;
}

SampleEstimate estimate_sample(const SampleData& data, const SuiteSpec& spec,
                               bool with_bias_adjustment) {
  SampleEstimate est;
  est.suite = fit_model_suite(data.v, data.y, data.r, data.w, spec);
  est.imp = mr_estimate(est.suite, data.y, data.r, data.w);
  if (with_bias_adjustment) {
    est.lin = linearized_psi(data.y, data.r, data.w, est.suite, est.imp);
    est.robust = robust_mr_total(est.imp.t_mr, data.sample, est.lin.psi);
  } else {
    est.robust.base = est.imp.t_mr;
    est.robust.estimate = est.imp.t_mr;
  }
  return est;
}

}  // namespace mrsurvey
