#include "mrsurvey/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mrsurvey/parallel.hpp"
#include "mrsurvey/rng.hpp"

namespace mrsurvey {

PseudoPopulation build_pseudo_population(const SampleData& data,
                                         const Eigen::VectorXd& y_completed,
                                         std::mt19937_64& rng) {
  const int n = data.n();
  if (y_completed.size() != n)
    throw IncompleteDataError("build_pseudo_population: completed y not aligned");
  const int N = data.sample.design.population_size();
  // 1/pi = N/n for every unit; integer arithmetic keeps the fixed/random
  // split exact (no random part when n divides N).
  const int copies = N / n;
  const double frac = static_cast<double>(N % n) / n;

  PseudoPopulation pp;
  pp.source.reserve(static_cast<std::size_t>(copies) * n + n);
  for (int t = 0; t < n; ++t) {
    if (std::isnan(y_completed[t]))
      throw IncompleteDataError("build_pseudo_population: missing completed y at row " +
                                std::to_string(t));
    for (int c = 0; c < copies; ++c) pp.source.push_back(t);
  }
  pp.fixed_count = static_cast<int>(pp.source.size());
  if (frac > 0.0)
    for (int t = 0; t < n; ++t)
      if (bernoulli(rng, frac)) pp.source.push_back(t);

  for (const int src : pp.source) pp.t_star_y += y_completed[src];
  return pp;
}

BootstrapBias bootstrap_cond_bias(const SampleData& data, const SuiteSpec& spec,
                                  const BootstrapConfig& config) {
  if (config.replicates < 1)
    throw ConfigError("bootstrap_cond_bias: need at least one replicate");
  const int n = data.n();

  // Complete the original sample once: observed y where available, the
  // original fit's imputed values elsewhere.
  const FittedModelSuite suite0 =
      fit_model_suite(data.v, data.y, data.r, data.w, spec);
  const ImputationResult imp0 = mr_estimate(suite0, data.y, data.r, data.w);
  Eigen::VectorXd y_completed(n);
  for (int i = 0; i < n; ++i)
    y_completed[i] = data.r[static_cast<std::size_t>(i)] ? data.y[i] : imp0.y_star[i];

  struct Replicate {
    double diff = 0.0;
    std::vector<int> members;  // unique source rows in the bootstrap sample
    bool ok = false;
  };
  std::vector<Replicate> reps(static_cast<std::size_t>(config.replicates));

  parallel_for(config.replicates, config.threads, [&](int m) {
    Replicate& rep = reps[static_cast<std::size_t>(m)];
    std::mt19937_64 rng =
        substream(config.seed, {0xB5u, static_cast<std::uint64_t>(m)});
    const PseudoPopulation pp = build_pseudo_population(data, y_completed, rng);
    const int Nstar = pp.size();
    const std::vector<int> idx = srswor_indices(Nstar, n, rng);

    SampleData bd{Sample{SrsworDesign(Nstar, n), idx},
                  Eigen::MatrixXd(n, data.v.cols()), Eigen::VectorXd(n),
                  std::vector<std::uint8_t>(static_cast<std::size_t>(n)),
                  Eigen::VectorXd::Constant(n, static_cast<double>(Nstar) / n)};
    rep.members.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
      const int src = pp.source[static_cast<std::size_t>(idx[t])];
      rep.members.push_back(src);
      bd.v.row(t) = data.v.row(src);
      const std::uint8_t ri = data.r[static_cast<std::size_t>(src)];
      bd.r[static_cast<std::size_t>(t)] = ri;
      bd.y[t] = ri ? y_completed[src] : std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(rep.members.begin(), rep.members.end());
    rep.members.erase(std::unique(rep.members.begin(), rep.members.end()),
                      rep.members.end());
    try {
      const FittedModelSuite suite = fit_model_suite(bd.v, bd.y, bd.r, bd.w, spec);
      const ImputationResult imp = mr_estimate(suite, bd.y, bd.r, bd.w);
      rep.diff = imp.t_mr - pp.t_star_y;
      rep.ok = true;
    } catch (const Error&) {
      rep.ok = false;
    }
  });

  BootstrapBias out;
  out.b = Eigen::VectorXd::Zero(n);
  out.times_selected.assign(static_cast<std::size_t>(n), 0);
  out.missing.assign(static_cast<std::size_t>(n), 0);
  for (const Replicate& rep : reps) {
    if (!rep.ok) {
      ++out.dropped;
      continue;
    }
    ++out.completed;
    for (const int src : rep.members) {
      out.b[src] += rep.diff;
      ++out.times_selected[static_cast<std::size_t>(src)];
    }
  }
  if (out.completed == 0)
    throw NonConvergenceError("bootstrap_cond_bias: every replicate failed to fit",
                              {});

  bool first = true;
  for (int i = 0; i < n; ++i) {
    if (out.times_selected[static_cast<std::size_t>(i)] == 0) {
      out.missing[static_cast<std::size_t>(i)] = 1;
      out.b[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    out.b[i] /= out.times_selected[static_cast<std::size_t>(i)];
    const int id = data.sample.members[static_cast<std::size_t>(i)];
    if (first || out.b[i] < out.b_min) {
      out.b_min = out.b[i];
      out.argmin_id = id;
    }
    if (first || out.b[i] > out.b_max) {
      out.b_max = out.b[i];
      out.argmax_id = id;
    }
    first = false;
  }
  return out;
}

}  // namespace mrsurvey
