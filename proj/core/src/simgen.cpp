#include "mrsurvey/simgen.hpp"

#include <cmath>

#include "mrsurvey/errors.hpp"
#include "mrsurvey/rng.hpp"

namespace mrsurvey {

Family family_from_string(const std::string& name) {
  if (name == "normal") return Family::Normal;
  if (name == "gamma") return Family::Gamma;
  if (name == "lognormal") return Family::Lognormal;
  if (name == "pareto") return Family::Pareto;
  throw ConfigError("unknown distribution family '" + name + "'");
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Normal: return "normal";
    case Family::Gamma: return "gamma";
    case Family::Lognormal: return "lognormal";
    case Family::Pareto: return "pareto";
  }
  throw ConfigError("bad family enum value");
}

double default_sigma2(Family f) {
  switch (f) {
    case Family::Normal: return 500.0;
    case Family::Gamma: return 50.0;
    case Family::Lognormal: return 30.0;
    case Family::Pareto: return 20.0;
  }
  throw ConfigError("bad family enum value");
}

double PopulationSpec::variance() const {
  const double s2 = sigma2.value_or(default_sigma2(family));
  if (!(s2 > 0.0)) throw ConfigError("population spec: sigma2 must be positive");
  return s2;
}

GammaParams gamma_match(double mu, double sigma2) {
  if (!(mu > 0.0))
    throw ConfigError("gamma family requires a positive conditional mean, got " +
                      std::to_string(mu));
  return GammaParams{mu * mu / sigma2, sigma2 / mu};
}

LognormalParams lognormal_match(double mu, double sigma2) {
  if (!(mu > 0.0))
    throw ConfigError("lognormal family requires a positive conditional mean, got " +
                      std::to_string(mu));
  const double s2log = std::log1p(sigma2 / (mu * mu));
  return LognormalParams{std::log(mu) - 0.5 * s2log, std::sqrt(s2log)};
}

ParetoParams pareto_match(double mu, double sigma2) {
  if (!(mu > 0.0))
    throw ConfigError("pareto family requires a positive conditional mean, got " +
                      std::to_string(mu));
  const double alpha = 1.0 + std::sqrt(1.0 + mu * mu / sigma2);
  return ParetoParams{alpha, mu * (alpha - 1.0) / alpha};
}

double pareto_draw(const ParetoParams& p, std::mt19937_64& rng) {
  const double u = 1.0 - uniform01(rng);  // in (0, 1]
  return p.x_m * std::pow(u, -1.0 / p.alpha);
}

FinitePopulation gen_population(const PopulationSpec& spec) {
  if (spec.N < 1) throw ConfigError("population spec: N must be positive");
  const double s2 = spec.variance();

  // Separate substreams: the same seed yields the same auxiliary draws for
  // every family (common random numbers across distributions).
  std::mt19937_64 gv = substream(spec.seed, {0xAu});
  std::mt19937_64 gy = substream(spec.seed, {0x1u});

  FinitePopulation pop;
  pop.units.resize(static_cast<std::size_t>(spec.N));
  for (int i = 0; i < spec.N; ++i) {
    UnitRecord& u = pop.units[static_cast<std::size_t>(i)];
    u.id = i;
    const double v1 = 5.0 * uniform01(gv);
    const double v2 = 4.0 * uniform01(gv);
    u.v = {v1, v2};
    const double mu = spec.beta0 + spec.beta1 * v1 + spec.beta2 * v1 * v1;
    switch (spec.family) {
      case Family::Normal: {
        std::normal_distribution<double> d(mu, std::sqrt(s2));
        u.y = d(gy);
        break;
      }
      case Family::Gamma: {
        const GammaParams gp = gamma_match(mu, s2);
        std::gamma_distribution<double> d(gp.shape, gp.scale);
        u.y = d(gy);
        break;
      }
      case Family::Lognormal: {
        const LognormalParams lp = lognormal_match(mu, s2);
        std::lognormal_distribution<double> d(lp.mu_log, lp.sigma_log);
        u.y = d(gy);
        break;
      }
      case Family::Pareto: {
        u.y = pareto_draw(pareto_match(mu, s2), gy);
        break;
      }
    }
  }
  return pop;
}

double ResponseMechanism::prob(double v1) const {
  const double t = a0 + a1 * v1 + a2 * v1 * v1;
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

std::vector<std::uint8_t> gen_response(const std::vector<double>& v1,
                                       const ResponseMechanism& mech,
                                       std::mt19937_64& rng) {
  std::vector<std::uint8_t> r(v1.size());
  for (std::size_t i = 0; i < v1.size(); ++i)
    r[i] = bernoulli(rng, mech.prob(v1[i])) ? 1 : 0;
  return r;
}

}  // namespace mrsurvey
