#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mrsurvey/design.hpp"

namespace mrsurvey {

enum class Family { Normal, Gamma, Lognormal, Pareto };

Family family_from_string(const std::string& name);
std::string family_name(Family f);

// Synthetic population: v1 ~ U(0,5), v2 ~ U(0,4), and y drawn from the
// chosen family with conditional mean beta0 + beta1 v1 + beta2 v1^2 and the
// family's fixed conditional variance (moment matching). v draws use their
// own substream, so populations with the same seed share v across families.
struct PopulationSpec {
  int N = 5000;
  Family family = Family::Normal;
  double beta0 = 10.0, beta1 = 10.0, beta2 = 10.0;
  std::optional<double> sigma2;  // family default when unset
  std::uint64_t seed = 1;

  double variance() const;  // sigma2 or the family default
};

double default_sigma2(Family f);

FinitePopulation gen_population(const PopulationSpec& spec);

// Logistic response probability in v1; the defaults give a response rate of
// about 0.70 when v1 ~ U(0,5).
struct ResponseMechanism {
  double a0 = 1.5, a1 = -1.5, a2 = 0.4;

  double prob(double v1) const;
};

// One Bernoulli response indicator per row of v1.
std::vector<std::uint8_t> gen_response(const std::vector<double>& v1,
                                       const ResponseMechanism& mech,
                                       std::mt19937_64& rng);

// Moment-matched family parameters, exposed for verification.
struct GammaParams {
  double shape, scale;
};
GammaParams gamma_match(double mu, double sigma2);

struct LognormalParams {
  double mu_log, sigma_log;
};
LognormalParams lognormal_match(double mu, double sigma2);

struct ParetoParams {
  double alpha, x_m;
};
ParetoParams pareto_match(double mu, double sigma2);

double pareto_draw(const ParetoParams& p, std::mt19937_64& rng);

}  // namespace mrsurvey
