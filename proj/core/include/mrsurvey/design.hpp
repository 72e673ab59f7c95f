#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "mrsurvey/errors.hpp"

namespace mrsurvey {

// One population unit: auxiliary vector v and outcome y (NaN when missing).
struct UnitRecord {
  int id = -1;
  std::vector<double> v;
  double y = std::numeric_limits<double>::quiet_NaN();
};

struct FinitePopulation {
  std::vector<UnitRecord> units;

  int size() const { return static_cast<int>(units.size()); }

  // Population total of y. Requires complete y.
  double total_y() const;
};

// Interface contract for fixed-size single-stage designs: first- and
// second-order inclusion probabilities by population unit index.
template <typename D>
concept FixedSizeDesign = requires(const D d, int i, int k) {
  { d.pi(i) } -> std::convertible_to<double>;
  { d.joint_pi(i, k) } -> std::convertible_to<double>;
  { d.population_size() } -> std::convertible_to<int>;
  { d.sample_size() } -> std::convertible_to<int>;
};

// Simple random sampling without replacement, fixed size n out of N.
class SrsworDesign {
 public:
  SrsworDesign(int population_size, int sample_size);

  double pi(int /*i*/) const { return pi1_; }

  // Joint inclusion probability; the diagonal is pi_i by convention.
  double joint_pi(int i, int k) const { return i == k ? pi1_ : pi2_; }

  // Delta_ik = pi_ik - pi_i pi_k, with the diagonal pi_i (1 - pi_i).
  double delta(int i, int k) const { return joint_pi(i, k) - pi1_ * pi1_; }

  int population_size() const { return N_; }
  int sample_size() const { return n_; }
  double weight() const { return static_cast<double>(N_) / n_; }

 private:
  int N_, n_;
  double pi1_, pi2_;
};

static_assert(FixedSizeDesign<SrsworDesign>);

// A realized sample: member indices into the parent population (ascending)
// plus the design that produced it.
struct Sample {
  SrsworDesign design;
  std::vector<int> members;

  int size() const { return static_cast<int>(members.size()); }
  double weight() const { return design.weight(); }
};

// Uniformly random subset of size n from {0,...,N-1} via a partial
// Fisher-Yates shuffle; returned ascending.
std::vector<int> srswor_indices(int population_size, int sample_size,
                                std::mt19937_64& rng);

Sample draw_srswor(const FinitePopulation& pop, int sample_size,
                   std::mt19937_64& rng);

// Horvitz-Thompson total sum_S y_i / pi_i from the parent population's y.
double ht_total(const Sample& s, const FinitePopulation& pop);

// Same, with caller-supplied per-member values (aligned with s.members).
double ht_total(const Sample& s, const std::vector<double>& member_values);

// Conditional bias of the HT total for unit i, computed at the population
// level: sum_{k in U} Delta_ik / (pi_i pi_k) * y_k.
double cond_bias_ht_population(const SrsworDesign& d,
                               const std::vector<double>& y, int i);

// Design-based estimate of the conditional bias of a HT-type total for one
// sample member, from per-member values: sum_{k in S} Delta_ik/(pi_ik pi_k) v_k.
// Generic over the design so other fixed-size designs plug in.
template <FixedSizeDesign D>
double estimate_conditional_bias(const D& d, const std::vector<int>& members,
                                 const std::vector<double>& values,
                                 int member_pos) {
  const int i = members[member_pos];
  double b = 0.0;
  for (std::size_t t = 0; t < members.size(); ++t) {
    const int k = members[t];
    b += d.delta(i, k) / (d.joint_pi(i, k) * d.pi(k)) * values[t];
  }
  return b;
}

template <FixedSizeDesign D>
std::vector<double> estimate_conditional_bias_all(
    const D& d, const std::vector<int>& members,
    const std::vector<double>& values) {
  std::vector<double> b(members.size());
  for (std::size_t t = 0; t < members.size(); ++t)
    b[t] = estimate_conditional_bias(d, members, values, static_cast<int>(t));
  return b;
}

// est_cond_bias for the HT total of unit with population id `unit_id`.
double est_cond_bias_ht(const Sample& s, const std::vector<double>& member_y,
                        int unit_id);

// Min/max of the estimated conditional biases over the sample, with the
// population ids attaining them (first occurrence on ties).
struct BiasRange {
  std::vector<double> b;  // aligned with sample members
  double b_min = 0.0, b_max = 0.0;
  int argmin_id = -1, argmax_id = -1;
};

BiasRange bias_range(const Sample& s, const std::vector<double>& values);

// Bias-adjusted total: subtracts the midrange of the estimated conditional
// biases from the plain HT total.
struct RobustTotal {
  double estimate = 0.0;   // adjusted total
  double base = 0.0;       // unadjusted total
  BiasRange bias;
};

RobustTotal robust_ht(const Sample& s, const std::vector<double>& member_y);

}  // namespace mrsurvey
