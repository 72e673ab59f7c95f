#include "mrsurvey/design.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mrsurvey/rng.hpp"

namespace mrsurvey {

double FinitePopulation::total_y() const {
  double t = 0.0;
  for (const auto& u : units) {
    if (std::isnan(u.y))
      throw IncompleteDataError("total_y: unit " + std::to_string(u.id) +
                                " has missing y");
    t += u.y;
  }
  return t;
}

SrsworDesign::SrsworDesign(int population_size, int sample_size)
    : N_(population_size), n_(sample_size) {
  if (N_ < 1 || n_ < 1 || n_ > N_)
    throw InvalidDesignError("SRSWOR design requires 1 <= n <= N, got n=" +
                             std::to_string(n_) + " N=" + std::to_string(N_));
  pi1_ = static_cast<double>(n_) / N_;
  // For n = 1 no pair is ever jointly selected.
  pi2_ = n_ > 1 ? static_cast<double>(n_) * (n_ - 1) / (static_cast<double>(N_) * (N_ - 1))
                : 0.0;
}

std::vector<int> srswor_indices(int population_size, int sample_size,
                                std::mt19937_64& rng) {
  if (sample_size < 1 || sample_size > population_size)
    throw InvalidDesignError("srswor_indices: need 1 <= n <= N");
  std::vector<int> idx(population_size);
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher-Yates: after k swaps the prefix is a uniform k-subset.
  for (int k = 0; k < sample_size; ++k) {
    const auto j = k + static_cast<int>(uniform_index(
                           rng, static_cast<std::uint64_t>(population_size - k)));
    std::swap(idx[k], idx[j]);
  }
  idx.resize(sample_size);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Sample draw_srswor(const FinitePopulation& pop, int sample_size,
                   std::mt19937_64& rng) {
  SrsworDesign d(pop.size(), sample_size);
  return Sample{d, srswor_indices(pop.size(), sample_size, rng)};
}

double ht_total(const Sample& s, const FinitePopulation& pop) {
  std::vector<double> vals(s.members.size());
  for (std::size_t t = 0; t < s.members.size(); ++t)
    vals[t] = pop.units[s.members[t]].y;
  return ht_total(s, vals);
}

double ht_total(const Sample& s, const std::vector<double>& member_values) {
  if (member_values.size() != s.members.size())
    throw IncompleteDataError("ht_total: values not aligned with sample members");
  double t = 0.0;
  for (std::size_t k = 0; k < member_values.size(); ++k) {
    if (std::isnan(member_values[k]))
      throw IncompleteDataError("ht_total: missing value for member unit " +
                                std::to_string(s.members[k]));
    t += member_values[k] / s.design.pi(s.members[k]);
  }
  return t;
}

double cond_bias_ht_population(const SrsworDesign& d,
                               const std::vector<double>& y, int i) {
  if (static_cast<int>(y.size()) != d.population_size())
    throw IncompleteDataError("cond_bias_ht_population: y must cover the population");
  if (i < 0 || i >= d.population_size())
    throw InvalidDesignError("cond_bias_ht_population: unit index out of range");
  double b = 0.0;
  for (int k = 0; k < d.population_size(); ++k) {
    if (std::isnan(y[k]))
      throw IncompleteDataError("cond_bias_ht_population: missing y at unit " +
                                std::to_string(k));
    b += d.delta(i, k) / (d.pi(i) * d.pi(k)) * y[k];
  }
  return b;
}

double est_cond_bias_ht(const Sample& s, const std::vector<double>& member_y,
                        int unit_id) {
  if (member_y.size() != s.members.size())
    throw IncompleteDataError("est_cond_bias_ht: values not aligned with sample");
  const auto it = std::lower_bound(s.members.begin(), s.members.end(), unit_id);
  if (it == s.members.end() || *it != unit_id)
    throw NotInSampleError("est_cond_bias_ht: unit " + std::to_string(unit_id) +
                           " is not in the sample");
  for (std::size_t k = 0; k < member_y.size(); ++k)
    if (std::isnan(member_y[k]))
      throw IncompleteDataError("est_cond_bias_ht: missing value for member unit " +
                                std::to_string(s.members[k]));
  const int pos = static_cast<int>(it - s.members.begin());
  return estimate_conditional_bias(s.design, s.members, member_y, pos);
}

BiasRange bias_range(const Sample& s, const std::vector<double>& values) {
  BiasRange r;
  r.b = estimate_conditional_bias_all(s.design, s.members, values);
  auto mn = std::min_element(r.b.begin(), r.b.end());
  auto mx = std::max_element(r.b.begin(), r.b.end());
  r.b_min = *mn;
  r.b_max = *mx;
  r.argmin_id = s.members[mn - r.b.begin()];
  r.argmax_id = s.members[mx - r.b.begin()];
  return r;
}

RobustTotal robust_ht(const Sample& s, const std::vector<double>& member_y) {
  RobustTotal out;
  out.base = ht_total(s, member_y);
  out.bias = bias_range(s, member_y);
  out.estimate = out.base - 0.5 * (out.bias.b_min + out.bias.b_max);
  return out;
}

}  // namespace mrsurvey
