#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tilekl/patterns.hpp"

namespace tilekl {

inline constexpr double kDefaultEpsilon = 1e-5;
inline constexpr double kDefaultWeight = 0.5;

struct DivergenceConfig {
  double epsilon = kDefaultEpsilon;
  FilterDims dims;
  // Weight of D(P||Q); D(Q||P) gets 1 - weight.
  double weight = kDefaultWeight;

  // Throws InvalidArgument unless 0 < epsilon <= 1 and 0 <= weight <= 1.
  void validate() const;
};

struct DivergenceResult {
  double kl_p_q = 0.0;
  double kl_q_p = 0.0;
  double fitness = 0.0;
};

// Back-off estimate (C(x) + eps) / ((C + eps)(1 + eps)).
double smoothed_prob(std::uint64_t count, std::uint64_t total, double epsilon);

// Sum over the patterns of p of P'(x) log(P'(x) / Q'(x)), natural log,
// summed in pattern-key order. Patterns only in q do not contribute.
double kl_div(const PatternDistribution& p, const PatternDistribution& q, double epsilon);

// -(w * D(P||Q) + (1 - w) * D(Q||P)).
double weighted_fitness(double kl_p_q, double kl_q_p, double weight);

DivergenceResult fitness(const PatternDistribution& p, const PatternDistribution& q,
                         const DivergenceConfig& config);

// w * D(P||Q) + (1 - w) * D(Q||P), the magnitude of the fitness.
double weighted_divergence(const PatternDistribution& p, const PatternDistribution& q,
                           double epsilon, double weight);

struct Contribution {
  Pattern pattern;
  double p_prime;
  double q_prime;
  double summand;
};

// One entry per pattern of p, largest summand first, ties by key.
std::vector<Contribution> contributions(const PatternDistribution& p,
                                        const PatternDistribution& q, double epsilon);

// "pattern_key,p_prime,q_prime,summand"; `top` == 0 writes every entry.
std::string contributions_csv(const std::vector<Contribution>& report, std::size_t top = 0);

}  // namespace tilekl
