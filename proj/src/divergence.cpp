#include "tilekl/divergence.hpp"

#include <algorithm>
#include <cmath>

#include "tilekl/csv.hpp"
#include "tilekl/error.hpp"

namespace tilekl {

namespace {

void check_pair(const PatternDistribution& p, const PatternDistribution& q)
{
  if (p.dims() != q.dims()) {
    throw Error(ErrorCode::DimsMismatch,
                "distributions use " + p.dims().label() + " and " + q.dims().label() + " patterns");
  }
  if (p.empty()) throw Error(ErrorCode::EmptyDistribution, "reference distribution has no patterns");
}

}  // namespace

void DivergenceConfig::validate() const
{
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1]");
  }
  if (!(weight >= 0.0 && weight <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "weight must lie in [0, 1]");
  }
}

double smoothed_prob(std::uint64_t count, std::uint64_t total, double epsilon)
{
  return (static_cast<double>(count) + epsilon) /
         ((static_cast<double>(total) + epsilon) * (1.0 + epsilon));
}

double kl_div(const PatternDistribution& p, const PatternDistribution& q, double epsilon)
{
  check_pair(p, q);
  double sum = 0.0;
  for (const auto& [cells, n] : p.counts()) {
    const double pp = smoothed_prob(n, p.total(), epsilon);
    const double qp = smoothed_prob(q.count(cells), q.total(), epsilon);
    sum += pp * std::log(pp / qp);
  }
  return sum;
}

double weighted_fitness(double kl_p_q, double kl_q_p, double weight)
{
  // 0 - x instead of -x so identical distributions report +0.
  return 0.0 - (weight * kl_p_q + (1.0 - weight) * kl_q_p);
}

DivergenceResult fitness(const PatternDistribution& p, const PatternDistribution& q,
                         const DivergenceConfig& config)
{
  DivergenceResult r;
  r.kl_p_q = kl_div(p, q, config.epsilon);
  r.kl_q_p = kl_div(q, p, config.epsilon);
  r.fitness = weighted_fitness(r.kl_p_q, r.kl_q_p, config.weight);
  return r;
}

double weighted_divergence(const PatternDistribution& p, const PatternDistribution& q,
                           double epsilon, double weight)
{
  return weight * kl_div(p, q, epsilon) + (1.0 - weight) * kl_div(q, p, epsilon);
}

std::vector<Contribution> contributions(const PatternDistribution& p,
                                        const PatternDistribution& q, double epsilon)
{
  check_pair(p, q);
  std::vector<Contribution> report;
  report.reserve(p.distinct());
  for (const auto& [cells, n] : p.counts()) {
    const double pp = smoothed_prob(n, p.total(), epsilon);
    const double qp = smoothed_prob(q.count(cells), q.total(), epsilon);
    report.push_back({Pattern{p.dims(), cells}, pp, qp, pp * std::log(pp / qp)});
  }
  std::stable_sort(report.begin(), report.end(),
                   [](const Contribution& a, const Contribution& b) { return a.summand > b.summand; });
  return report;
}

std::string contributions_csv(const std::vector<Contribution>& report, std::size_t top)
{
  const std::size_t n = top == 0 ? report.size() : std::min(top, report.size());
  std::string out = "pattern_key,p_prime,q_prime,summand\n";
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = report[i];
    out += csv_field(c.pattern.key()) + ',' + format_double(c.p_prime) + ',' +
           format_double(c.q_prime) + ',' + format_double(c.summand) + '\n';
  }
  return out;
}

}  // namespace tilekl
