#include "vaxinfer/severity.hpp"

#include <cmath>
#include <stdexcept>

namespace vaxinfer::severity {

beta::BetaParams severity_posterior(std::int64_t n_infected, std::int64_t n_severe) {
  if (n_infected < 0 || n_severe < 0 || n_severe > n_infected)
    throw std::domain_error("severity_posterior: need 0 <= n_severe <= n_infected");
  return {static_cast<double>(n_severe) + 1.0,
          static_cast<double>(n_infected - n_severe) + 1.0};
}

SeverityPosteriors severity_report(const model::TrialCounts& counts) {
  model::validate(counts);
  if (!counts.has_severity())
    throw model::ValidationError("record '" + counts.label +
                                 "': severity counts are not present");
  SeverityPosteriors out;
  out.vaccine_arm = severity_posterior(counts.vaccine_infected, *counts.vaccine_severe);
  out.placebo_arm = severity_posterior(counts.placebo_infected, *counts.placebo_severe);
  out.vaccine_severe_free_next = beta::rule_of_succession(
      counts.vaccine_infected - *counts.vaccine_severe, counts.vaccine_infected);
  return out;
}

beta::Moments difference_summary(const beta::BetaParams& a, const beta::BetaParams& b) {
  const auto ma = beta::beta_moments(a);
  const auto mb = beta::beta_moments(b);
  return {ma.mean - mb.mean, std::sqrt(ma.sd * ma.sd + mb.sd * mb.sd)};
}

std::vector<double> difference_samples(const beta::BetaParams& a,
                                       const beta::BetaParams& b,
                                       std::size_t n_draws, numerics::Rng& rng) {
  std::vector<double> out(n_draws);
  for (auto& x : out)
    x = numerics::sample_beta(rng, a.r, a.s) - numerics::sample_beta(rng, b.r, b.s);
  return out;
}

}  // namespace vaxinfer::severity
