#pragma once

#include <cstdint>
#include <vector>

#include "vaxinfer/beta_dist.hpp"
#include "vaxinfer/numerics.hpp"
#include "vaxinfer/trial_data.hpp"

namespace vaxinfer::severity {

/// Conjugate posteriors of the per-arm severe-disease probabilities.
/// These nodes are d-separated from the efficacy once the infected counts
/// are observed, so the exact Beta form is the primary path.
struct SeverityPosteriors {
  beta::BetaParams vaccine_arm;
  beta::BetaParams placebo_arm;
  /// Laplace headline: probability the next vaccine-arm infectee stays
  /// severe-free, (nVI - nVIs + 1)/(nVI + 2). Strictly below 1.
  double vaccine_severe_free_next = 0.0;
};

/// Beta(n_severe + 1, n_infected - n_severe + 1) under a uniform prior.
beta::BetaParams severity_posterior(std::int64_t n_infected, std::int64_t n_severe);

/// Both arm posteriors plus the severe-free headline. Throws
/// model::ValidationError when severity counts are absent.
SeverityPosteriors severity_report(const model::TrialCounts& counts);

/// Exact mean/sd of the difference a - b of two independent Betas.
beta::Moments difference_summary(const beta::BetaParams& a, const beta::BetaParams& b);

/// Sampled difference density for when a full histogram is wanted.
std::vector<double> difference_samples(const beta::BetaParams& a,
                                       const beta::BetaParams& b,
                                       std::size_t n_draws, numerics::Rng& rng);

}  // namespace vaxinfer::severity
