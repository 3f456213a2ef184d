#pragma once

#include <cstdint>
#include <utility>

#include "vaxinfer/trial_data.hpp"

namespace vaxinfer::beta {

/// Shape pair of a Beta distribution; both strictly positive.
struct BetaParams {
  double r = 1.0;
  double s = 1.0;
  bool operator==(const BetaParams&) const = default;
};

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
};

/// mean = r/(r+s), sd = sqrt(r*s / ((r+s+1)(r+s)^2)).
Moments beta_moments(const BetaParams& params);

/// Solves the moment equations for (r, s). Requires 0 < mean < 1 and
/// 0 < sd^2 < mean*(1-mean); throws std::domain_error otherwise.
BetaParams beta_from_moments(double mean, double sd);

/// Density at x (0 outside [0,1]).
double beta_pdf(double x, const BetaParams& params);

/// Mode of the density: (r-1)/(r+s-2) for r,s > 1, else the boundary the
/// density piles onto.
double beta_mode(const BetaParams& params);

/// Applies an expert Beta prior to a flat-prior Beta fit:
/// (r0 + rF - 1, s0 + sF - 1). Requires both results positive.
BetaParams reshape_with_prior(const BetaParams& flat_fit, const BetaParams& prior);

/// Laplace: (successes + 1) / (trials + 2).
double rule_of_succession(std::int64_t successes, std::int64_t trials);

/// Moment-matched Beta of a posterior summary (no histogram fitting).
BetaParams fit_posterior(const model::MomentSummary& summary);

}  // namespace vaxinfer::beta
