#include "vaxinfer/beta_dist.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vaxinfer/numerics.hpp"

namespace vaxinfer::beta {

Moments beta_moments(const BetaParams& params) {
  if (!(params.r > 0.0) || !(params.s > 0.0))
    throw std::domain_error("beta_moments: shapes must be positive");
  const double total = params.r + params.s;
  const double mean = params.r / total;
  const double var = params.r * params.s / ((total + 1.0) * total * total);
  return {mean, std::sqrt(var)};
}

BetaParams beta_from_moments(double mean, double sd) {
  if (!(mean > 0.0 && mean < 1.0))
    throw std::domain_error("beta_from_moments: mean must lie in (0, 1)");
  const double var = sd * sd;
  if (!(var > 0.0) || var >= mean * (1.0 - mean))
    throw std::domain_error("beta_from_moments: need 0 < sd^2 < mean*(1-mean)");
  const double r = (1.0 - mean) * mean * mean / var - mean;
  const double s = r * (1.0 - mean) / mean;
  if (!(r > 0.0) || !(s > 0.0))
    throw std::domain_error("beta_from_moments: infeasible moments");
  return {r, s};
}

double beta_pdf(double x, const BetaParams& params) {
  if (x < 0.0 || x > 1.0) return 0.0;
  if (x == 0.0) {
    if (params.r > 1.0) return 0.0;
    if (params.r == 1.0) return params.s;
    return std::numeric_limits<double>::infinity();
  }
  if (x == 1.0) {
    if (params.s > 1.0) return 0.0;
    if (params.s == 1.0) return params.r;
    return std::numeric_limits<double>::infinity();
  }
  return std::exp((params.r - 1.0) * std::log(x) + (params.s - 1.0) * std::log1p(-x) -
                  numerics::ln_beta(params.r, params.s));
}

double beta_mode(const BetaParams& params) {
  if (params.r > 1.0 && params.s > 1.0)
    return (params.r - 1.0) / (params.r + params.s - 2.0);
  if (params.r <= 1.0 && params.s > 1.0) return 0.0;
  if (params.s <= 1.0 && params.r > 1.0) return 1.0;
  return 0.5;  // flat or bathtub: no interior mode
}

BetaParams reshape_with_prior(const BetaParams& flat_fit, const BetaParams& prior) {
  const BetaParams out{prior.r + flat_fit.r - 1.0, prior.s + flat_fit.s - 1.0};
  if (!(out.r > 0.0) || !(out.s > 0.0))
    throw std::domain_error("reshape_with_prior: reshaped shapes must be positive");
  return out;
}

double rule_of_succession(std::int64_t successes, std::int64_t trials) {
  if (successes < 0 || trials < 0 || successes > trials)
    throw std::domain_error("rule_of_succession: need 0 <= successes <= trials");
  return static_cast<double>(successes + 1) / static_cast<double>(trials + 2);
}

BetaParams fit_posterior(const model::MomentSummary& summary) {
  return beta_from_moments(summary.mean, summary.sd);
}

}  // namespace vaxinfer::beta
