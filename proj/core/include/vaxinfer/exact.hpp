#pragma once

#include <cstdint>
#include <vector>

#include "vaxinfer/trial_data.hpp"

namespace vaxinfer::exact {

/// Normalized posterior density of the efficacy parameter on a uniform
/// grid over [0, 1]. The trapezoid integral of `density` is 1.
struct EfficacyPosterior {
  std::vector<double> grid;
  std::vector<double> density;
  double log_norm = 0.0;  ///< log of the normalization constant
};

/// Precomputed per-dataset terms for the marginal posterior of efficacy.
/// Construction costs O(nV) log-gamma evaluations; each evaluation after
/// that walks only the assaulted-count window that matters.
class LogPosterior {
 public:
  explicit LogPosterior(const model::TrialCounts& counts);

  /// Log posterior density at eps, up to one additive constant shared
  /// across eps. Returns -inf at eps = 1 when infections were observed.
  double operator()(double eps) const;

 private:
  std::int64_t vaccine_total_;
  std::int64_t vaccine_infected_;
  std::vector<double> log_terms_;  // eps-independent summand pieces
  mutable std::int64_t warm_peak_ = 0;
};

/// Log of the unnormalized efficacy posterior (marginalized over the
/// assault probability and the latent assaulted count).
double unnormalized_log_posterior(double eps, const model::TrialCounts& counts);

/// Normalized posterior on a `grid_size`-point uniform grid (>= 101).
EfficacyPosterior posterior_density(const model::TrialCounts& counts,
                                    std::size_t grid_size = 2001);

/// Mean, sd, refined mode, central 95% interval and P(eps >= threshold)
/// from grid quadrature.
model::MomentSummary posterior_summary(const EfficacyPosterior& post,
                                       double tail_threshold = 0.9);

}  // namespace vaxinfer::exact
