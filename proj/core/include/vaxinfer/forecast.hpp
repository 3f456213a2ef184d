#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "vaxinfer/beta_dist.hpp"

namespace vaxinfer::forecast {

/// Efficacy input: a fixed value or an uncertain Beta distribution.
using EpsSource = std::variant<double, beta::BetaParams>;

/// Forecast of infectees among a newly vaccinated cohort.
struct ForecastSpec {
  std::int64_t cohort_size = 0;   ///< newly vaccinated individuals
  double assault_mean = 0.0;      ///< expected assault probability in the cohort
  double assault_sd = 0.0;        ///< 0 means the assault probability is exact
  EpsSource eps{0.0};
  std::int64_t n_samples = 1000000;
  std::uint64_t seed = 1;
};

struct ForecastResult {
  double mean = 0.0;
  double sd = 0.0;
  /// Infectee count -> occurrences; totals n_samples.
  std::map<std::int64_t, std::int64_t> histogram;
  /// Overall infection probability, defined only when both parameters are
  /// exact (the count is then plain Binomial(cohort, p_ov)).
  std::optional<double> p_overall;
};

struct ApproxMoments {
  double mean = 0.0;
  double sd = 0.0;
};

/// Monte Carlo forecast: draw the assault probability (fixed or Beta
/// moment-matched), the efficacy (fixed or Beta), the assaulted count and
/// the infected count per sample.
ForecastResult forecast_mc(const ForecastSpec& spec);

/// Linearized propagation:
///   mean = nV' * E(pA') * (1 - E(eps))
///   var  = binomial at the expected parameters
///        + (nV' * (1 - E(eps)))^2 * var(pA')
///        + (nV' * E(pA'))^2 * var(eps)
ApproxMoments forecast_approx(const ForecastSpec& spec);

struct DesignStudyResult {
  double mean_sd_eps = 0.0;            ///< average posterior sd of efficacy
  std::vector<double> per_replication; ///< posterior sd per simulated trial
};

/// Trial-design study: forward-simulates `n_replications` trials at the
/// given truth and measures the exact-engine posterior sd of efficacy.
/// Replication r draws from stream r of `seed`.
DesignStudyResult design_study(std::int64_t vaccine_total, std::int64_t placebo_total,
                               double true_eps, double true_assault,
                               std::int64_t n_replications, std::uint64_t seed,
                               std::size_t grid_size = 2001);

}  // namespace vaxinfer::forecast
