#include "vaxinfer/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>
#include <vector>

#include "vaxinfer/exact.hpp"
#include "vaxinfer/numerics.hpp"

namespace vaxinfer::forecast {

namespace {

void check_spec(const ForecastSpec& spec) {
  if (spec.cohort_size < 0)
    throw std::domain_error("forecast: cohort size must be non-negative");
  if (!(spec.assault_mean > 0.0 && spec.assault_mean < 1.0))
    throw std::domain_error("forecast: assault mean must lie in (0, 1)");
  if (spec.assault_sd < 0.0)
    throw std::domain_error("forecast: assault sd must be non-negative");
  if (spec.n_samples < 10000)
    throw std::domain_error("forecast: need at least 10000 samples");
  if (const auto* fixed = std::get_if<double>(&spec.eps)) {
    if (!(*fixed >= 0.0 && *fixed <= 1.0))
      throw std::domain_error("forecast: fixed eps must lie in [0, 1]");
  }
}

beta::Moments eps_moments(const EpsSource& eps) {
  if (const auto* fixed = std::get_if<double>(&eps)) return {*fixed, 0.0};
  return beta::beta_moments(std::get<beta::BetaParams>(eps));
}

}  // namespace

ForecastResult forecast_mc(const ForecastSpec& spec) {
  check_spec(spec);
  numerics::Rng rng(spec.seed, 0);

  // Uncertain assault probability is moment-matched to a Beta so the
  // draws stay inside [0, 1]; throws when the moments are infeasible.
  std::optional<beta::BetaParams> assault_beta;
  if (spec.assault_sd > 0.0)
    assault_beta = beta::beta_from_moments(spec.assault_mean, spec.assault_sd);
  const auto* eps_beta = std::get_if<beta::BetaParams>(&spec.eps);

  ForecastResult result;
  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t i = 0; i < spec.n_samples; ++i) {
    const double assault = assault_beta
                               ? numerics::sample_beta(rng, assault_beta->r, assault_beta->s)
                               : spec.assault_mean;
    const double eps =
        eps_beta ? numerics::sample_beta(rng, eps_beta->r, eps_beta->s)
                 : std::get<double>(spec.eps);
    const std::int64_t assaulted = numerics::sample_binomial(rng, spec.cohort_size, assault);
    const std::int64_t infected = numerics::sample_binomial(rng, assaulted, 1.0 - eps);
    sum += static_cast<double>(infected);
    sum_sq += static_cast<double>(infected) * static_cast<double>(infected);
    ++result.histogram[infected];
  }
  const auto n = static_cast<double>(spec.n_samples);
  result.mean = sum / n;
  result.sd = std::sqrt(std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0)));
  if (!assault_beta && !eps_beta) {
    result.p_overall = spec.assault_mean * (1.0 - std::get<double>(spec.eps));
  }
  return result;
}

ApproxMoments forecast_approx(const ForecastSpec& spec) {
  check_spec(spec);
  const auto eps = eps_moments(spec.eps);
  const auto cohort = static_cast<double>(spec.cohort_size);
  const double miss = 1.0 - eps.mean;  // infection probability under assault

  const double mean = cohort * spec.assault_mean * miss;
  const double binom_var = mean * (1.0 - spec.assault_mean * miss);
  const double assault_term = cohort * miss * spec.assault_sd;
  const double eps_term = cohort * spec.assault_mean * eps.sd;
  const double var = binom_var + assault_term * assault_term + eps_term * eps_term;
  return {mean, std::sqrt(var)};
}

DesignStudyResult design_study(std::int64_t vaccine_total, std::int64_t placebo_total,
                               double true_eps, double true_assault,
                               std::int64_t n_replications, std::uint64_t seed,
                               std::size_t grid_size) {
  if (vaccine_total <= 0 || placebo_total <= 0)
    throw std::domain_error("design_study: arm sizes must be positive");
  if (!(true_eps >= 0.0 && true_eps <= 1.0))
    throw std::domain_error("design_study: eps must lie in [0, 1]");
  if (!(true_assault > 0.0 && true_assault < 1.0))
    throw std::domain_error("design_study: assault probability must lie in (0, 1)");
  if (n_replications < 100)
    throw std::domain_error("design_study: need at least 100 replications");

  const auto simulate_one = [&](std::int64_t rep) {
    numerics::Rng rng(seed, static_cast<std::uint64_t>(rep));
    model::TrialCounts trial;
    trial.label = "simulated";
    trial.vaccine_total = vaccine_total;
    trial.placebo_total = placebo_total;
    trial.placebo_infected = numerics::sample_binomial(rng, placebo_total, true_assault);
    const std::int64_t assaulted =
        numerics::sample_binomial(rng, vaccine_total, true_assault);
    trial.vaccine_infected = numerics::sample_binomial(rng, assaulted, 1.0 - true_eps);

    // Zero-infection replications stay in: the posterior is still proper.
    const auto post = exact::posterior_density(trial, grid_size);
    return exact::posterior_summary(post).sd;
  };

  // Each replication owns its RNG stream, so batches can run in parallel
  // and the merge by index stays deterministic.
  DesignStudyResult result;
  result.per_replication.resize(static_cast<std::size_t>(n_replications));
  const unsigned n_workers =
      std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
  std::vector<std::future<void>> workers;
  workers.reserve(n_workers);
  for (unsigned w = 0; w < n_workers; ++w) {
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (std::int64_t rep = w; rep < n_replications;
           rep += static_cast<std::int64_t>(n_workers)) {
        result.per_replication[static_cast<std::size_t>(rep)] = simulate_one(rep);
      }
    }));
  }
  for (auto& worker : workers) worker.get();

  double total = 0.0;
  for (double sd : result.per_replication) total += sd;
  result.mean_sd_eps = total / static_cast<double>(n_replications);
  return result;
}

}  // namespace vaxinfer::forecast
