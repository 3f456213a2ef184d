#pragma once

// Test-only oracles, independent of the library paths they validate.

#include <cstdint>
#include <functional>
#include <vector>

#include "vaxinfer/numerics.hpp"
#include "vaxinfer/trial_data.hpp"

namespace testsupport {

/// Recursive adaptive Simpson quadrature.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol);

/// Binomial pmf by direct product (no log-gamma), exact for small n.
double binomial_pmf_direct(std::int64_t n, std::int64_t k, double p);

/// Binomial CDF via the regularized incomplete beta:
/// P(X <= k) = I_{1-p}(n-k, k+1).
double binomial_cdf(std::int64_t n, std::int64_t k, double p);

/// Unnormalized efficacy posterior for small trials by brute force:
/// direct factorials and Simpson quadrature over the assault probability.
double brute_force_posterior(double eps, const vaxinfer::model::TrialCounts& counts);

struct RejectionDraws {
  std::vector<double> eps;
  std::vector<double> assault;
  std::vector<std::int64_t> assaulted;
};

/// Forward-simulates the trial model with uniform (eps, pA) and keeps the
/// draws whose simulated counts match the observed ones.
RejectionDraws rejection_sample(const vaxinfer::model::TrialCounts& counts,
                                std::int64_t n_forward, std::uint64_t seed);

/// Histogram density of samples over [0,1] with `bins` equal cells.
std::vector<double> histogram_density(const std::vector<double>& samples,
                                      std::size_t bins);

double mean_of(const std::vector<double>& xs);
double sd_of(const std::vector<double>& xs);

}  // namespace testsupport
