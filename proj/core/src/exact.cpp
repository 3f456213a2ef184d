#include "vaxinfer/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vaxinfer/numerics.hpp"

namespace vaxinfer::exact {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Summand terms this far below the peak are dropped (< 5e-18 relative).
constexpr double kLogCutoff = 40.0;
}  // namespace

LogPosterior::LogPosterior(const model::TrialCounts& counts)
    : vaccine_total_(counts.vaccine_total), vaccine_infected_(counts.vaccine_infected) {
  model::validate(counts);
  using numerics::ln_beta;
  using numerics::ln_gamma;

  // Marginalizing the assault probability leaves, for each assaulted count
  // nVA = nVI + j, an eps-independent factor
  //   -ln j! - ln (nV - nVA)! + ln B(nVA + nPI + 1, nV - nVA + nP - nPI + 1)
  // multiplying eps^j. Precompute those once per dataset.
  const std::int64_t spare = vaccine_total_ - vaccine_infected_;
  log_terms_.resize(static_cast<std::size_t>(spare) + 1);
  for (std::int64_t j = 0; j <= spare; ++j) {
    const std::int64_t assaulted = vaccine_infected_ + j;
    const double first_shape =
        static_cast<double>(assaulted + counts.placebo_infected + 1);
    const double second_shape = static_cast<double>(
        vaccine_total_ - assaulted + counts.placebo_total - counts.placebo_infected + 1);
    log_terms_[static_cast<std::size_t>(j)] =
        -ln_gamma(static_cast<double>(j) + 1.0) -
        ln_gamma(static_cast<double>(vaccine_total_ - assaulted) + 1.0) +
        ln_beta(first_shape, second_shape);
  }
}

double LogPosterior::operator()(double eps) const {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::domain_error("log posterior: eps must lie in [0, 1]");

  // 0 * ln 0 := 0 at both boundaries.
  const double prefix =
      vaccine_infected_ == 0 ? 0.0 : vaccine_infected_ * std::log1p(-eps);
  if (eps == 0.0) return prefix + log_terms_.front();
  if (vaccine_infected_ > 0 && eps == 1.0) return kNegInf;

  const double log_eps = std::log(eps);
  const auto term = [&](std::int64_t j) {
    return static_cast<double>(j) * log_eps + log_terms_[static_cast<std::size_t>(j)];
  };

  // The increments term(j+1) - term(j) decrease in j, so the summand is
  // unimodal: binary-search the peak, then expand until the cutoff.
  const auto last = static_cast<std::int64_t>(log_terms_.size()) - 1;
  std::int64_t lo = 0, hi = last;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (term(mid + 1) > term(mid)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  const std::int64_t peak = lo;
  const double peak_term = term(peak);

  double sum = 1.0;
  for (std::int64_t j = peak + 1; j <= last; ++j) {
    const double t = term(j);
    if (t < peak_term - kLogCutoff) break;
    sum += std::exp(t - peak_term);
  }
  for (std::int64_t j = peak - 1; j >= 0; --j) {
    const double t = term(j);
    if (t < peak_term - kLogCutoff) break;
    sum += std::exp(t - peak_term);
  }
  return prefix + peak_term + std::log(sum);
}

double unnormalized_log_posterior(double eps, const model::TrialCounts& counts) {
  return LogPosterior(counts)(eps);
}

EfficacyPosterior posterior_density(const model::TrialCounts& counts,
                                    std::size_t grid_size) {
  if (grid_size < 101)
    throw std::domain_error("posterior_density: grid_size must be >= 101");

  const LogPosterior log_post(counts);
  EfficacyPosterior post;
  post.grid.resize(grid_size);
  post.density.resize(grid_size);
  const double h = 1.0 / static_cast<double>(grid_size - 1);

  std::vector<double> log_f(grid_size);
  double max_log = kNegInf;
  for (std::size_t i = 0; i < grid_size; ++i) {
    post.grid[i] = (i + 1 == grid_size) ? 1.0 : static_cast<double>(i) * h;
    log_f[i] = log_post(post.grid[i]);
    max_log = std::max(max_log, log_f[i]);
  }

  // Trapezoid normalization in the log domain.
  double scaled_integral = 0.0;
  for (std::size_t i = 0; i < grid_size; ++i) {
    if (log_f[i] == kNegInf) continue;
    const double weight = (i == 0 || i + 1 == grid_size) ? 0.5 * h : h;
    scaled_integral += weight * std::exp(log_f[i] - max_log);
  }
  post.log_norm = max_log + std::log(scaled_integral);
  for (std::size_t i = 0; i < grid_size; ++i) {
    post.density[i] = log_f[i] == kNegInf ? 0.0 : std::exp(log_f[i] - post.log_norm);
  }
  return post;
}

namespace {

// Piecewise-linear inverse CDF over the cumulative trapezoid.
double quantile_from_cdf(const std::vector<double>& grid,
                         const std::vector<double>& cdf, double q) {
  const auto it = std::lower_bound(cdf.begin(), cdf.end(), q);
  if (it == cdf.begin()) return grid.front();
  if (it == cdf.end()) return grid.back();
  const auto i = static_cast<std::size_t>(it - cdf.begin());
  const double c0 = cdf[i - 1], c1 = cdf[i];
  const double frac = c1 > c0 ? (q - c0) / (c1 - c0) : 0.0;
  return grid[i - 1] + frac * (grid[i] - grid[i - 1]);
}

double cdf_at(const std::vector<double>& grid, const std::vector<double>& cdf,
              double x) {
  const auto it = std::lower_bound(grid.begin(), grid.end(), x);
  if (it == grid.begin()) return 0.0;
  if (it == grid.end()) return 1.0;
  const auto i = static_cast<std::size_t>(it - grid.begin());
  const double frac = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
  return cdf[i - 1] + frac * (cdf[i] - cdf[i - 1]);
}

}  // namespace

model::MomentSummary posterior_summary(const EfficacyPosterior& post,
                                       double tail_threshold) {
  const auto n = post.grid.size();
  if (n < 3) throw std::domain_error("posterior_summary: needs at least 3 grid points");

  double mass = 0.0, mean = 0.0, second = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = post.grid[i + 1] - post.grid[i];
    const double f0 = post.density[i], f1 = post.density[i + 1];
    const double x0 = post.grid[i], x1 = post.grid[i + 1];
    mass += 0.5 * h * (f0 + f1);
    mean += 0.5 * h * (x0 * f0 + x1 * f1);
    second += 0.5 * h * (x0 * x0 * f0 + x1 * x1 * f1);
  }
  if (!(mass > 0.0)) throw std::domain_error("posterior_summary: zero-mass density");
  mean /= mass;
  second /= mass;
  const double var = std::max(0.0, second - mean * mean);

  // Mode: grid argmax plus 3-point parabolic refinement on the log density.
  const auto argmax = static_cast<std::size_t>(
      std::max_element(post.density.begin(), post.density.end()) -
      post.density.begin());
  double mode = post.grid[argmax];
  if (argmax > 0 && argmax + 1 < n && post.density[argmax - 1] > 0.0 &&
      post.density[argmax + 1] > 0.0) {
    const double left = std::log(post.density[argmax - 1]);
    const double mid = std::log(post.density[argmax]);
    const double right = std::log(post.density[argmax + 1]);
    const double curvature = left - 2.0 * mid + right;
    if (curvature < 0.0) {
      const double h = post.grid[argmax + 1] - post.grid[argmax];
      mode += 0.5 * h * (left - right) / curvature;
    }
  }

  std::vector<double> cdf(n);
  cdf[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    cdf[i] = cdf[i - 1] + 0.5 * (post.grid[i] - post.grid[i - 1]) *
                              (post.density[i - 1] + post.density[i]);
  }
  const double total = cdf.back();
  if (total > 0.0) {
    for (auto& c : cdf) c /= total;
  }

  model::MomentSummary summary;
  summary.mean = mean;
  summary.sd = std::sqrt(var);
  summary.mode = mode;
  summary.ci_low = quantile_from_cdf(post.grid, cdf, 0.025);
  summary.ci_high = quantile_from_cdf(post.grid, cdf, 0.975);
  summary.tail_prob = 1.0 - cdf_at(post.grid, cdf, tail_threshold);
  return summary;
}

}  // namespace vaxinfer::exact
