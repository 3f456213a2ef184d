#include "vaxinfer/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

namespace vaxinfer::gibbs {

namespace {

double clamp_open_unit(double x) {
  return std::clamp(x, 1e-12, 1.0 - 1e-12);
}

// Type-7 quantile of a sorted sample.
double sorted_quantile(const std::vector<double>& sorted, double q) {
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - lo) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

SweepState gibbs_sweep(const SweepState& state, const model::TrialCounts& counts,
                       numerics::Rng& rng, const beta::BetaParams& eps_prior) {
  const auto n_v = counts.vaccine_total;
  const auto n_p = counts.placebo_total;
  const auto n_vi = counts.vaccine_infected;
  const auto n_pi = counts.placebo_infected;

  SweepState next;

  // Assault probability: both arms' binomials are Beta-conjugate given the
  // assaulted count (placebo assaulted == placebo infected).
  next.assault_prob = numerics::sample_beta(
      rng, static_cast<double>(state.assaulted + n_pi) + 1.0,
      static_cast<double>((n_v - state.assaulted) + (n_p - n_pi)) + 1.0);

  // Shielding failure rate 1-eps is Beta-conjugate given the assaulted
  // count; an eps prior Beta(r, s) is Beta(s, r) on the failure rate.
  const double failure = numerics::sample_beta(
      rng, static_cast<double>(n_vi) + eps_prior.s,
      static_cast<double>(state.assaulted - n_vi) + eps_prior.r);
  next.eps = 1.0 - failure;

  // Each uninfected vaccinee was either assaulted-and-shielded
  // (p = pA*eps) or never assaulted (p = 1-pA).
  const double p_assault = clamp_open_unit(next.assault_prob);
  const double eps = clamp_open_unit(next.eps);
  const double shielded_given_uninfected =
      p_assault * eps / (1.0 - p_assault * (1.0 - eps));
  next.assaulted =
      n_vi + numerics::sample_binomial(rng, n_v - n_vi,
                                       std::clamp(shielded_given_uninfected, 0.0, 1.0));
  return next;
}

SweepState initial_state(const model::TrialCounts& counts, std::uint64_t seed,
                         std::uint64_t stream) {
  // Salted seed: the jitter draws must not replay the chain's own stream.
  numerics::Rng rng(seed ^ 0xd1b54a32d192ed03ULL, stream);
  const double base_assault = (static_cast<double>(counts.placebo_infected) + 1.0) /
                              (static_cast<double>(counts.placebo_total) + 2.0);

  SweepState state;
  state.assault_prob =
      std::clamp(base_assault * std::exp(0.6 * (rng.uniform() - 0.5)), 1e-9, 1.0 - 1e-9);
  state.eps = std::clamp(0.5 + 0.7 * (rng.uniform() - 0.5), 0.01, 0.99);
  state.assaulted = std::max(
      counts.vaccine_infected,
      static_cast<std::int64_t>(std::llround(counts.vaccine_total * state.assault_prob)));
  state.assaulted = std::min(state.assaulted, counts.vaccine_total);
  return state;
}

namespace {

struct ChainDraws {
  std::vector<double> eps;
  std::vector<double> assault;
  std::vector<std::int64_t> assaulted;
};

ChainDraws run_one_chain(const model::TrialCounts& counts, const McmcConfig& config,
                         const beta::BetaParams& eps_prior, std::uint64_t stream) {
  numerics::Rng rng(config.seed, stream);
  SweepState state = initial_state(counts, config.seed, stream);

  const auto kept = static_cast<std::size_t>(
      (config.n_iter - config.burn_in + config.thin - 1) / config.thin);
  ChainDraws draws;
  draws.eps.reserve(kept);
  draws.assault.reserve(kept);
  draws.assaulted.reserve(kept);

  for (std::int64_t it = 0; it < config.n_iter; ++it) {
    state = gibbs_sweep(state, counts, rng, eps_prior);
    if (it >= config.burn_in && (it - config.burn_in) % config.thin == 0) {
      draws.eps.push_back(state.eps);
      draws.assault.push_back(state.assault_prob);
      draws.assaulted.push_back(state.assaulted);
    }
  }
  return draws;
}

}  // namespace

McmcSamples run_chains(const model::TrialCounts& counts, const McmcConfig& config,
                       const beta::BetaParams& eps_prior) {
  model::validate(counts);
  if (config.n_iter <= config.burn_in)
    throw std::domain_error("run_chains: n_iter must exceed burn_in");
  if (config.thin < 1) throw std::domain_error("run_chains: thin must be >= 1");
  if (config.n_chains < 2) throw std::domain_error("run_chains: need >= 2 chains");
  if (!(eps_prior.r > 0.0) || !(eps_prior.s > 0.0))
    throw std::domain_error("run_chains: prior shapes must be positive");

  std::vector<std::future<ChainDraws>> futures;
  futures.reserve(static_cast<std::size_t>(config.n_chains));
  for (std::int64_t chain = 0; chain < config.n_chains; ++chain) {
    futures.push_back(std::async(std::launch::async, run_one_chain, std::cref(counts),
                                 std::cref(config), std::cref(eps_prior),
                                 static_cast<std::uint64_t>(chain)));
  }

  McmcSamples samples;
  for (auto& fut : futures) {
    ChainDraws draws = fut.get();
    samples.eps_draws.push_back(std::move(draws.eps));
    samples.assault_draws.push_back(std::move(draws.assault));
    samples.assaulted_draws.push_back(std::move(draws.assaulted));
  }

  std::vector<std::vector<double>> assaulted_real(samples.assaulted_draws.size());
  for (std::size_t c = 0; c < samples.assaulted_draws.size(); ++c) {
    assaulted_real[c].assign(samples.assaulted_draws[c].begin(),
                             samples.assaulted_draws[c].end());
  }
  samples.diagnostics["eps"] = chain_diagnostics(samples.eps_draws);
  samples.diagnostics["p_assault"] = chain_diagnostics(samples.assault_draws);
  samples.diagnostics["n_assaulted"] = chain_diagnostics(assaulted_real);
  for (const auto& entry : samples.diagnostics) {
    if (!(entry.second.rhat <= 1.05)) samples.converged = false;
  }
  return samples;
}

ChainDiagnostics chain_diagnostics(const std::vector<std::vector<double>>& chains) {
  if (chains.size() < 2)
    throw std::domain_error("chain_diagnostics: needs >= 2 chains");
  const std::size_t len = chains.front().size();
  for (const auto& chain : chains) {
    if (chain.size() != len)
      throw std::domain_error("chain_diagnostics: chains must have equal length");
  }
  if (len < 4) throw std::domain_error("chain_diagnostics: chains too short");

  // Split each chain in half to expose within-chain drift.
  const std::size_t half = len / 2;
  std::vector<std::pair<const double*, std::size_t>> splits;
  for (const auto& chain : chains) {
    splits.emplace_back(chain.data(), half);
    splits.emplace_back(chain.data() + half, half);
  }
  const auto n_splits = static_cast<double>(splits.size());
  const auto n_draws = static_cast<double>(half);

  std::vector<double> means(splits.size()), vars(splits.size());
  for (std::size_t j = 0; j < splits.size(); ++j) {
    const auto [data, count] = splits[j];
    double m = 0.0;
    for (std::size_t i = 0; i < count; ++i) m += data[i];
    m /= n_draws;
    double v = 0.0;
    for (std::size_t i = 0; i < count; ++i) v += (data[i] - m) * (data[i] - m);
    means[j] = m;
    vars[j] = v / (n_draws - 1.0);
  }

  double within = 0.0;
  for (double v : vars) within += v;
  within /= n_splits;

  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= n_splits;
  double between_over_n = 0.0;
  for (double m : means) between_over_n += (m - grand) * (m - grand);
  between_over_n /= (n_splits - 1.0);

  const double var_plus = (n_draws - 1.0) / n_draws * within + between_over_n;

  ChainDiagnostics diag;
  const double total_draws = n_splits * n_draws;
  if (var_plus <= 0.0) {
    // Constant chains: R-hat is 1 by convention, every draw is "effective".
    diag.rhat = 1.0;
    diag.ess = total_draws;
    diag.mcse = 0.0;
    return diag;
  }
  diag.rhat = within > 0.0 ? std::sqrt(var_plus / within)
                           : std::numeric_limits<double>::infinity();

  // Combined autocorrelation, truncated at the first non-positive Geyer
  // pair (rho_{2m} + rho_{2m+1}), with the monotone initial-sequence
  // correction.
  // Chains this engine produces decorrelate within tens of lags; the cap
  // only bounds the cost on degenerate inputs, where R-hat flags trouble
  // anyway.
  const std::size_t max_lag = std::min<std::size_t>(half, 4000);
  std::vector<double> rho{1.0};
  for (std::size_t t = 1; t < max_lag; ++t) {
    double acov = 0.0;
    for (std::size_t j = 0; j < splits.size(); ++j) {
      const auto [data, count] = splits[j];
      double sum = 0.0;
      for (std::size_t i = 0; i + t < count; ++i)
        sum += (data[i] - means[j]) * (data[i + t] - means[j]);
      acov += sum / n_draws;
    }
    acov /= n_splits;
    rho.push_back(1.0 - (within - acov) / var_plus);
    const bool pair_complete = rho.size() % 2 == 0;
    if (pair_complete && rho[rho.size() - 2] + rho[rho.size() - 1] <= 0.0) break;
  }

  double tau = 0.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; 2 * m < rho.size(); ++m) {
    double pair = rho[2 * m];
    if (2 * m + 1 < rho.size()) pair += rho[2 * m + 1];
    pair = std::min(pair, prev_pair);
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
    prev_pair = pair;
  }
  tau = std::max(tau - 1.0, 1e-2);

  diag.ess = total_draws / tau;

  double pooled_var = 0.0;
  for (std::size_t j = 0; j < splits.size(); ++j) {
    const auto [data, count] = splits[j];
    for (std::size_t i = 0; i < count; ++i)
      pooled_var += (data[i] - grand) * (data[i] - grand);
  }
  pooled_var /= (total_draws - 1.0);
  diag.mcse = std::sqrt(pooled_var / diag.ess);
  return diag;
}

model::MomentSummary summarize(const McmcSamples& samples, double tail_threshold) {
  std::vector<double> pooled;
  for (const auto& chain : samples.eps_draws)
    pooled.insert(pooled.end(), chain.begin(), chain.end());
  if (pooled.empty()) throw std::domain_error("summarize: no draws");

  double mean = 0.0;
  for (double x : pooled) mean += x;
  mean /= static_cast<double>(pooled.size());
  double var = 0.0;
  for (double x : pooled) var += (x - mean) * (x - mean);
  var = pooled.size() > 1 ? var / static_cast<double>(pooled.size() - 1) : 0.0;
  const double sd = std::sqrt(var);

  std::sort(pooled.begin(), pooled.end());
  model::MomentSummary summary;
  summary.mean = mean;
  summary.sd = sd;
  summary.ci_low = sorted_quantile(pooled, 0.025);
  summary.ci_high = sorted_quantile(pooled, 0.975);
  const auto first_tail =
      std::lower_bound(pooled.begin(), pooled.end(), tail_threshold);
  summary.tail_prob = static_cast<double>(pooled.end() - first_tail) /
                      static_cast<double>(pooled.size());

  // Histogram argmax is bin-width sensitive; report the moment-matched
  // Beta mode instead. Degenerate chains fall back to the mean.
  try {
    summary.mode = beta::beta_mode(beta::beta_from_moments(mean, sd));
  } catch (const std::domain_error&) {
    summary.mode = mean;
  }
  return summary;
}

}  // namespace vaxinfer::gibbs
