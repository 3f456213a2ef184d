#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vaxinfer/beta_dist.hpp"
#include "vaxinfer/numerics.hpp"
#include "vaxinfer/trial_data.hpp"

namespace vaxinfer::gibbs {

struct McmcConfig {
  std::int64_t n_iter = 50000;
  std::int64_t burn_in = 5000;
  std::int64_t thin = 1;
  std::int64_t n_chains = 4;
  std::uint64_t seed = 1;
  double tail_threshold = 0.9;
};

struct ChainDiagnostics {
  double rhat = 1.0;
  double ess = 0.0;
  double mcse = 0.0;
};

/// Per-chain draws of efficacy, assault probability and the latent
/// assaulted count, with split-R-hat / ESS / MCSE per variable.
struct McmcSamples {
  std::vector<std::vector<double>> eps_draws;
  std::vector<std::vector<double>> assault_draws;
  std::vector<std::vector<std::int64_t>> assaulted_draws;
  std::map<std::string, ChainDiagnostics> diagnostics;  // keys: eps, p_assault, n_assaulted
  bool converged = true;  ///< false when any R-hat exceeds 1.05
};

/// One Gibbs state: all three blocks live inside their supports.
struct SweepState {
  double assault_prob = 0.0;
  double eps = 0.0;
  std::int64_t assaulted = 0;
};

/// One full sweep of the three exact conditionals:
///   assault_prob | assaulted  ~ Beta(nVA + nPI + 1, nV - nVA + nP - nPI + 1)
///   1 - eps      | assaulted  ~ Beta(nVI + eps_prior.r', nVA - nVI + eps_prior.s')
///   assaulted    | rest       =  nVI + Binom(nV - nVI, pA*eps / (1 - pA*(1-eps)))
/// The prior on eps is Beta(eps_prior.r, eps_prior.s); the default {1,1}
/// reproduces the flat-prior model.
SweepState gibbs_sweep(const SweepState& state, const model::TrialCounts& counts,
                       numerics::Rng& rng, const beta::BetaParams& eps_prior = {1.0, 1.0});

/// Deterministic start point for chain `stream`: near the data-implied
/// assault rate with stream-indexed jitter so chains start overdispersed.
SweepState initial_state(const model::TrialCounts& counts, std::uint64_t seed,
                         std::uint64_t stream);

/// Runs n_chains independent chains (stream = chain index), drops burn-in,
/// thins, and attaches diagnostics. Severity counts never enter the sweep.
McmcSamples run_chains(const model::TrialCounts& counts, const McmcConfig& config,
                       const beta::BetaParams& eps_prior = {1.0, 1.0});

/// Pooled mean/sd, empirical central 95% interval, tail frequency and the
/// moment-matched Beta mode.
model::MomentSummary summarize(const McmcSamples& samples, double tail_threshold = 0.9);

/// Split-chain R-hat, autocorrelation ESS (Geyer pairwise truncation) and
/// MCSE = sd/sqrt(ESS) for one variable. Requires >= 2 chains.
ChainDiagnostics chain_diagnostics(const std::vector<std::vector<double>>& chains);

}  // namespace vaxinfer::gibbs
