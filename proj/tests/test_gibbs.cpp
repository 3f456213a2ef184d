#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "test_support.hpp"
#include "vaxinfer/exact.hpp"
#include "vaxinfer/gibbs.hpp"

using namespace vaxinfer;
using gibbs::McmcConfig;
using gibbs::run_chains;

namespace {

const model::TrialCounts kTiny{"tiny", 5, 5, 1, 2, std::nullopt, std::nullopt};

std::vector<double> pooled_eps(const gibbs::McmcSamples& samples) {
  std::vector<double> out;
  for (const auto& chain : samples.eps_draws)
    out.insert(out.end(), chain.begin(), chain.end());
  return out;
}

}  // namespace

TEST_CASE("assaulted-count conditional equals the enumerated posterior") {
  // Enumerate P(nVA = k | pA, eps, data) directly from the three binomial
  // factors, then compare against the shifted-binomial form the sweep
  // draws from: nVI + Binom(nV - nVI, pA*eps / (1 - pA*(1-eps))).
  for (const double assault : {0.1, 0.3, 0.62}) {
    for (const double eps : {0.15, 0.5, 0.88}) {
      std::vector<double> enumerated(6, 0.0);
      double total = 0.0;
      for (std::int64_t k = kTiny.vaccine_infected; k <= kTiny.vaccine_total; ++k) {
        const double w =
            testsupport::binomial_pmf_direct(kTiny.vaccine_total, k, assault) *
            testsupport::binomial_pmf_direct(k, kTiny.vaccine_infected, 1.0 - eps);
        enumerated[static_cast<std::size_t>(k)] = w;
        total += w;
      }
      const double theta = assault * eps / (1.0 - assault * (1.0 - eps));
      for (std::int64_t k = kTiny.vaccine_infected; k <= kTiny.vaccine_total; ++k) {
        const double direct = enumerated[static_cast<std::size_t>(k)] / total;
        const double shifted = testsupport::binomial_pmf_direct(
            kTiny.vaccine_total - kTiny.vaccine_infected, k - kTiny.vaccine_infected,
            theta);
        CHECK(direct == doctest::Approx(shifted).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("conjugate conditionals match the rejection-sampling oracle") {
  const auto kept = testsupport::rejection_sample(kTiny, 3000000, 2718);
  REQUIRE(kept.eps.size() > 30000);

  // Group the accepted joint draws by the latent assaulted count and
  // compare conditional moments with the Beta forms the sweep uses.
  std::map<std::int64_t, std::vector<double>> assault_by_k, eps_by_k;
  for (std::size_t i = 0; i < kept.eps.size(); ++i) {
    assault_by_k[kept.assaulted[i]].push_back(kept.assault[i]);
    eps_by_k[kept.assaulted[i]].push_back(kept.eps[i]);
  }
  for (const auto& [k, values] : assault_by_k) {
    if (values.size() < 2000) continue;
    const beta::BetaParams expected{
        static_cast<double>(k + kTiny.placebo_infected) + 1.0,
        static_cast<double>((kTiny.vaccine_total - k) +
                            (kTiny.placebo_total - kTiny.placebo_infected)) +
            1.0};
    const auto moments = beta::beta_moments(expected);
    const double se = moments.sd / std::sqrt(static_cast<double>(values.size()));
    CHECK(std::fabs(testsupport::mean_of(values) - moments.mean) < 4.0 * se);
  }
  for (const auto& [k, values] : eps_by_k) {
    if (values.size() < 2000) continue;
    // 1-eps | nVA ~ Beta(nVI + 1, nVA - nVI + 1)
    const beta::BetaParams failure{
        static_cast<double>(kTiny.vaccine_infected) + 1.0,
        static_cast<double>(k - kTiny.vaccine_infected) + 1.0};
    const auto moments = beta::beta_moments(failure);
    const double se = moments.sd / std::sqrt(static_cast<double>(values.size()));
    CHECK(std::fabs((1.0 - testsupport::mean_of(values)) - moments.mean) < 4.0 * se);
  }
}

TEST_CASE("chain stationary distribution matches the rejection oracle") {
  const auto kept = testsupport::rejection_sample(kTiny, 4000000, 99);
  McmcConfig config;
  config.n_iter = 30000;
  config.burn_in = 2000;
  config.seed = 31;
  const auto samples = run_chains(kTiny, config);
  const auto draws = pooled_eps(samples);

  const double mcse = samples.diagnostics.at("eps").mcse;
  const double rej_se =
      testsupport::sd_of(kept.eps) / std::sqrt(static_cast<double>(kept.eps.size()));
  const double tol = 3.0 * std::sqrt(mcse * mcse + rej_se * rej_se);
  CHECK(std::fabs(testsupport::mean_of(draws) - testsupport::mean_of(kept.eps)) < tol);
  CHECK(std::fabs(testsupport::sd_of(draws) - testsupport::sd_of(kept.eps)) < 0.01);
}

TEST_CASE("draws respect their supports at every iteration") {
  McmcConfig config;
  config.n_iter = 4000;
  config.burn_in = 0;
  config.seed = 5;
  config.n_chains = 2;
  const auto counts = *model::find_builtin("az-ldsd");
  const auto samples = run_chains(counts, config);
  for (std::size_t c = 0; c < samples.eps_draws.size(); ++c) {
    for (double eps : samples.eps_draws[c]) {
      CHECK(eps >= 0.0);
      CHECK(eps <= 1.0);
    }
    for (double assault : samples.assault_draws[c]) {
      CHECK(assault >= 0.0);
      CHECK(assault <= 1.0);
    }
    for (auto assaulted : samples.assaulted_draws[c]) {
      CHECK(assaulted >= counts.vaccine_infected);
      CHECK(assaulted <= counts.vaccine_total);
    }
  }
}

TEST_CASE("identical config and counts give bit-identical samples") {
  McmcConfig config;
  config.n_iter = 3000;
  config.burn_in = 500;
  config.seed = 404;
  const auto counts = *model::find_builtin("moderna-1");
  const auto a = run_chains(counts, config);
  const auto b = run_chains(counts, config);
  CHECK(a.eps_draws == b.eps_draws);
  CHECK(a.assault_draws == b.assault_draws);
  CHECK(a.assaulted_draws == b.assaulted_draws);
}

TEST_CASE("severity counts never touch the efficacy chain (d-separation)") {
  McmcConfig config;
  config.n_iter = 5000;
  config.burn_in = 1000;
  config.seed = 777;
  auto with = *model::find_builtin("moderna-2");
  auto without = with;
  without.vaccine_severe.reset();
  without.placebo_severe.reset();
  const auto a = run_chains(with, config);
  const auto b = run_chains(without, config);
  CHECK(a.eps_draws == b.eps_draws);
  CHECK(a.assaulted_draws == b.assaulted_draws);
}

TEST_CASE("Moderna-2 chains reproduce the reference summaries") {
  McmcConfig config;
  config.seed = 20201130;
  const auto samples = run_chains(*model::find_builtin("moderna-2"), config);
  const auto summary = gibbs::summarize(samples, 0.9);
  CHECK(std::fabs(summary.mean - 0.935) < 0.003);
  CHECK(std::fabs(summary.sd - 0.019) < 0.003);

  double count_sum = 0.0, count_sq = 0.0, n = 0.0;
  for (const auto& chain : samples.assaulted_draws) {
    for (auto value : chain) {
      count_sum += static_cast<double>(value);
      count_sq += static_cast<double>(value) * static_cast<double>(value);
      n += 1.0;
    }
  }
  const double mean_assaulted = count_sum / n;
  const double sd_assaulted = std::sqrt((count_sq - count_sum * count_sum / n) / (n - 1.0));
  CHECK(std::fabs(mean_assaulted - 185.0) < 2.0);
  CHECK(std::fabs(sd_assaulted - 19.0) < 2.0);
}

TEST_CASE("AstraZeneca LD-SD chains match the reference row") {
  McmcConfig config;
  config.seed = 1123;
  const auto samples = run_chains(*model::find_builtin("az-ldsd"), config);
  const auto summary = gibbs::summarize(samples, 0.9);
  CHECK(std::fabs(summary.mean - 0.861) < 0.006);
  CHECK(std::fabs(summary.ci_low - 0.678) < 0.015);
  CHECK(std::fabs(summary.ci_high - 0.964) < 0.015);
}

TEST_CASE("tail frequencies: Pfizer high, AstraZeneca SD-SD zero") {
  McmcConfig config;
  config.seed = 8;
  const auto pfizer = gibbs::summarize(run_chains(*model::find_builtin("pfizer"), config), 0.9);
  CHECK(std::fabs(pfizer.tail_prob - 0.974) < 0.01);

  const auto az = gibbs::summarize(run_chains(*model::find_builtin("az-sdsd"), config), 0.9);
  CHECK(az.tail_prob < 0.002);
}

TEST_CASE("Pfizer MCSE stays below 1e-3 at the default budget") {
  McmcConfig config;
  config.seed = 9;
  const auto samples = run_chains(*model::find_builtin("pfizer"), config);
  CHECK(samples.diagnostics.at("eps").mcse < 0.001);
  CHECK(samples.converged);
}

TEST_CASE("MCMC mean agrees with the exact engine within 3 MCSE") {
  McmcConfig config;
  config.seed = 55;
  for (const char* label : {"moderna-2", "az-sdsd"}) {
    const auto& counts = *model::find_builtin(label);
    const auto samples = run_chains(counts, config);
    const auto mcmc = gibbs::summarize(samples, 0.9);
    const auto truth = exact::posterior_summary(exact::posterior_density(counts, 2001));
    const double mcse = samples.diagnostics.at("eps").mcse;
    CHECK(std::fabs(mcmc.mean - truth.mean) < 3.0 * mcse);
  }
}

TEST_CASE("diagnostics conventions and guards") {
  // Two identical constant chains: R-hat 1 by convention.
  const std::vector<std::vector<double>> constant(2, std::vector<double>(100, 0.5));
  const auto diag = gibbs::chain_diagnostics(constant);
  CHECK(diag.rhat == 1.0);
  CHECK(diag.mcse == 0.0);

  // Independent uniform chains: near-perfect mixing.
  numerics::Rng rng(321, 0);
  std::vector<std::vector<double>> iid(4, std::vector<double>(5000));
  for (auto& chain : iid)
    for (auto& x : chain) x = rng.uniform();
  const auto good = gibbs::chain_diagnostics(iid);
  CHECK(good.rhat < 1.01);
  CHECK(good.ess > 0.5 * 4 * 5000);

  CHECK_THROWS_AS(gibbs::chain_diagnostics({{1.0, 2.0, 3.0, 4.0}}), std::domain_error);
}

TEST_CASE("summarize handles a constant chain") {
  gibbs::McmcSamples samples;
  samples.eps_draws = {std::vector<double>(50, 0.5), std::vector<double>(50, 0.5)};
  const auto summary = gibbs::summarize(samples, 0.9);
  CHECK(summary.mean == doctest::Approx(0.5));
  CHECK(summary.sd == 0.0);
  CHECK(summary.mode == doctest::Approx(0.5));
}

TEST_CASE("config validation") {
  McmcConfig config;
  config.n_iter = 100;
  config.burn_in = 100;
  CHECK_THROWS_AS(run_chains(kTiny, config), std::domain_error);
  config.burn_in = 10;
  config.thin = 0;
  CHECK_THROWS_AS(run_chains(kTiny, config), std::domain_error);
  config.thin = 1;
  config.n_chains = 1;
  CHECK_THROWS_AS(run_chains(kTiny, config), std::domain_error);
}
