#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "vaxinfer/beta_dist.hpp"
#include "vaxinfer/exact.hpp"
#include "vaxinfer/gibbs.hpp"
#include "vaxinfer/trial_data.hpp"

namespace vaxinfer::report {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "vaxinfer 1.0.0";

enum class Engine { kExact, kGibbs, kBoth };

std::string engine_name(Engine engine);

struct ReportInputs {
  std::string dataset_label;
  Engine engine = Engine::kBoth;
  double tail_threshold = 0.9;
  std::optional<model::MomentSummary> exact_summary;
  std::optional<beta::BetaParams> exact_fit;
  std::optional<model::MomentSummary> gibbs_summary;
  std::optional<beta::BetaParams> gibbs_fit;
  std::optional<std::map<std::string, gibbs::ChainDiagnostics>> diagnostics;
  std::optional<double> assaulted_mean;  ///< posterior mean of the latent assaulted count
  std::optional<double> assaulted_sd;
  bool converged = true;
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();  ///< effective run config
};

/// Assembles the report document. The result is schema-valid and, given
/// equal inputs, serializes to identical bytes (no timestamps).
nlohmann::json build_report(const ReportInputs& inputs);

/// Throws std::runtime_error when the document violates the report schema.
void validate_report(const nlohmann::json& doc);

/// CSV with header "eps,density".
std::string density_csv(const exact::EfficacyPosterior& post);

/// CSV with header "n_vi,count".
std::string forecast_csv(const std::map<std::int64_t, std::int64_t>& histogram);

}  // namespace vaxinfer::report
