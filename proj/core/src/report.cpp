#include "vaxinfer/report.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vaxinfer::report {

namespace {

nlohmann::json summary_json(const model::MomentSummary& summary, double tail_threshold) {
  return {{"mean", summary.mean},       {"sd", summary.sd},
          {"mode", summary.mode},       {"ci_low", summary.ci_low},
          {"ci_high", summary.ci_high}, {"tail_threshold", tail_threshold},
          {"tail_prob", summary.tail_prob}};
}

nlohmann::json fit_json(const std::optional<beta::BetaParams>& fit) {
  if (!fit) return nullptr;
  return {{"r", fit->r}, {"s", fit->s}};
}

[[noreturn]] void schema_fail(const std::string& what) {
  throw std::runtime_error("report schema violation: " + what);
}

void check_summary(const nlohmann::json& node, const std::string& path) {
  if (!node.is_object()) schema_fail(path + " must be an object");
  for (const char* key :
       {"mean", "sd", "mode", "ci_low", "ci_high", "tail_threshold", "tail_prob"}) {
    if (!node.contains(key) || !node[key].is_number())
      schema_fail(path + "." + key + " must be a number");
    if (!std::isfinite(node[key].get<double>()))
      schema_fail(path + "." + key + " must be finite");
  }
}

void check_fit(const nlohmann::json& node, const std::string& path) {
  if (node.is_null()) return;  // infeasible moment fit
  if (!node.is_object() || !node.contains("r") || !node.contains("s"))
    schema_fail(path + " must hold shapes r and s");
  if (!(node["r"].is_number() && node["r"].get<double>() > 0.0) ||
      !(node["s"].is_number() && node["s"].get<double>() > 0.0))
    schema_fail(path + " shapes must be positive numbers");
}

void check_engine_block(const nlohmann::json& node, const std::string& path,
                        bool wants_diagnostics) {
  if (!node.is_object()) schema_fail(path + " must be an object");
  check_summary(node.at("summary"), path + ".summary");
  if (!node.contains("beta_fit")) schema_fail(path + ".beta_fit missing");
  check_fit(node["beta_fit"], path + ".beta_fit");
  if (wants_diagnostics) {
    if (!node.contains("diagnostics") || !node["diagnostics"].is_object())
      schema_fail(path + ".diagnostics must be an object");
    for (const auto& [variable, diag] : node["diagnostics"].items()) {
      for (const char* key : {"rhat", "ess", "mcse"}) {
        if (!diag.contains(key) || !diag[key].is_number())
          schema_fail(path + ".diagnostics." + variable + "." + key +
                      " must be a number");
      }
    }
    if (!node.contains("converged") || !node["converged"].is_boolean())
      schema_fail(path + ".converged must be a boolean");
  }
}

}  // namespace

std::string engine_name(Engine engine) {
  switch (engine) {
    case Engine::kExact: return "exact";
    case Engine::kGibbs: return "gibbs";
    case Engine::kBoth: return "both";
  }
  return "both";
}

nlohmann::json build_report(const ReportInputs& inputs) {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["dataset_label"] = inputs.dataset_label;
  doc["engine"] = engine_name(inputs.engine);

  nlohmann::json engines = nlohmann::json::object();
  if (inputs.exact_summary) {
    engines["exact"] = {{"summary", summary_json(*inputs.exact_summary, inputs.tail_threshold)},
                        {"beta_fit", fit_json(inputs.exact_fit)}};
  }
  if (inputs.gibbs_summary) {
    nlohmann::json block = {
        {"summary", summary_json(*inputs.gibbs_summary, inputs.tail_threshold)},
        {"beta_fit", fit_json(inputs.gibbs_fit)},
        {"converged", inputs.converged}};
    if (inputs.assaulted_mean) {
      block["n_assaulted"] = {{"mean", *inputs.assaulted_mean},
                              {"sd", inputs.assaulted_sd.value_or(0.0)}};
    }
    nlohmann::json diags = nlohmann::json::object();
    if (inputs.diagnostics) {
      for (const auto& [variable, diag] : *inputs.diagnostics) {
        diags[variable] = {{"rhat", diag.rhat}, {"ess", diag.ess}, {"mcse", diag.mcse}};
      }
    }
    block["diagnostics"] = diags;
    engines["gibbs"] = block;
  }
  doc["engines"] = engines;

  // The headline is the exact engine when it ran (the MCMC validates it).
  const auto& headline =
      inputs.exact_summary ? *inputs.exact_summary : inputs.gibbs_summary.value();
  doc["summary"] = summary_json(headline, inputs.tail_threshold);
  doc["beta_fit"] = fit_json(inputs.exact_summary ? inputs.exact_fit : inputs.gibbs_fit);

  if (inputs.exact_summary && inputs.gibbs_summary) {
    doc["difference"] = {
        {"mean", std::fabs(inputs.exact_summary->mean - inputs.gibbs_summary->mean)},
        {"sd", std::fabs(inputs.exact_summary->sd - inputs.gibbs_summary->sd)},
        {"mode", std::fabs(inputs.exact_summary->mode - inputs.gibbs_summary->mode)},
        {"ci_low", std::fabs(inputs.exact_summary->ci_low - inputs.gibbs_summary->ci_low)},
        {"ci_high",
         std::fabs(inputs.exact_summary->ci_high - inputs.gibbs_summary->ci_high)},
        {"tail_prob",
         std::fabs(inputs.exact_summary->tail_prob - inputs.gibbs_summary->tail_prob)}};
  }

  nlohmann::json warnings = nlohmann::json::array();
  if (!inputs.converged) warnings.push_back("MCMC did not converge: R-hat above 1.05");
  doc["warnings"] = warnings;

  doc["provenance"] = {{"seed", inputs.seed},
                       {"config", inputs.config},
                       {"tool_version", kToolVersion}};
  validate_report(doc);
  return doc;
}

void validate_report(const nlohmann::json& doc) {
  if (!doc.is_object()) schema_fail("document must be an object");
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer() ||
      doc["schema_version"].get<int>() != kSchemaVersion)
    schema_fail("schema_version must equal " + std::to_string(kSchemaVersion));
  if (!doc.contains("dataset_label") || !doc["dataset_label"].is_string())
    schema_fail("dataset_label must be a string");

  if (!doc.contains("engine") || !doc["engine"].is_string())
    schema_fail("engine must be a string");
  const std::string engine = doc["engine"].get<std::string>();
  if (engine != "exact" && engine != "gibbs" && engine != "both")
    schema_fail("engine must be one of exact|gibbs|both");

  check_summary(doc.at("summary"), "summary");
  if (!doc.contains("beta_fit")) schema_fail("beta_fit missing");
  check_fit(doc["beta_fit"], "beta_fit");

  if (!doc.contains("engines") || !doc["engines"].is_object())
    schema_fail("engines must be an object");
  const bool wants_exact = engine == "exact" || engine == "both";
  const bool wants_gibbs = engine == "gibbs" || engine == "both";
  if (wants_exact) check_engine_block(doc["engines"].at("exact"), "engines.exact", false);
  if (wants_gibbs) check_engine_block(doc["engines"].at("gibbs"), "engines.gibbs", true);
  if (engine == "both" && !doc.contains("difference"))
    schema_fail("difference required when both engines ran");

  if (!doc.contains("warnings") || !doc["warnings"].is_array())
    schema_fail("warnings must be an array");

  if (!doc.contains("provenance") || !doc["provenance"].is_object())
    schema_fail("provenance must be an object");
  const auto& prov = doc["provenance"];
  if (!prov.contains("seed") || !prov["seed"].is_number_unsigned())
    schema_fail("provenance.seed must be an unsigned integer");
  if (!prov.contains("config") || !prov["config"].is_object())
    schema_fail("provenance.config must be an object");
  if (!prov.contains("tool_version") || !prov["tool_version"].is_string())
    schema_fail("provenance.tool_version must be a string");
}

std::string density_csv(const exact::EfficacyPosterior& post) {
  std::ostringstream out;
  out << "eps,density\n";
  char line[80];
  for (std::size_t i = 0; i < post.grid.size(); ++i) {
    std::snprintf(line, sizeof line, "%.9g,%.12g\n", post.grid[i], post.density[i]);
    out << line;
  }
  return out.str();
}

std::string forecast_csv(const std::map<std::int64_t, std::int64_t>& histogram) {
  std::ostringstream out;
  out << "n_vi,count\n";
  for (const auto& [value, count] : histogram) {
    out << value << ',' << count << '\n';
  }
  return out.str();
}

}  // namespace vaxinfer::report
