// vaxinfer: Bayesian inference of vaccine efficacy from trial counts,
// posterior-predictive forecasting and severity analysis.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vaxinfer/beta_dist.hpp"
#include "vaxinfer/exact.hpp"
#include "vaxinfer/forecast.hpp"
#include "vaxinfer/gibbs.hpp"
#include "vaxinfer/numerics.hpp"
#include "vaxinfer/report.hpp"
#include "vaxinfer/severity.hpp"
#include "vaxinfer/svg_plot.hpp"
#include "vaxinfer/trial_data.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vaxinfer;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr std::uint64_t kDefaultSeed = 42;

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_seed) {
  if (flag_seed) return *flag_seed;
  if (const char* env = std::getenv("VAXINFER_SEED")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return value;
    throw std::domain_error("VAXINFER_SEED is not an unsigned integer");
  }
  return kDefaultSeed;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
}

model::DatasetFormat format_for(const std::string& name, const std::string& flag) {
  if (flag == "json") return model::DatasetFormat::kJson;
  if (flag == "csv") return model::DatasetFormat::kCsv;
  if (name.size() >= 4 && name.substr(name.size() - 4) == ".csv")
    return model::DatasetFormat::kCsv;
  return model::DatasetFormat::kJson;
}

/// Builtin label or dataset file; files with several records need --label.
model::TrialCounts resolve_dataset(const std::string& data, const std::string& format,
                                   const std::string& label) {
  if (fs::exists(data)) {
    std::ifstream in(data, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    const auto trials = model::load_dataset(text, format_for(data, format));
    if (trials.empty()) throw std::domain_error("dataset file holds no records");
    if (!label.empty()) {
      for (const auto& t : trials)
        if (t.label == label) return t;
      throw std::domain_error("no record labelled '" + label + "' in " + data);
    }
    if (trials.size() > 1)
      throw std::domain_error("dataset holds several records; pick one with --label");
    return trials.front();
  }
  if (const auto* builtin = model::find_builtin(data)) return *builtin;
  throw std::domain_error("unknown dataset '" + data +
                          "' (not a builtin label, not a file)");
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

struct InferOptions {
  std::string data;
  std::string label;
  std::string format = "auto";
  std::string engine = "both";
  std::size_t grid = 2001;
  gibbs::McmcConfig mcmc;
  std::optional<std::uint64_t> seed;
  double tail_threshold = 0.9;
  std::string out_dir = ".";
  bool emit_density_csv = false;
  bool emit_density_svg = false;
};

int run_infer(const InferOptions& opt) {
  const auto counts = resolve_dataset(opt.data, opt.format, opt.label);
  const std::uint64_t seed = resolve_seed(opt.seed);
  const bool want_exact = opt.engine == "exact" || opt.engine == "both";
  const bool want_gibbs = opt.engine == "gibbs" || opt.engine == "both";

  report::ReportInputs inputs;
  inputs.dataset_label = counts.label;
  inputs.engine = opt.engine == "exact"   ? report::Engine::kExact
                  : opt.engine == "gibbs" ? report::Engine::kGibbs
                                          : report::Engine::kBoth;
  inputs.tail_threshold = opt.tail_threshold;
  inputs.seed = seed;

  std::optional<exact::EfficacyPosterior> post;
  if (want_exact) {
    post = exact::posterior_density(counts, opt.grid);
    inputs.exact_summary = exact::posterior_summary(*post, opt.tail_threshold);
    try {
      inputs.exact_fit = beta::fit_posterior(*inputs.exact_summary);
    } catch (const std::domain_error&) {
      inputs.exact_fit = std::nullopt;
    }
  }
  if (want_gibbs) {
    gibbs::McmcConfig config = opt.mcmc;
    config.seed = seed;
    config.tail_threshold = opt.tail_threshold;
    const auto samples = gibbs::run_chains(counts, config);
    inputs.gibbs_summary = gibbs::summarize(samples, opt.tail_threshold);
    try {
      inputs.gibbs_fit = beta::fit_posterior(*inputs.gibbs_summary);
    } catch (const std::domain_error&) {
      inputs.gibbs_fit = std::nullopt;
    }
    inputs.diagnostics = samples.diagnostics;
    inputs.converged = samples.converged;
    double count_sum = 0.0, count_sq = 0.0, n_draws = 0.0;
    for (const auto& chain : samples.assaulted_draws) {
      for (const auto value : chain) {
        count_sum += static_cast<double>(value);
        count_sq += static_cast<double>(value) * static_cast<double>(value);
        n_draws += 1.0;
      }
    }
    if (n_draws > 1.0) {
      inputs.assaulted_mean = count_sum / n_draws;
      inputs.assaulted_sd =
          std::sqrt(std::max(0.0, (count_sq - count_sum * count_sum / n_draws) /
                                      (n_draws - 1.0)));
    }
    if (!samples.converged)
      std::cerr << "warning: MCMC did not converge (R-hat above 1.05)\n";
  }

  inputs.config = {{"engine", opt.engine},
                   {"grid", opt.grid},
                   {"n_chains", opt.mcmc.n_chains},
                   {"n_iter", opt.mcmc.n_iter},
                   {"burn_in", opt.mcmc.burn_in},
                   {"thin", opt.mcmc.thin},
                   {"tail_threshold", opt.tail_threshold},
                   {"data", opt.data}};

  const json doc = report::build_report(inputs);
  fs::create_directories(opt.out_dir);
  write_file(fs::path(opt.out_dir) / "report.json", doc.dump(2) + "\n");

  if (post && opt.emit_density_csv)
    write_file(fs::path(opt.out_dir) / "density.csv", report::density_csv(*post));
  if (post && opt.emit_density_svg) {
    write_file(fs::path(opt.out_dir) / "density.svg",
               svg::density_svg(*post, *inputs.exact_summary,
                                counts.label + " efficacy posterior"));
  }

  // The headline is always the mean: that is the probability a newly
  // vaccinated person is shielded, which the mode does not carry.
  const auto& headline = inputs.exact_summary ? *inputs.exact_summary
                                              : *inputs.gibbs_summary;
  std::cout << "efficacy (posterior mean) = " << format_fixed(headline.mean, 3) << "\n";
  return kExitOk;
}

struct PredictOptions {
  std::int64_t cohort = 0;
  double assault_mean = 0.0;
  double assault_sd = 0.0;
  std::optional<double> eps_point;
  std::optional<double> eps_mean;
  std::optional<double> eps_sd;
  std::string from_report;
  bool exact_eps = false;
  std::int64_t samples = 1000000;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

forecast::EpsSource resolve_eps(const PredictOptions& opt) {
  const int sources = (opt.eps_point ? 1 : 0) + (opt.eps_mean ? 1 : 0) +
                      (opt.from_report.empty() ? 0 : 1);
  if (sources != 1)
    throw std::domain_error(
        "pick exactly one efficacy source: --eps, --eps-mean/--eps-sd or --from-report");

  if (opt.eps_point) return *opt.eps_point;
  if (opt.eps_mean) {
    if (opt.exact_eps || !opt.eps_sd || *opt.eps_sd == 0.0) return *opt.eps_mean;
    return beta::beta_from_moments(*opt.eps_mean, *opt.eps_sd);
  }
  std::ifstream in(opt.from_report, std::ios::binary);
  if (!in) throw std::domain_error("cannot read report " + opt.from_report);
  json doc;
  in >> doc;
  report::validate_report(doc);
  if (opt.exact_eps || doc["beta_fit"].is_null())
    return doc["summary"]["mean"].get<double>();
  return beta::BetaParams{doc["beta_fit"]["r"].get<double>(),
                          doc["beta_fit"]["s"].get<double>()};
}

int run_predict(const PredictOptions& opt) {
  forecast::ForecastSpec spec;
  spec.cohort_size = opt.cohort;
  spec.assault_mean = opt.assault_mean;
  spec.assault_sd = opt.assault_sd;
  spec.eps = resolve_eps(opt);
  spec.n_samples = opt.samples;
  spec.seed = resolve_seed(opt.seed);

  const auto mc = forecast::forecast_mc(spec);
  const auto approx = forecast::forecast_approx(spec);

  json doc;
  doc["monte_carlo"] = {{"mean", mc.mean}, {"sd", mc.sd}};
  if (mc.p_overall) doc["monte_carlo"]["p_overall"] = *mc.p_overall;
  doc["approximation"] = {{"mean", approx.mean}, {"sd", approx.sd}};
  doc["spec"] = {{"cohort", spec.cohort_size},
                 {"assault_mean", spec.assault_mean},
                 {"assault_sd", spec.assault_sd},
                 {"n_samples", spec.n_samples},
                 {"seed", spec.seed}};
  if (const auto* fixed = std::get_if<double>(&spec.eps)) {
    doc["spec"]["eps"] = *fixed;
  } else {
    const auto& params = std::get<beta::BetaParams>(spec.eps);
    doc["spec"]["eps_beta"] = {{"r", params.r}, {"s", params.s}};
  }

  fs::create_directories(opt.out_dir);
  write_file(fs::path(opt.out_dir) / "forecast.json", doc.dump(2) + "\n");
  write_file(fs::path(opt.out_dir) / "forecast.csv", report::forecast_csv(mc.histogram));

  std::cout << "predicted infectees: mean = " << format_fixed(mc.mean, 1)
            << ", sd = " << format_fixed(mc.sd, 1) << " (Monte Carlo); mean = "
            << format_fixed(approx.mean, 1) << ", sd = " << format_fixed(approx.sd, 1)
            << " (approximation)\n";
  if (mc.p_overall)
    std::cout << "overall infection probability p_ov = " << *mc.p_overall << "\n";
  return kExitOk;
}

struct SeverityOptions {
  std::string data;
  std::string label;
  std::string in_format = "auto";
  std::string format = "json";
  std::string out_dir = ".";
  std::int64_t difference_draws = 0;
  std::optional<std::uint64_t> seed;
};

int run_severity(const SeverityOptions& opt) {
  const auto counts = resolve_dataset(opt.data, opt.in_format, opt.label);
  const auto posts = severity::severity_report(counts);
  const auto vaccine = beta::beta_moments(posts.vaccine_arm);
  const auto placebo = beta::beta_moments(posts.placebo_arm);
  const auto diff = severity::difference_summary(posts.vaccine_arm, posts.placebo_arm);

  fs::create_directories(opt.out_dir);
  if (opt.format == "json") {
    json doc;
    doc["dataset_label"] = counts.label;
    doc["vaccine_arm"] = {{"r", posts.vaccine_arm.r},
                          {"s", posts.vaccine_arm.s},
                          {"mean", vaccine.mean},
                          {"sd", vaccine.sd}};
    doc["placebo_arm"] = {{"r", posts.placebo_arm.r},
                          {"s", posts.placebo_arm.s},
                          {"mean", placebo.mean},
                          {"sd", placebo.sd}};
    doc["difference"] = {{"mean", diff.mean}, {"sd", diff.sd}};
    doc["vaccine_severe_free_next"] = posts.vaccine_severe_free_next;
    write_file(fs::path(opt.out_dir) / "severity.json", doc.dump(2) + "\n");
  } else {
    std::string csv = "arm,r,s,mean,sd\n";
    char line[160];
    std::snprintf(line, sizeof line, "vaccine,%.9g,%.9g,%.9g,%.9g\n",
                  posts.vaccine_arm.r, posts.vaccine_arm.s, vaccine.mean, vaccine.sd);
    csv += line;
    std::snprintf(line, sizeof line, "placebo,%.9g,%.9g,%.9g,%.9g\n",
                  posts.placebo_arm.r, posts.placebo_arm.s, placebo.mean, placebo.sd);
    csv += line;
    std::snprintf(line, sizeof line, "difference,,,%.9g,%.9g\n", diff.mean, diff.sd);
    csv += line;
    write_file(fs::path(opt.out_dir) / "severity.csv", csv);
  }

  if (opt.difference_draws > 0) {
    numerics::Rng rng(resolve_seed(opt.seed), 0);
    const auto draws = severity::difference_samples(
        posts.vaccine_arm, posts.placebo_arm,
        static_cast<std::size_t>(opt.difference_draws), rng);
    std::map<std::int64_t, std::int64_t> hist;
    for (double d : draws) ++hist[static_cast<std::int64_t>(std::lround(d * 100.0))];
    std::string csv = "difference_centile,count\n";
    for (const auto& [bin, count] : hist)
      csv += std::to_string(bin) + "," + std::to_string(count) + "\n";
    write_file(fs::path(opt.out_dir) / "difference.csv", csv);
  }

  std::cout << counts.label << " severe-form probabilities:\n"
            << "  vaccine arm: Beta(" << posts.vaccine_arm.r << ", " << posts.vaccine_arm.s
            << ")  mean " << format_fixed(vaccine.mean, 3) << " +- "
            << format_fixed(vaccine.sd, 3) << "\n"
            << "  placebo arm: Beta(" << posts.placebo_arm.r << ", " << posts.placebo_arm.s
            << ")  mean " << format_fixed(placebo.mean, 3) << " +- "
            << format_fixed(placebo.sd, 3) << "\n"
            << "  difference (vaccine - placebo): " << format_fixed(diff.mean, 3)
            << " +- " << format_fixed(diff.sd, 3) << "\n"
            << "  P(next vaccine-arm infectee severe-free) = "
            << format_fixed(posts.vaccine_severe_free_next, 3) << "\n";
  return kExitOk;
}

struct ReshapeOptions {
  double flat_r = 0.0, flat_s = 0.0, prior_r = 1.0, prior_s = 1.0;
  std::string format = "json";
  std::string out_dir;
};

int run_reshape(const ReshapeOptions& opt) {
  const auto reshaped =
      beta::reshape_with_prior({opt.flat_r, opt.flat_s}, {opt.prior_r, opt.prior_s});
  const auto moments = beta::beta_moments(reshaped);
  if (!opt.out_dir.empty()) {
    fs::create_directories(opt.out_dir);
    if (opt.format == "json") {
      const json doc = {{"r", reshaped.r},
                        {"s", reshaped.s},
                        {"mean", moments.mean},
                        {"sd", moments.sd}};
      write_file(fs::path(opt.out_dir) / "reshape.json", doc.dump(2) + "\n");
    } else {
      char line[160];
      std::snprintf(line, sizeof line, "r,s,mean,sd\n%.9g,%.9g,%.9g,%.9g\n", reshaped.r,
                    reshaped.s, moments.mean, moments.sd);
      write_file(fs::path(opt.out_dir) / "reshape.csv", line);
    }
  }
  std::cout << "reshaped Beta(" << reshaped.r << ", " << reshaped.s << "): mean "
            << format_fixed(moments.mean, 4) << " +- " << format_fixed(moments.sd, 4)
            << "\n";
  return kExitOk;
}

struct SuccessionOptions {
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  std::string format = "json";
  std::string out_dir;
};

int run_succession(const SuccessionOptions& opt) {
  const double prob = beta::rule_of_succession(opt.successes, opt.trials);
  if (!opt.out_dir.empty()) {
    fs::create_directories(opt.out_dir);
    if (opt.format == "json") {
      const json doc = {{"successes", opt.successes},
                        {"trials", opt.trials},
                        {"probability", prob}};
      write_file(fs::path(opt.out_dir) / "succession.json", doc.dump(2) + "\n");
    } else {
      char line[120];
      std::snprintf(line, sizeof line, "successes,trials,probability\n%" PRId64
                    ",%" PRId64 ",%.9g\n", opt.successes, opt.trials, prob);
      write_file(fs::path(opt.out_dir) / "succession.csv", line);
    }
  }
  std::cout << format_fixed(prob, 4) << "\n";
  return kExitOk;
}

struct DesignStudyOptions {
  std::string data = "pfizer";
  std::int64_t vaccine_total = 0;
  std::int64_t placebo_total = 0;
  double eps = 0.95;
  double assault = 0.0;
  double reduction = 3.0;
  std::int64_t replications = 200;
  std::size_t grid = 1001;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  std::string out_dir = ".";
};

int run_design_study(DesignStudyOptions opt) {
  if (opt.vaccine_total == 0 || opt.placebo_total == 0) {
    const auto counts = resolve_dataset(opt.data, "auto", "");
    if (opt.vaccine_total == 0) opt.vaccine_total = counts.vaccine_total;
    if (opt.placebo_total == 0) opt.placebo_total = counts.placebo_total;
    // Calibrate the assault rate so the expected placebo infections match
    // the observed trial.
    if (opt.assault == 0.0)
      opt.assault = static_cast<double>(counts.placebo_infected) /
                    static_cast<double>(counts.placebo_total);
  }
  if (opt.assault == 0.0)
    throw std::domain_error("--pa is required with explicit arm sizes");
  if (!(opt.reduction > 1.0))
    throw std::domain_error("--reduction must exceed 1");

  const std::uint64_t seed = resolve_seed(opt.seed);
  const auto baseline =
      forecast::design_study(opt.vaccine_total, opt.placebo_total, opt.eps, opt.assault,
                             opt.replications, seed, opt.grid);

  // Shrink the placebo arm, keep the trial size constant.
  const auto reduced_placebo =
      static_cast<std::int64_t>(std::llround(opt.placebo_total / opt.reduction));
  const auto reduced_vaccine = opt.vaccine_total + (opt.placebo_total - reduced_placebo);
  const auto reduced = forecast::design_study(reduced_vaccine, reduced_placebo, opt.eps,
                                              opt.assault, opt.replications, seed + 1,
                                              opt.grid);
  const double ratio = reduced.mean_sd_eps / baseline.mean_sd_eps;

  fs::create_directories(opt.out_dir);
  if (opt.format == "json") {
    json doc;
    doc["baseline"] = {{"vaccine_total", opt.vaccine_total},
                       {"placebo_total", opt.placebo_total},
                       {"mean_sd_eps", baseline.mean_sd_eps}};
    doc["reduced"] = {{"vaccine_total", reduced_vaccine},
                      {"placebo_total", reduced_placebo},
                      {"mean_sd_eps", reduced.mean_sd_eps}};
    doc["sd_ratio"] = ratio;
    doc["true_eps"] = opt.eps;
    doc["assault_prob"] = opt.assault;
    doc["replications"] = opt.replications;
    doc["seed"] = seed;
    write_file(fs::path(opt.out_dir) / "design_study.json", doc.dump(2) + "\n");
  } else {
    std::string csv = "replication,baseline_sd,reduced_sd\n";
    for (std::size_t i = 0; i < baseline.per_replication.size(); ++i) {
      char line[120];
      std::snprintf(line, sizeof line, "%zu,%.9g,%.9g\n", i,
                    baseline.per_replication[i], reduced.per_replication[i]);
      csv += line;
    }
    write_file(fs::path(opt.out_dir) / "design_study.csv", csv);
  }

  std::cout << "mean sd(eps): baseline " << format_fixed(baseline.mean_sd_eps, 4)
            << ", reduced placebo " << format_fixed(reduced.mean_sd_eps, 4)
            << ", ratio " << format_fixed(ratio, 3) << "\n";
  return kExitOk;
}

int run_list_data(const std::string& format) {
  std::cout << model::serialize_dataset(
      model::builtin_dataset(),
      format == "json" ? model::DatasetFormat::kJson : model::DatasetFormat::kCsv);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian vaccine-efficacy inference from trial counts"};
  app.set_version_flag("--version", report::kToolVersion);
  app.require_subcommand(1);

  InferOptions infer;
  auto* cmd_infer = app.add_subcommand(
      "infer", "Posterior of the efficacy for one dataset (exact and/or MCMC)");
  cmd_infer->add_option("--data", infer.data, "Builtin label or dataset file")->required();
  cmd_infer->add_option("--label", infer.label, "Record label inside a dataset file");
  cmd_infer->add_option("--format", infer.format, "Dataset file format")
      ->check(CLI::IsMember({"auto", "json", "csv"}));
  cmd_infer->add_option("--engine", infer.engine, "Inference engine")
      ->check(CLI::IsMember({"exact", "gibbs", "both"}));
  cmd_infer->add_option("--grid", infer.grid, "Grid points for the exact engine");
  cmd_infer->add_option("--chains", infer.mcmc.n_chains, "MCMC chains");
  cmd_infer->add_option("--iters", infer.mcmc.n_iter, "MCMC iterations per chain");
  cmd_infer->add_option("--burn-in", infer.mcmc.burn_in, "Discarded initial iterations");
  cmd_infer->add_option("--thin", infer.mcmc.thin, "Keep every thin-th draw");
  cmd_infer->add_option("--seed", infer.seed, "RNG seed (fallback: VAXINFER_SEED)");
  cmd_infer->add_option("--tail-threshold", infer.tail_threshold,
                        "Threshold for P(eps >= t)");
  cmd_infer->add_option("--out-dir", infer.out_dir, "Output directory");
  cmd_infer->add_flag("--density-csv", infer.emit_density_csv, "Write density.csv");
  cmd_infer->add_flag("--density-svg", infer.emit_density_svg, "Write density.svg");

  PredictOptions predict;
  auto* cmd_predict = app.add_subcommand(
      "predict", "Forecast infectees among a newly vaccinated cohort");
  cmd_predict->add_option("--n", predict.cohort, "Cohort size")->required();
  cmd_predict->add_option("--pa", predict.assault_mean, "Assault probability (mean)")
      ->required();
  cmd_predict->add_option("--pa-sd", predict.assault_sd, "Assault probability sd");
  cmd_predict->add_option("--eps", predict.eps_point, "Exact efficacy value");
  cmd_predict->add_option("--eps-mean", predict.eps_mean, "Efficacy mean");
  cmd_predict->add_option("--eps-sd", predict.eps_sd, "Efficacy sd");
  cmd_predict->add_option("--from-report", predict.from_report,
                          "Take the efficacy from a report.json");
  cmd_predict->add_flag("--exact-eps", predict.exact_eps,
                        "Collapse the efficacy to its mean");
  cmd_predict->add_option("--samples", predict.samples, "Monte Carlo samples");
  cmd_predict->add_option("--seed", predict.seed, "RNG seed (fallback: VAXINFER_SEED)");
  cmd_predict->add_option("--out-dir", predict.out_dir, "Output directory");

  SeverityOptions severity_opt;
  auto* cmd_severity = app.add_subcommand(
      "severity", "Severe-disease probability per arm (conjugate posteriors)");
  cmd_severity->add_option("--data", severity_opt.data, "Builtin label or dataset file")
      ->required();
  cmd_severity->add_option("--label", severity_opt.label, "Record label inside a file");
  cmd_severity->add_option("--in-format", severity_opt.in_format, "Dataset file format")
      ->check(CLI::IsMember({"auto", "json", "csv"}));
  cmd_severity->add_option("--format", severity_opt.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_severity->add_option("--out-dir", severity_opt.out_dir, "Output directory");
  cmd_severity->add_option("--difference-draws", severity_opt.difference_draws,
                           "Also sample the arm difference this many times");
  cmd_severity->add_option("--seed", severity_opt.seed,
                           "RNG seed (fallback: VAXINFER_SEED)");

  ReshapeOptions reshape;
  auto* cmd_reshape =
      app.add_subcommand("reshape", "Apply an expert Beta prior to a flat-prior fit");
  cmd_reshape->add_option("--flat-r", reshape.flat_r, "Flat-prior fit r")->required();
  cmd_reshape->add_option("--flat-s", reshape.flat_s, "Flat-prior fit s")->required();
  cmd_reshape->add_option("--prior-r", reshape.prior_r, "Expert prior r")->required();
  cmd_reshape->add_option("--prior-s", reshape.prior_s, "Expert prior s")->required();
  cmd_reshape->add_option("--format", reshape.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_reshape->add_option("--out-dir", reshape.out_dir, "Output directory (optional)");

  SuccessionOptions succession;
  auto* cmd_succession =
      app.add_subcommand("succession", "Laplace rule of succession (x+1)/(n+2)");
  cmd_succession->add_option("successes", succession.successes, "Observed successes")
      ->required();
  cmd_succession->add_option("trials", succession.trials, "Observed trials")->required();
  cmd_succession->add_option("--format", succession.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_succession->add_option("--out-dir", succession.out_dir,
                             "Output directory (optional)");

  DesignStudyOptions design;
  auto* cmd_design = app.add_subcommand(
      "design-study", "Posterior sd of efficacy when the placebo arm shrinks");
  cmd_design->add_option("--data", design.data,
                         "Builtin dataset supplying arm sizes and assault calibration");
  cmd_design->add_option("--n-v", design.vaccine_total, "Vaccine arm size (override)");
  cmd_design->add_option("--n-p", design.placebo_total, "Placebo arm size (override)");
  cmd_design->add_option("--eps", design.eps, "True efficacy for the simulation");
  cmd_design->add_option("--pa", design.assault, "True assault probability (override)");
  cmd_design->add_option("--reduction", design.reduction,
                         "Factor by which the placebo arm shrinks");
  cmd_design->add_option("--replications", design.replications, "Simulated trials");
  cmd_design->add_option("--grid", design.grid, "Grid points for the inner inference");
  cmd_design->add_option("--seed", design.seed, "RNG seed (fallback: VAXINFER_SEED)");
  cmd_design->add_option("--format", design.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_design->add_option("--out-dir", design.out_dir, "Output directory");

  std::string list_format = "csv";
  auto* cmd_list = app.add_subcommand("list-data", "Print the builtin datasets");
  cmd_list->add_option("--format", list_format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_infer->parsed()) return run_infer(infer);
    if (cmd_predict->parsed()) return run_predict(predict);
    if (cmd_severity->parsed()) return run_severity(severity_opt);
    if (cmd_reshape->parsed()) return run_reshape(reshape);
    if (cmd_succession->parsed()) return run_succession(succession);
    if (cmd_design->parsed()) return run_design_study(design);
    if (cmd_list->parsed()) return run_list_data(list_format);
  } catch (const std::domain_error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const model::FormatError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const model::ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
