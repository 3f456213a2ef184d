#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "vaxinfer/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const std::string command = std::string(VAXINFER_CLI_PATH) + " " + args + " > " +
                              out.string() + " 2> " + (dir / "stderr.txt").string();
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream buffer;
  buffer << in.rdbuf();
  result.stdout_text = buffer.str();
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("vaxinfer_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

}  // namespace

TEST_CASE("list-data prints the five builtin rows") {
  TempDir dir;
  const auto result = run_cli("list-data", dir.path);
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text.rfind("label,nV,nP,nVI,nPI,nVIs,nPIs\n", 0) == 0);
  CHECK(result.stdout_text.find("Pfizer,18198,18325,8,162,1,9") != std::string::npos);
  CHECK(std::count(result.stdout_text.begin(), result.stdout_text.end(), '\n') == 6);

  const auto as_json = run_cli("list-data --format json", dir.path);
  const auto doc = json::parse(as_json.stdout_text);
  CHECK(doc["trials"].size() == 5);
}

TEST_CASE("infer with the exact engine writes a valid report") {
  TempDir dir;
  const auto result = run_cli(
      "infer --data pfizer --engine exact --grid 501 --seed 7 --out-dir " +
          dir.path.string() + " --density-csv --density-svg",
      dir.path);
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text.rfind("efficacy (posterior mean) = 0.94", 0) == 0);

  const auto doc = json::parse(slurp(dir.path / "report.json"));
  CHECK_NOTHROW(vaxinfer::report::validate_report(doc));
  CHECK(doc["engine"] == "exact");
  CHECK(doc["summary"]["mean"].get<double>() == doctest::Approx(0.944).epsilon(2e-3));

  const auto csv = slurp(dir.path / "density.csv");
  CHECK(csv.rfind("eps,density\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 502);

  const auto svg = slurp(dir.path / "density.svg");
  CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("rerunning with identical flags reproduces identical bytes") {
  TempDir a, b;
  const std::string flags =
      "infer --data moderna-2 --engine gibbs --iters 3000 --burn-in 500 --seed 99 "
      "--out-dir ";
  CHECK(run_cli(flags + a.path.string(), a.path).exit_code == 0);
  CHECK(run_cli(flags + b.path.string(), b.path).exit_code == 0);
  CHECK(slurp(a.path / "report.json") == slurp(b.path / "report.json"));

  const auto doc = json::parse(slurp(a.path / "report.json"));
  CHECK(doc["engines"]["gibbs"]["diagnostics"].contains("eps"));
  CHECK(doc["provenance"]["seed"] == 99);
}

TEST_CASE("both engines in one report carry their absolute differences") {
  TempDir dir;
  const auto result = run_cli(
      "infer --data az-sdsd --engine both --grid 501 --iters 4000 --burn-in 1000 "
      "--seed 12 --out-dir " +
          dir.path.string(),
      dir.path);
  CHECK(result.exit_code == 0);
  const auto doc = json::parse(slurp(dir.path / "report.json"));
  CHECK_NOTHROW(vaxinfer::report::validate_report(doc));
  CHECK(doc["engine"] == "both");
  CHECK(doc.contains("difference"));
  CHECK(doc["difference"]["mean"].get<double>() < 0.02);
  CHECK(doc["engines"]["exact"]["summary"]["mean"].get<double>() ==
        doctest::Approx(doc["engines"]["gibbs"]["summary"]["mean"].get<double>())
            .epsilon(0.02));
}

TEST_CASE("predict output is byte-identical across reruns") {
  TempDir a, b;
  const std::string flags =
      "predict --n 100000 --pa 0.01 --eps-mean 0.944 --eps-sd 0.019 --samples 50000 "
      "--seed 21 --out-dir ";
  CHECK(run_cli(flags + a.path.string(), a.path).exit_code == 0);
  CHECK(run_cli(flags + b.path.string(), b.path).exit_code == 0);
  CHECK(slurp(a.path / "forecast.json") == slurp(b.path / "forecast.json"));
  CHECK(slurp(a.path / "forecast.csv") == slurp(b.path / "forecast.csv"));
}

TEST_CASE("unknown dataset labels exit with code 2") {
  TempDir dir;
  CHECK(run_cli("infer --data nosuch --out-dir " + dir.path.string(), dir.path)
            .exit_code == 2);
}

TEST_CASE("invalid flags exit with code 2") {
  TempDir dir;
  CHECK(run_cli("infer --engine warp --data pfizer", dir.path).exit_code == 2);
  CHECK(run_cli("nosuchcommand", dir.path).exit_code == 2);
  CHECK(run_cli("predict --n 100 --pa 2.0 --eps 0.9 --out-dir " + dir.path.string(),
                dir.path)
            .exit_code == 2);
}

TEST_CASE("predict reproduces the idealized binomial case") {
  TempDir dir;
  const auto result = run_cli(
      "predict --n 100000 --pa 0.01 --eps 0.944 --exact-eps --samples 200000 --seed 3 "
      "--out-dir " +
          dir.path.string(),
      dir.path);
  CHECK(result.exit_code == 0);
  const auto doc = json::parse(slurp(dir.path / "forecast.json"));
  CHECK(doc["monte_carlo"]["mean"].get<double>() == doctest::Approx(56.0).epsilon(0.02));
  CHECK(doc["monte_carlo"]["sd"].get<double>() == doctest::Approx(7.5).epsilon(0.05));
  CHECK(doc["monte_carlo"]["p_overall"].get<double>() ==
        doctest::Approx(0.00056).epsilon(1e-9));
  CHECK(doc["approximation"]["mean"].get<double>() == doctest::Approx(56.0));

  const auto csv = slurp(dir.path / "forecast.csv");
  CHECK(csv.rfind("n_vi,count\n", 0) == 0);
  std::int64_t total = 0;
  std::istringstream lines(csv.substr(csv.find('\n') + 1));
  std::string line;
  while (std::getline(lines, line)) {
    total += std::stoll(line.substr(line.find(',') + 1));
  }
  CHECK(total == 200000);
}

TEST_CASE("predict accepts an uncertain efficacy") {
  TempDir dir;
  const auto result = run_cli(
      "predict --n 100000 --pa 0.01 --eps-mean 0.944 --eps-sd 0.019 --samples 200000 "
      "--seed 4 --out-dir " +
          dir.path.string(),
      dir.path);
  CHECK(result.exit_code == 0);
  const auto doc = json::parse(slurp(dir.path / "forecast.json"));
  CHECK(doc["monte_carlo"]["sd"].get<double>() == doctest::Approx(20.4).epsilon(0.08));
  CHECK(!doc["monte_carlo"].contains("p_overall"));

  // Efficacy sources are mutually exclusive.
  CHECK(run_cli("predict --n 10 --pa 0.1 --eps 0.9 --eps-mean 0.9 --eps-sd 0.01",
                dir.path)
            .exit_code == 2);
}

TEST_CASE("predict can pull the efficacy from an earlier report") {
  TempDir dir;
  CHECK(run_cli("infer --data pfizer --engine exact --grid 501 --seed 7 --out-dir " +
                    dir.path.string(),
                dir.path)
            .exit_code == 0);
  const auto result = run_cli(
      "predict --n 100000 --pa 0.01 --from-report " +
          (dir.path / "report.json").string() + " --samples 100000 --seed 5 --out-dir " +
          dir.path.string(),
      dir.path);
  CHECK(result.exit_code == 0);
  const auto doc = json::parse(slurp(dir.path / "forecast.json"));
  CHECK(doc["spec"].contains("eps_beta"));
}

TEST_CASE("severity subcommand reports both arms and the headline") {
  TempDir dir;
  const auto result =
      run_cli("severity --data moderna-2 --out-dir " + dir.path.string(), dir.path);
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text.find("Beta(1, 12)") != std::string::npos);
  CHECK(result.stdout_text.find("0.923") != std::string::npos);
  const auto doc = json::parse(slurp(dir.path / "severity.json"));
  CHECK(doc["placebo_arm"]["r"] == 31.0);
  CHECK(doc["placebo_arm"]["s"] == 156.0);
  CHECK(doc["vaccine_severe_free_next"].get<double>() ==
        doctest::Approx(12.0 / 13.0).epsilon(1e-12));

  // Severity needs the optional counts.
  CHECK(run_cli("severity --data moderna-1 --out-dir " + dir.path.string(), dir.path)
            .exit_code == 2);
}

TEST_CASE("severity difference histogram lands in difference.csv") {
  TempDir dir;
  const auto result = run_cli(
      "severity --data pfizer --difference-draws 20000 --seed 2 --out-dir " +
          dir.path.string(),
      dir.path);
  CHECK(result.exit_code == 0);
  const auto csv = slurp(dir.path / "difference.csv");
  CHECK(csv.rfind("difference_centile,count\n", 0) == 0);
  std::int64_t total = 0;
  std::istringstream lines(csv.substr(csv.find('\n') + 1));
  std::string line;
  while (std::getline(lines, line)) total += std::stoll(line.substr(line.find(',') + 1));
  CHECK(total == 20000);
}

TEST_CASE("succession prints the Laplace value") {
  TempDir dir;
  const auto result = run_cli("succession 11 11", dir.path);
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text == "0.9231\n");
  CHECK(run_cli("succession 12 11", dir.path).exit_code == 2);
}

TEST_CASE("reshape with a flat prior is the identity") {
  TempDir dir;
  const auto result = run_cli(
      "reshape --flat-r 137.3 --flat-s 8.14 --prior-r 1 --prior-s 1", dir.path);
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text.find("Beta(137.3, 8.14)") != std::string::npos);
}

TEST_CASE("datasets load from files, selected by label") {
  TempDir dir;
  const fs::path file = dir.path / "mine.csv";
  std::ofstream(file) << "label,nV,nP,nVI,nPI,nVIs,nPIs\n"
                      << "custom-a,1000,1000,5,50,,\n"
                      << "custom-b,2000,2000,5,50,,\n";
  CHECK(run_cli("infer --data " + file.string() + " --label custom-a --engine exact "
                    "--grid 101 --out-dir " + dir.path.string(),
                dir.path)
            .exit_code == 0);
  // Ambiguous without --label.
  CHECK(run_cli("infer --data " + file.string() + " --engine exact --grid 101 "
                    "--out-dir " + dir.path.string(),
                dir.path)
            .exit_code == 2);
  // Validation failures carry exit code 2.
  std::ofstream(dir.path / "bad.csv")
      << "label,nV,nP,nVI,nPI,nVIs,nPIs\nbad,10,10,11,2,,\n";
  CHECK(run_cli("infer --data " + (dir.path / "bad.csv").string() + " --engine exact "
                    "--grid 101 --out-dir " + dir.path.string(),
                dir.path)
            .exit_code == 2);
}

TEST_CASE("csv output variants land next to the json ones") {
  TempDir dir;
  CHECK(run_cli("severity --data pfizer --format csv --out-dir " + dir.path.string(),
                dir.path)
            .exit_code == 0);
  const auto severity_csv = slurp(dir.path / "severity.csv");
  CHECK(severity_csv.rfind("arm,r,s,mean,sd\n", 0) == 0);
  CHECK(severity_csv.find("vaccine,2,8,") != std::string::npos);

  CHECK(run_cli("reshape --flat-r 10 --flat-s 4 --prior-r 3 --prior-s 2 --format csv "
                "--out-dir " +
                    dir.path.string(),
                dir.path)
            .exit_code == 0);
  CHECK(slurp(dir.path / "reshape.csv").rfind("r,s,mean,sd\n12,5,", 0) == 0);

  CHECK(run_cli("succession 30 30 --format json --out-dir " + dir.path.string(), dir.path)
            .exit_code == 0);
  const auto doc = json::parse(slurp(dir.path / "succession.json"));
  CHECK(doc["probability"].get<double>() == doctest::Approx(31.0 / 32.0).epsilon(1e-12));
}

TEST_CASE("design-study compares baseline and reduced placebo arms") {
  TempDir dir;
  const auto result = run_cli(
      "design-study --n-v 2000 --n-p 2000 --pa 0.01 --eps 0.9 --replications 100 "
      "--grid 301 --seed 6 --out-dir " +
          dir.path.string(),
      dir.path);
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text.find("ratio") != std::string::npos);
  const auto doc = json::parse(slurp(dir.path / "design_study.json"));
  CHECK(doc["baseline"]["mean_sd_eps"].get<double>() > 0.0);
  CHECK(doc["reduced"]["placebo_total"] == 667);
  CHECK(doc["reduced"]["vaccine_total"] == 3333);
  CHECK(doc["sd_ratio"].get<double>() > 0.0);
}

TEST_CASE("VAXINFER_SEED provides the fallback seed") {
  TempDir dir;
  const std::string command = std::string("VAXINFER_SEED=31337 ") + VAXINFER_CLI_PATH +
                              " infer --data pfizer --engine exact --grid 301 --out-dir " +
                              dir.path.string() + " >/dev/null 2>/dev/null";
  CHECK(std::system(command.c_str()) == 0);
  const auto doc = json::parse(slurp(dir.path / "report.json"));
  CHECK(doc["provenance"]["seed"] == 31337);
}
