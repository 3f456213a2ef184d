#include "vaxinfer/trial_data.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

namespace vaxinfer::model {

namespace {

std::string normalize_label(const std::string& label) {
  std::string out;
  for (char ch : label) {
    if (std::isalnum(static_cast<unsigned char>(ch)))
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return out;
}

[[noreturn]] void fail_validation(const TrialCounts& counts, const std::string& what) {
  throw ValidationError("record '" + counts.label + "': " + what);
}

}  // namespace

void validate(const TrialCounts& counts) {
  if (counts.label.empty()) throw ValidationError("record with empty label");
  if (counts.vaccine_total < 0 || counts.placebo_total < 0)
    fail_validation(counts, "arm sizes must be non-negative");
  if (counts.vaccine_infected < 0 || counts.vaccine_infected > counts.vaccine_total)
    fail_validation(counts, "requires 0 <= nVI <= nV");
  if (counts.placebo_infected < 0 || counts.placebo_infected > counts.placebo_total)
    fail_validation(counts, "requires 0 <= nPI <= nP");
  if (counts.vaccine_severe.has_value() != counts.placebo_severe.has_value())
    fail_validation(counts, "severity counts must be both present or both absent");
  if (counts.vaccine_severe) {
    if (*counts.vaccine_severe < 0 || *counts.vaccine_severe > counts.vaccine_infected)
      fail_validation(counts, "requires 0 <= nVIs <= nVI");
    if (*counts.placebo_severe < 0 || *counts.placebo_severe > counts.placebo_infected)
      fail_validation(counts, "requires 0 <= nPIs <= nPI");
  }
}

const std::vector<TrialCounts>& builtin_dataset() {
  static const std::vector<TrialCounts> kTrials = {
      {"Moderna-1", 14134, 14073, 5, 90, std::nullopt, std::nullopt},
      {"Moderna-2", 14134, 14073, 11, 185, 0, 30},
      {"Pfizer", 18198, 18325, 8, 162, 1, 9},
      {"AstraZeneca LD-SD", 1367, 1374, 3, 30, std::nullopt, std::nullopt},
      {"AstraZeneca SD-SD", 4440, 4455, 27, 71, std::nullopt, std::nullopt},
  };
  return kTrials;
}

const TrialCounts* find_builtin(const std::string& label) {
  static const std::vector<std::pair<std::string, std::size_t>> kAliases = {
      {"moderna1", 0}, {"moderna2", 1}, {"pfizer", 2},
      {"azldsd", 3},   {"astrazenecaldsd", 3},
      {"azsdsd", 4},   {"astrazenecasdsd", 4},
  };
  const std::string key = normalize_label(label);
  for (const auto& [alias, index] : kAliases) {
    if (alias == key) return &builtin_dataset()[index];
  }
  return nullptr;
}

namespace {

const char* const kCsvHeader = "label,nV,nP,nVI,nPI,nVIs,nPIs";

std::int64_t require_count(const nlohmann::json& value, const std::string& field) {
  if (!value.is_number_integer())
    throw FormatError("field '" + field + "' must be an integer count");
  return value.get<std::int64_t>();
}

TrialCounts record_from_json(const nlohmann::json& entry, std::size_t index) {
  if (!entry.is_object())
    throw FormatError("trials[" + std::to_string(index) + "] is not an object");
  static const char* const kKnown[] = {"label", "nV", "nP", "nVI", "nPI", "nVIs", "nPIs"};
  for (auto it = entry.begin(); it != entry.end(); ++it) {
    if (std::find(std::begin(kKnown), std::end(kKnown), it.key()) == std::end(kKnown))
      throw FormatError("trials[" + std::to_string(index) + "]: unknown field '" +
                        it.key() + "'");
  }
  for (const char* req : {"label", "nV", "nP", "nVI", "nPI"}) {
    if (!entry.contains(req))
      throw FormatError("trials[" + std::to_string(index) + "]: missing field '" +
                        std::string(req) + "'");
  }
  TrialCounts counts;
  if (!entry["label"].is_string())
    throw FormatError("trials[" + std::to_string(index) + "]: label must be a string");
  counts.label = entry["label"].get<std::string>();
  counts.vaccine_total = require_count(entry["nV"], "nV");
  counts.placebo_total = require_count(entry["nP"], "nP");
  counts.vaccine_infected = require_count(entry["nVI"], "nVI");
  counts.placebo_infected = require_count(entry["nPI"], "nPI");
  if (entry.contains("nVIs")) counts.vaccine_severe = require_count(entry["nVIs"], "nVIs");
  if (entry.contains("nPIs")) counts.placebo_severe = require_count(entry["nPIs"], "nPIs");
  return counts;
}

std::vector<TrialCounts> load_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw FormatError(std::string("JSON parse failure: ") + err.what());
  }
  if (!doc.is_object() || !doc.contains("trials") || !doc["trials"].is_array())
    throw FormatError("expected a top-level object with a 'trials' array");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() != "trials") throw FormatError("unknown field '" + it.key() + "'");
  }
  std::vector<TrialCounts> out;
  std::size_t index = 0;
  for (const auto& entry : doc["trials"]) {
    TrialCounts counts = record_from_json(entry, index++);
    validate(counts);
    out.push_back(std::move(counts));
  }
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::int64_t parse_count_cell(const std::string& cell, int line_no, const char* field) {
  try {
    std::size_t used = 0;
    const long long value = std::stoll(cell, &used);
    if (used != cell.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw FormatError("line " + std::to_string(line_no) + ", field '" + field +
                      "': not an integer count");
  }
}

std::vector<TrialCounts> load_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<TrialCounts> out;
  int line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kCsvHeader)
        throw FormatError("line 1: expected header '" + std::string(kCsvHeader) + "'");
      saw_header = true;
      continue;
    }
    const auto cells = split_csv_line(line);
    if (cells.size() != 7)
      throw FormatError("line " + std::to_string(line_no) + ": expected 7 cells, got " +
                        std::to_string(cells.size()));
    TrialCounts counts;
    counts.label = cells[0];
    counts.vaccine_total = parse_count_cell(cells[1], line_no, "nV");
    counts.placebo_total = parse_count_cell(cells[2], line_no, "nP");
    counts.vaccine_infected = parse_count_cell(cells[3], line_no, "nVI");
    counts.placebo_infected = parse_count_cell(cells[4], line_no, "nPI");
    if (!cells[5].empty()) counts.vaccine_severe = parse_count_cell(cells[5], line_no, "nVIs");
    if (!cells[6].empty()) counts.placebo_severe = parse_count_cell(cells[6], line_no, "nPIs");
    validate(counts);
    out.push_back(std::move(counts));
  }
  return out;
}

}  // namespace

std::vector<TrialCounts> load_dataset(const std::string& text, DatasetFormat format) {
  return format == DatasetFormat::kJson ? load_json(text) : load_csv(text);
}

std::string serialize_dataset(const std::vector<TrialCounts>& trials,
                              DatasetFormat format) {
  if (format == DatasetFormat::kJson) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& counts : trials) {
      nlohmann::json entry{{"label", counts.label},
                           {"nV", counts.vaccine_total},
                           {"nP", counts.placebo_total},
                           {"nVI", counts.vaccine_infected},
                           {"nPI", counts.placebo_infected}};
      if (counts.vaccine_severe) entry["nVIs"] = *counts.vaccine_severe;
      if (counts.placebo_severe) entry["nPIs"] = *counts.placebo_severe;
      arr.push_back(std::move(entry));
    }
    return nlohmann::json{{"trials", arr}}.dump(2) + "\n";
  }
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& counts : trials) {
    out << counts.label << ',' << counts.vaccine_total << ',' << counts.placebo_total
        << ',' << counts.vaccine_infected << ',' << counts.placebo_infected << ',';
    if (counts.vaccine_severe) out << *counts.vaccine_severe;
    out << ',';
    if (counts.placebo_severe) out << *counts.placebo_severe;
    out << "\n";
  }
  return out.str();
}

}  // namespace vaxinfer::model
