#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vaxinfer::model {

/// Observed counts of one trial arm pair. The placebo-arm assaulted count
/// is not stored: every assaulted placebo participant is infected, so it
/// equals placebo_infected by construction.
struct TrialCounts {
  std::string label;
  std::int64_t vaccine_total = 0;    ///< participants in the vaccine arm
  std::int64_t placebo_total = 0;    ///< participants in the placebo arm
  std::int64_t vaccine_infected = 0;
  std::int64_t placebo_infected = 0;
  std::optional<std::int64_t> vaccine_severe;  ///< severe cases among vaccine-arm infectees
  std::optional<std::int64_t> placebo_severe;

  bool has_severity() const { return vaccine_severe && placebo_severe; }
  bool operator==(const TrialCounts&) const = default;
};

/// Distribution summary: mean, standard deviation, mode, central 95%
/// credible interval and tail probability P(value >= threshold).
struct MomentSummary {
  double mean = 0.0;
  double sd = 0.0;
  double mode = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double tail_prob = 0.0;
};

/// Dataset ingestion failure: malformed text, naming line/field.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Constraint violation, naming the record and the constraint.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DatasetFormat { kJson, kCsv };

/// Throws ValidationError unless all count invariants hold.
void validate(const TrialCounts& counts);

/// The five published trial rows bundled with the library.
const std::vector<TrialCounts>& builtin_dataset();

/// Case-insensitive lookup among builtin labels ("moderna-2", "pfizer", ...).
/// Returns nullptr when no builtin matches.
const TrialCounts* find_builtin(const std::string& label);

/// Parses and validates a dataset from JSON or CSV text. Unknown fields
/// are rejected; severity counts must be both present or both absent.
std::vector<TrialCounts> load_dataset(const std::string& text, DatasetFormat format);

/// Canonical serialization; load_dataset(serialize_dataset(x)) == x.
std::string serialize_dataset(const std::vector<TrialCounts>& trials,
                              DatasetFormat format);

}  // namespace vaxinfer::model
