#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lpp/estimators.hpp"

namespace lpp::cli {

/// Bad configuration or arguments; maps to exit status 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment {
  kVerify,
  kShape,
  kTail,
  kFekete,
  kMidpoint,
  kEndpoint,
  kCorner,
  kIdentity,
  kLeftTail,
  kUniformWalk,
};

std::string_view experiment_name(Experiment e) noexcept;
std::optional<Experiment> parse_experiment(std::string_view name) noexcept;

enum class OutputFormat { kCsv, kJsonl };

struct ExperimentSpec {
  Experiment experiment = Experiment::kTail;
  std::string distribution = "exp:1";
  std::optional<double> t;
  std::optional<double> r;
  std::optional<double> eps;
  std::optional<double> mu0;
  std::vector<int> n_list;
  std::vector<double> t_list;
  std::optional<std::uint64_t> samples;  // replicates per cell, or budget per side
  SamplingMethod method = DirectMethod{};
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::optional<int> k;
  std::optional<int> max_n;
  std::optional<int> fields;
  std::string out;  // empty: standard output
  OutputFormat format = OutputFormat::kCsv;
  bool omit_timing = false;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// Keys accepted in config files; flags use the same names with '_' -> '-'.
const std::vector<std::string_view>& config_keys();

/// Applies one `key = value` setting. Throws ValidationError on unknown keys
/// or unparsable values.
void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value);

/// Flat config: one `key = value` per line, '#' starts a comment, values may be
/// double-quoted.
ExperimentSpec parse_config(std::string_view text, ExperimentSpec base = {});

/// Inverse of parse_config: parse_config(emit_config(s)) == s.
std::string emit_config(const ExperimentSpec& spec);

/// Range checks for every field the experiment uses. Runs before sampling.
void validate(const ExperimentSpec& spec);

/// "a..b:step", "a..b" (step 1), "a,b,c" or a single integer.
std::vector<int> parse_int_list(std::string_view text);
/// Non-negative integer count, also in floating notation such as "1e6".
std::uint64_t parse_count(std::string_view text);
double parse_real(std::string_view text);

}  // namespace lpp::cli
