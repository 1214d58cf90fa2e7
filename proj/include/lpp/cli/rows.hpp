#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lpp::cli {

/// Rows that do not match the declared schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ResultRow {
  std::string experiment;
  std::string event;
  std::string distribution;
  std::optional<double> t;
  std::optional<double> r;
  std::optional<int> n;
  std::optional<std::uint64_t> n_samples;
  std::string method;
  std::optional<double> p_hat;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::optional<double> fekete_bound;
  std::optional<double> mean;
  std::optional<double> std_err;
  std::optional<std::uint64_t> seed;
  std::optional<double> wall_time_s;
  std::string tool_version;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Column names in emission order.
const std::vector<std::string_view>& row_columns();

/// Shortest round-trip decimal; "inf"/"-inf" for infinities.
std::string format_real(double x);

std::string csv_header();
/// One RFC 4180 record terminated by CRLF.
std::string to_csv(const ResultRow& row);
/// One JSON object on a single line, terminated by '\n'. Absent fields are
/// null, infinities are the strings "inf"/"-inf".
std::string to_jsonl(const ResultRow& row);

/// Reads rows written as CSV (header required) or JSONL; the format is
/// detected from the first non-blank character.
std::vector<ResultRow> read_rows(std::istream& in);

}  // namespace lpp::cli
