#include "lpp/cli/rows.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <limits>
#include <set>

#include <json.hpp>

namespace lpp::cli {

namespace {

using Json = nlohmann::ordered_json;

// Row fields as strings, in column order; absent values are empty.
std::vector<std::string> cells(const ResultRow& row) {
  auto real = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  auto integer = [](const auto& v) { return v ? std::to_string(*v) : std::string(); };
  return {row.experiment, row.event,         row.distribution,      real(row.t),
          real(row.r),    integer(row.n),    integer(row.n_samples), row.method,
          real(row.p_hat), real(row.ci_low), real(row.ci_high),     real(row.fekete_bound),
          real(row.mean), real(row.std_err), integer(row.seed),     real(row.wall_time_s),
          row.tool_version};
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join_record(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  out += "\r\n";
  return out;
}

std::optional<double> read_real(const std::string& s, std::string_view column) {
  if (s.empty()) return std::nullopt;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw SchemaError("column " + std::string(column) + ": not a number: '" + s + "'");
  }
  return v;
}

template <class T>
std::optional<T> read_integer(const std::string& s, std::string_view column) {
  if (s.empty()) return std::nullopt;
  T v{};
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw SchemaError("column " + std::string(column) + ": not an integer: '" + s + "'");
  }
  return v;
}

ResultRow from_cells(const std::vector<std::string>& f) {
  const auto& cols = row_columns();
  if (f.size() != cols.size()) {
    throw SchemaError("expected " + std::to_string(cols.size()) + " fields, got " +
                      std::to_string(f.size()));
  }
  ResultRow row;
  row.experiment = f[0];
  row.event = f[1];
  row.distribution = f[2];
  row.t = read_real(f[3], cols[3]);
  row.r = read_real(f[4], cols[4]);
  row.n = read_integer<int>(f[5], cols[5]);
  row.n_samples = read_integer<std::uint64_t>(f[6], cols[6]);
  row.method = f[7];
  row.p_hat = read_real(f[8], cols[8]);
  row.ci_low = read_real(f[9], cols[9]);
  row.ci_high = read_real(f[10], cols[10]);
  row.fekete_bound = read_real(f[11], cols[11]);
  row.mean = read_real(f[12], cols[12]);
  row.std_err = read_real(f[13], cols[13]);
  row.seed = read_integer<std::uint64_t>(f[14], cols[14]);
  row.wall_time_s = read_real(f[15], cols[15]);
  row.tool_version = f[16];
  return row;
}

// RFC 4180 records; accepts LF as well as CRLF line breaks.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (field_started || !field.empty() || !record.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      record.clear();
      field.clear();
      field_started = false;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw SchemaError("unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

Json json_real(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  return *v;
}

std::string json_cell(const Json& v, std::string_view column) {
  if (v.is_null()) return {};
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return format_real(v.get<double>());
  throw SchemaError("column " + std::string(column) + ": unexpected JSON type");
}

}  // namespace

const std::vector<std::string_view>& row_columns() {
  static const std::vector<std::string_view> columns{
      "experiment", "event",  "distribution", "t",       "r",       "n",
      "n_samples",  "method", "p_hat",        "ci_low",  "ci_high", "fekete_bound",
      "mean",       "std_err", "seed",        "wall_time_s", "tool_version"};
  return columns;
}

std::string format_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::string csv_header() {
  std::vector<std::string> names(row_columns().begin(), row_columns().end());
  return join_record(names);
}

std::string to_csv(const ResultRow& row) { return join_record(cells(row)); }

std::string to_jsonl(const ResultRow& row) {
  auto integer = [](const auto& v) -> Json {
    if (!v) return nullptr;
    return *v;
  };
  auto text = [](const std::string& s) -> Json { return s.empty() ? Json(nullptr) : Json(s); };
  Json j;
  j["experiment"] = row.experiment;
  j["event"] = text(row.event);
  j["distribution"] = text(row.distribution);
  j["t"] = json_real(row.t);
  j["r"] = json_real(row.r);
  j["n"] = integer(row.n);
  j["n_samples"] = integer(row.n_samples);
  j["method"] = text(row.method);
  j["p_hat"] = json_real(row.p_hat);
  j["ci_low"] = json_real(row.ci_low);
  j["ci_high"] = json_real(row.ci_high);
  j["fekete_bound"] = json_real(row.fekete_bound);
  j["mean"] = json_real(row.mean);
  j["std_err"] = json_real(row.std_err);
  j["seed"] = integer(row.seed);
  j["wall_time_s"] = json_real(row.wall_time_s);
  j["tool_version"] = row.tool_version;
  return j.dump() + "\n";
}

std::vector<ResultRow> read_rows(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<ResultRow> rows;
  if (first == std::string::npos) return rows;

  if (text[first] == '{') {
    const auto& cols = row_columns();
    const std::set<std::string_view> known(cols.begin(), cols.end());
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      const auto line = text.substr(start, end - start);
      start = end + 1;
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      Json j;
      try {
        j = Json::parse(line);
      } catch (const Json::exception& e) {
        throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
      }
      if (!j.is_object()) throw SchemaError("line " + std::to_string(line_no) + ": not an object");
      for (const auto& item : j.items()) {
        if (!known.count(item.key())) {
          throw SchemaError("line " + std::to_string(line_no) + ": unknown field " + item.key());
        }
      }
      std::vector<std::string> f;
      for (auto col : cols) {
        const auto it = j.find(std::string(col));
        if (it == j.end()) {
          throw SchemaError("line " + std::to_string(line_no) + ": missing field " +
                            std::string(col));
        }
        f.push_back(json_cell(*it, col));
      }
      rows.push_back(from_cells(f));
    }
    return rows;
  }

  const auto records = parse_csv(text);
  const auto& cols = row_columns();
  const auto& header = records.front();
  bool header_ok = header.size() == cols.size();
  for (std::size_t i = 0; header_ok && i < cols.size(); ++i) header_ok = header[i] == cols[i];
  if (!header_ok) throw SchemaError("CSV header does not match the result-row schema");
  for (std::size_t i = 1; i < records.size(); ++i) {
    try {
      rows.push_back(from_cells(records[i]));
    } catch (const SchemaError& e) {
      throw SchemaError("record " + std::to_string(i) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace lpp::cli
