#include "lpp/cli/experiment.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "lpp/cli/rows.hpp"
#include "lpp/distributions.hpp"
#include "lpp/passage.hpp"

namespace lpp::cli {

namespace {

constexpr std::array<std::pair<Experiment, std::string_view>, 10> kExperimentNames{{
    {Experiment::kVerify, "verify"},
    {Experiment::kShape, "shape"},
    {Experiment::kTail, "tail"},
    {Experiment::kFekete, "fekete"},
    {Experiment::kMidpoint, "midpoint"},
    {Experiment::kEndpoint, "endpoint"},
    {Experiment::kCorner, "corner"},
    {Experiment::kIdentity, "identity"},
    {Experiment::kLeftTail, "left-tail"},
    {Experiment::kUniformWalk, "uniform-walk"},
}};

constexpr int kMaxScale = 100000;
constexpr std::size_t kMaxListSize = 10000;
constexpr std::uint64_t kMaxSamples = 1'000'000'000'000ULL;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why) {
  std::ostringstream msg;
  msg << "invalid value '" << value << "' for " << key << ": " << why;
  throw ValidationError(msg.str());
}

int parse_int(std::string_view text) {
  text = trim(text);
  int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    throw ValidationError("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_u64(std::string_view text) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    throw ValidationError("not an unsigned integer: '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ValidationError("not a boolean: '" + std::string(text) + "'");
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    out.push_back(parse_real(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

TiltedMethod& tilted(ExperimentSpec& spec) {
  if (!std::holds_alternative<TiltedMethod>(spec.method)) spec.method = TiltedMethod{};
  return std::get<TiltedMethod>(spec.method);
}

template <class T>
std::string join(const std::vector<T>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_real(items[i]);
    } else {
      out += std::to_string(items[i]);
    }
  }
  return out;
}

}  // namespace

std::string_view experiment_name(Experiment e) noexcept {
  for (const auto& [kind, name] : kExperimentNames) {
    if (kind == e) return name;
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) noexcept {
  for (const auto& [kind, label] : kExperimentNames) {
    if (label == name) return kind;
  }
  return std::nullopt;
}

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys{
      "experiment", "dist",    "t",       "r",         "eps",    "mu0",   "n",
      "t_list",     "samples", "method",  "lambda",    "halfwidth", "spacing", "seed",
      "workers",    "k",       "max_n",   "fields",    "out",    "format", "omit_timing"};
  return keys;
}

double parse_real(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty() ||
      !std::isfinite(value)) {
    throw ValidationError("not a finite real number: '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_count(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.find_first_not_of("0123456789") == std::string_view::npos) {
    return parse_u64(text);
  }
  const double value = parse_real(text);
  if (value < 0.0 || value != std::floor(value) || value > 9.0e15) {
    throw ValidationError("not a non-negative integer count: '" + std::string(text) + "'");
  }
  return static_cast<std::uint64_t>(value);
}

std::vector<int> parse_int_list(std::string_view text) {
  text = trim(text);
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const int lo = parse_int(text.substr(0, dots));
    auto rest = text.substr(dots + 2);
    int step = 1;
    if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
      step = parse_int(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    const int hi = parse_int(rest);
    if (step <= 0) throw ValidationError("range step must be positive in '" + std::string(text) + "'");
    if (hi < lo) throw ValidationError("empty range '" + std::string(text) + "'");
    if ((static_cast<long long>(hi) - lo) / step + 1 > static_cast<long long>(kMaxListSize)) {
      throw ValidationError("range '" + std::string(text) + "' is too long");
    }
    for (long long v = lo; v <= hi; v += step) out.push_back(static_cast<int>(v));
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    out.push_back(parse_int(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view raw) {
  const std::string_view value = unquote(trim(raw));
  try {
    if (key == "experiment") {
      const auto e = parse_experiment(value);
      if (!e) bad_value(key, value, "unknown experiment");
      spec.experiment = *e;
    } else if (key == "dist") {
      spec.distribution = std::string(value);
    } else if (key == "t") {
      spec.t = parse_real(value);
    } else if (key == "r") {
      spec.r = parse_real(value);
    } else if (key == "eps") {
      spec.eps = parse_real(value);
    } else if (key == "mu0") {
      spec.mu0 = parse_real(value);
    } else if (key == "n") {
      spec.n_list = parse_int_list(value);
    } else if (key == "t_list") {
      spec.t_list = parse_real_list(value);
    } else if (key == "samples") {
      spec.samples = parse_count(value);
    } else if (key == "method") {
      if (value == "direct") {
        spec.method = DirectMethod{};
      } else if (value == "tilted") {
        tilted(spec);
      } else {
        bad_value(key, value, "expected direct or tilted");
      }
    } else if (key == "lambda") {
      tilted(spec).lambda = parse_real(value);
    } else if (key == "halfwidth") {
      tilted(spec).halfwidth = parse_int(value);
    } else if (key == "spacing") {
      tilted(spec).spacing = parse_int(value);
    } else if (key == "seed") {
      spec.seed = parse_u64(value);
    } else if (key == "workers") {
      const auto w = parse_u64(value);
      if (w > std::numeric_limits<unsigned>::max()) bad_value(key, value, "too large");
      spec.workers = static_cast<unsigned>(w);
    } else if (key == "k") {
      spec.k = parse_int(value);
    } else if (key == "max_n") {
      spec.max_n = parse_int(value);
    } else if (key == "fields") {
      spec.fields = parse_int(value);
    } else if (key == "out") {
      spec.out = std::string(value);
    } else if (key == "format") {
      if (value == "csv") {
        spec.format = OutputFormat::kCsv;
      } else if (value == "jsonl") {
        spec.format = OutputFormat::kJsonl;
      } else {
        bad_value(key, value, "expected csv or jsonl");
      }
    } else if (key == "omit_timing") {
      spec.omit_timing = parse_bool(value);
    } else {
      throw ValidationError("unknown key '" + std::string(key) + "'");
    }
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind("invalid value", 0) == 0 || what.rfind("unknown key", 0) == 0) throw;
    bad_value(key, value, what);
  }
}

ExperimentSpec parse_config(std::string_view text, ExperimentSpec base) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    // Comments start at '#' outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ValidationError& e) {
      throw ValidationError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

std::string emit_config(const ExperimentSpec& spec) {
  std::ostringstream os;
  auto quoted = [](const std::string& s) { return "\"" + s + "\""; };
  os << "experiment = " << experiment_name(spec.experiment) << '\n';
  os << "dist = " << quoted(spec.distribution) << '\n';
  if (spec.t) os << "t = " << format_real(*spec.t) << '\n';
  if (spec.r) os << "r = " << format_real(*spec.r) << '\n';
  if (spec.eps) os << "eps = " << format_real(*spec.eps) << '\n';
  if (spec.mu0) os << "mu0 = " << format_real(*spec.mu0) << '\n';
  if (!spec.n_list.empty()) os << "n = " << join(spec.n_list) << '\n';
  if (!spec.t_list.empty()) os << "t_list = " << join(spec.t_list) << '\n';
  if (spec.samples) os << "samples = " << *spec.samples << '\n';
  if (const auto* tilt = std::get_if<TiltedMethod>(&spec.method)) {
    os << "method = tilted\n";
    if (tilt->lambda) os << "lambda = " << format_real(*tilt->lambda) << '\n';
    if (tilt->halfwidth) os << "halfwidth = " << *tilt->halfwidth << '\n';
    if (tilt->spacing) os << "spacing = " << *tilt->spacing << '\n';
  } else {
    os << "method = direct\n";
  }
  os << "seed = " << spec.seed << '\n';
  os << "workers = " << spec.workers << '\n';
  if (spec.k) os << "k = " << *spec.k << '\n';
  if (spec.max_n) os << "max_n = " << *spec.max_n << '\n';
  if (spec.fields) os << "fields = " << *spec.fields << '\n';
  if (!spec.out.empty()) os << "out = " << quoted(spec.out) << '\n';
  os << "format = " << (spec.format == OutputFormat::kCsv ? "csv" : "jsonl") << '\n';
  os << "omit_timing = " << (spec.omit_timing ? "true" : "false") << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

std::string name_of(const ExperimentSpec& spec) { return std::string(experiment_name(spec.experiment)); }

void require_samples(const ExperimentSpec& spec) {
  require(spec.samples.has_value(), name_of(spec) + " needs --samples");
  require(*spec.samples >= 1 && *spec.samples <= kMaxSamples,
          "samples must lie in [1, 1e12]");
}

void require_scales(const ExperimentSpec& spec, bool even, int min_n) {
  require(!spec.n_list.empty(), name_of(spec) + " needs --n");
  require(spec.n_list.size() <= kMaxListSize, "too many scales in --n");
  for (int n : spec.n_list) {
    require(n >= min_n && n <= kMaxScale,
            "n=" + std::to_string(n) + " outside [" + std::to_string(min_n) + ", " +
                std::to_string(kMaxScale) + "]");
    require(!even || n % 2 == 0, name_of(spec) + " needs even n, got " + std::to_string(n));
  }
}

void require_targets(const ExperimentSpec& spec, double t) {
  for (int n : spec.n_list) {
    const auto target = direction_target(t, n);
    require(target.x >= 0 && target.y >= 0,
            "degenerate target for t=" + format_real(t) + ", n=" + std::to_string(n));
  }
}

double require_t(const ExperimentSpec& spec, bool open_at_zero) {
  require(spec.t.has_value(), name_of(spec) + " needs --t");
  const double t = *spec.t;
  if (open_at_zero) {
    require(t > 0.0 && t <= 0.5, "t must lie in (0, 1/2]");
  } else {
    require(std::abs(t) <= 0.5, "t must lie in [-1/2, 1/2]");
  }
  return t;
}

void require_method(const ExperimentSpec& spec, const WeightDistribution& dist) {
  const auto* tilt = std::get_if<TiltedMethod>(&spec.method);
  if (!tilt) return;
  if (tilt->lambda) {
    require(*tilt->lambda < dist.cgf_domain_sup(),
            "lambda=" + format_real(*tilt->lambda) + " outside the moment domain (< " +
                format_real(dist.cgf_domain_sup()) + ")");
  }
  if (tilt->halfwidth) require(*tilt->halfwidth >= 0, "halfwidth must be >= 0");
  if (tilt->spacing) require(*tilt->spacing >= 1, "spacing must be >= 1");
}

double require_mu0(const ExperimentSpec& spec, const WeightDistribution& dist) {
  if (spec.mu0) {
    require(*spec.mu0 > 0.0, "mu0 must be positive");
    return *spec.mu0;
  }
  const auto mu0 = diagonal_shape_constant(dist);
  require(mu0.has_value(), name_of(spec) + " needs --mu0 for " + dist.descriptor());
  return *mu0;
}

}  // namespace

void validate(const ExperimentSpec& spec) {
  std::optional<WeightDistribution> parsed;
  try {
    parsed = WeightDistribution::parse(spec.distribution);
  } catch (const std::exception& e) {
    throw ValidationError("invalid distribution '" + spec.distribution + "': " + e.what());
  }
  const auto& dist = *parsed;
  require(spec.workers >= 1 && spec.workers <= 4096, "workers must lie in [1, 4096]");
  require_method(spec, dist);
  require(spec.t_list.empty() || spec.experiment == Experiment::kTail, "t_list applies to tail only");

  switch (spec.experiment) {
    case Experiment::kVerify:
      require(spec.max_n.value_or(7) >= 1 && spec.max_n.value_or(7) <= 10,
              "max_n must lie in [1, 10]");
      require(spec.fields.value_or(500) >= 1, "fields must be >= 1");
      break;
    case Experiment::kShape: {
      require_samples(spec);
      require_scales(spec, false, 1);
      require_targets(spec, spec.t ? require_t(spec, false) : 0.0);
      break;
    }
    case Experiment::kTail:
    case Experiment::kFekete: {
      require_samples(spec);
      require_scales(spec, false, 1);
      require(spec.r.has_value(), name_of(spec) + " needs --r");
      require(*spec.r >= 0.0, "r must be >= 0");
      require(std::is_sorted(spec.n_list.begin(), spec.n_list.end()), "n must be ascending");
      if (!spec.t_list.empty()) {
        require(!spec.t.has_value(), "give either t or t_list, not both");
        require(std::is_sorted(spec.t_list.begin(), spec.t_list.end()), "t_list must be ascending");
        for (double t : spec.t_list) {
          require(t >= 0.0 && t <= 0.5, "t_list entries must lie in [0, 1/2]");
          require_targets(spec, t);
        }
      } else {
        require_targets(spec, require_t(spec, false));
      }
      break;
    }
    case Experiment::kMidpoint:
    case Experiment::kEndpoint:
      require_samples(spec);
      require_scales(spec, true, 2);
      require_t(spec, true);
      if (const auto* tilt = std::get_if<TiltedMethod>(&spec.method); tilt && !tilt->lambda) {
        require_mu0(spec, dist);
      }
      break;
    case Experiment::kCorner:
      require_samples(spec);
      require_scales(spec, true, 2);
      require(!spec.t || *spec.t == 0.5, "corner fixes t = 1/2");
      if (const auto* tilt = std::get_if<TiltedMethod>(&spec.method); tilt && !tilt->lambda) {
        require_mu0(spec, dist);
      }
      break;
    case Experiment::kIdentity:
      require_samples(spec);
      require_scales(spec, true, 2);
      require_t(spec, true);
      require_mu0(spec, dist);
      break;
    case Experiment::kLeftTail: {
      require_samples(spec);
      require_scales(spec, true, 2);
      require(std::is_sorted(spec.n_list.begin(), spec.n_list.end()), "n must be ascending");
      require(spec.eps.has_value(), "left-tail needs --eps");
      const double mu0 = require_mu0(spec, dist);
      require(*spec.eps >= 0.0 && *spec.eps < mu0, "eps must lie in [0, mu0)");
      break;
    }
    case Experiment::kUniformWalk:
      require_scales(spec, true, 0);
      if (spec.k) {
        for (int n : spec.n_list) {
          require(std::abs(*spec.k) <= n / 2,
                  "k=" + std::to_string(*spec.k) + " outside [-n/2, n/2] for n=" + std::to_string(n));
        }
      } else {
        for (int n : spec.n_list) require(n >= 2, "corner rate needs n >= 2");
      }
      break;
  }
}

}  // namespace lpp::cli
