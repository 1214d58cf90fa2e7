#include "lpp/cli/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "lpp/error.hpp"
#include "lpp/numerics.hpp"
#include "lpp/oracle.hpp"
#include "lpp/parallel.hpp"
#include "lpp/rng.hpp"

#ifndef LPP_TOOL_VERSION
#define LPP_TOOL_VERSION "0.0.0"
#endif

namespace lpp::cli {

std::string_view tool_version() noexcept { return LPP_TOOL_VERSION; }

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::optional<double> present(double x) {
  if (std::isnan(x)) return std::nullopt;
  return x;
}

std::string fixed(double x, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << x;
  return os.str();
}

struct Runner {
  const ExperimentSpec& spec;
  WeightDistribution dist;
  RunOptions opts;
  const std::function<void(const ResultRow&)>& sink;
  std::ostream& log;

  ResultRow row() const {
    ResultRow r;
    r.experiment = std::string(experiment_name(spec.experiment));
    r.distribution = dist.descriptor();
    r.seed = spec.seed;
    r.tool_version = std::string(tool_version());
    return r;
  }

  void emit(ResultRow r, const Stopwatch& clock) const {
    const double secs = clock.seconds();
    if (!spec.omit_timing) r.wall_time_s = secs;
    log << "lpp " << r.experiment;
    if (!r.event.empty()) log << " [" << r.event << ']';
    if (r.n) log << " n=" << *r.n;
    log << " done in " << fixed(secs, 2) << " s\n";
    sink(r);
  }

  static void fill(ResultRow& r, const RateEstimate& e) {
    r.t = e.t;
    r.r = present(e.r);
    r.n = e.n;
    r.n_samples = e.n_samples;
    r.method = e.method.describe();
    r.p_hat = e.p_hat;
    r.ci_low = e.ci_low;
    r.ci_high = e.ci_high;
    r.fekete_bound = e.fekete_bound;
    r.std_err = e.std_err;
  }

  static void fill(ResultRow& r, const EventEstimate& e, int n) {
    r.p_hat = e.p_hat;
    r.ci_low = e.ci_low;
    r.ci_high = e.ci_high;
    r.std_err = e.std_err;
    r.fekete_bound = e.hits > 0.0 ? 0.0 - std::log(e.p_hat) / n
                                  : std::numeric_limits<double>::infinity();
  }

  bool verify() const {
    const int max_n = spec.max_n.value_or(7);
    const auto fields = static_cast<std::uint64_t>(spec.fields.value_or(500));
    const std::uint64_t tie_fields = std::max<std::uint64_t>(1, fields / 10);
    bool all = true;
    struct Count {
      std::uint64_t agree = 0;
      void merge(const Count& o) { agree += o.agree; }
    };
    for (int n = 1; n <= max_n; ++n) {
      for (const bool ties : {false, true}) {
        const Stopwatch clock;
        const std::uint64_t count = ties ? tie_fields : fields;
        const std::uint64_t base = derive_seed(spec.seed, 2 * static_cast<std::uint64_t>(n) + ties);
        const auto tally = reduce_replicates<Count>(
            count, opts.workers, [&](std::uint64_t i, Count& acc) {
              const auto seed = derive_seed(base, i);
              const auto field = ties ? oracle::integer_field(n, seed)
                                      : sample_field(dist, n, n, seed);
              acc.agree += oracle::compare_with_brute_force(field, n).both();
            });
        auto r = row();
        r.event = ties ? "planted-ties" : "random";
        r.n = n;
        r.n_samples = count;
        r.method = "exact";
        r.p_hat = static_cast<double>(tally.agree) / static_cast<double>(count);
        if (tally.agree != count) {
          all = false;
          log << "lpp verify: " << count - tally.agree << " of " << count << ' ' << r.event
              << " fields disagree at n=" << n << '\n';
        }
        emit(r, clock);
      }
    }
    return all;
  }

  void shape() const {
    const double t = spec.t.value_or(0.0);
    for (int n : spec.n_list) {
      const Stopwatch clock;
      const auto e = estimate_shape(dist, t, n, *spec.samples, spec.seed, opts);
      auto r = row();
      r.event = "shape";
      r.t = t;
      r.n = n;
      r.n_samples = e.n_samples;
      r.method = "direct";
      r.mean = e.mean;
      r.std_err = e.std_err;
      emit(r, clock);
    }
  }

  void tail() const {
    const double level = *spec.r;
    if (!spec.t_list.empty()) {
      for (int n : spec.n_list) {
        std::vector<RateEstimate> estimates;
        for (double t : spec.t_list) {
          const Stopwatch clock;
          estimates.push_back(
              estimate_tail(dist, t, level, n, *spec.samples, spec.seed, spec.method, opts));
          auto r = row();
          r.event = "tail";
          fill(r, estimates.back());
          emit(r, clock);
        }
        const auto report = check_monotone(std::move(estimates));
        log << "lpp tail: monotone in t at n=" << n << ": " << (report.pass ? "pass" : "FAIL");
        if (!report.zero_hit.empty()) log << " (" << report.zero_hit.size() << " zero-hit cells excluded)";
        log << '\n';
      }
      return;
    }
    for (int n : spec.n_list) {
      const Stopwatch clock;
      const auto e = estimate_tail(dist, *spec.t, level, n, *spec.samples, spec.seed, spec.method, opts);
      auto r = row();
      r.event = "tail";
      fill(r, e);
      emit(r, clock);
      if (e.zero_hits()) log << "lpp: zero hits at n=" << n << ", bound is infinite\n";
    }
  }

  void location(bool midpoint) const {
    for (int n : spec.n_list) {
      const Stopwatch clock;
      const auto e = midpoint
                         ? estimate_midpoint_tail(dist, *spec.t, n, *spec.samples, spec.seed, spec.method, opts)
                         : estimate_endpoint_tail(dist, *spec.t, n, *spec.samples, spec.seed, spec.method, opts);
      auto tail_row = row();
      tail_row.event = "tail";
      fill(tail_row, e);
      auto point_row = tail_row;
      point_row.event = "point";
      fill(point_row, *e.point_event, n);
      emit(tail_row, clock);
      emit(point_row, clock);
    }
  }

  void corner() const {
    for (int n : spec.n_list) {
      const Stopwatch clock;
      const auto e = estimate_midpoint_tail(dist, 0.5, n, *spec.samples, spec.seed, spec.method, opts);
      auto r = row();
      r.event = "corner";
      fill(r, e);
      fill(r, *e.point_event, n);
      emit(r, clock);
    }
  }

  void identity() const {
    for (int n : spec.n_list) {
      const Stopwatch clock;
      const auto rep = midpoint_rate_identity(dist, *spec.t, n, *spec.samples, spec.seed,
                                              spec.method, spec.method, opts);
      auto a = row();
      a.event = "midpoint";
      fill(a, rep.midpoint);
      a.mean = rep.a;
      auto b = row();
      b.event = "passage";
      fill(b, rep.passage);
      b.mean = rep.b;
      auto gap = row();
      gap.event = "relative-gap";
      gap.t = rep.t;
      gap.n = n;
      gap.mean = rep.relative_gap;
      emit(a, clock);
      emit(b, clock);
      emit(gap, clock);
      if (rep.closed_form_per_factor) {
        auto closed = row();
        closed.event = "closed-form";
        closed.t = rep.t;
        closed.n = n;
        closed.method = "exact";
        closed.mean = *rep.closed_form_per_factor;
        emit(closed, clock);
      }
    }
  }

  void left_tail() const {
    std::optional<double> lambda;
    if (const auto* tilt = std::get_if<TiltedMethod>(&spec.method)) {
      lambda = tilt->lambda;
    } else {
      lambda = 0.0;
    }
    std::vector<RateEstimate> estimates;
    for (int n : spec.n_list) {
      const Stopwatch clock;
      estimates.push_back(estimate_left_tail(dist, *spec.eps, n, *spec.samples, spec.seed, lambda, opts));
      auto r = row();
      r.event = "left-tail";
      fill(r, estimates.back());
      emit(r, clock);
    }
    log << "lpp left-tail: superexponential signature: "
        << (is_superexponential(estimates) ? "yes" : "no") << '\n';
  }

  void uniform_walk() const {
    for (int n : spec.n_list) {
      const Stopwatch clock;
      const int k = spec.k.value_or(n / 2);
      const double p = oracle::uniform_midpoint_prob(n, k);
      auto r = row();
      r.distribution.clear();
      r.seed.reset();
      r.event = spec.k ? "k=" + std::to_string(k) : "corner";
      r.n = n;
      r.method = "exact";
      r.p_hat = p;
      if (n > 0) r.fekete_bound = 0.0 - std::log(p) / n;
      emit(r, clock);
    }
  }
};

}  // namespace

bool run_experiment(const ExperimentSpec& spec, const std::function<void(const ResultRow&)>& sink,
                    std::ostream& log) {
  RunOptions opts;
  opts.workers = spec.workers;
  opts.mu0 = spec.mu0;
  const Runner runner{spec, WeightDistribution::parse(spec.distribution), opts, sink, log};
  switch (spec.experiment) {
    case Experiment::kVerify:
      return runner.verify();
    case Experiment::kShape:
      runner.shape();
      break;
    case Experiment::kTail:
    case Experiment::kFekete:
      runner.tail();
      break;
    case Experiment::kMidpoint:
      runner.location(true);
      break;
    case Experiment::kEndpoint:
      runner.location(false);
      break;
    case Experiment::kCorner:
      runner.corner();
      break;
    case Experiment::kIdentity:
      runner.identity();
      break;
    case Experiment::kLeftTail:
      runner.left_tail();
      break;
    case Experiment::kUniformWalk:
      runner.uniform_walk();
      break;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Command line

namespace {

struct FlagSpec {
  std::string_view key;
  std::string names;
  std::string help;
};

const std::vector<FlagSpec>& flag_specs() {
  static const std::vector<FlagSpec> flags{
      {"dist", "--dist", "weight law: exp:<rate> or gamma:<shape>,<rate>"},
      {"t", "--t", "direction t"},
      {"r", "--r", "tail level per unit n"},
      {"eps", "--eps", "left-tail depth below mu0"},
      {"mu0", "--mu0", "diagonal shape constant override"},
      {"n", "--n,--n-list", "scale(s): 10, 4,8,12 or 4..14:2"},
      {"t_list", "--t-list", "ascending directions for a monotonicity scan"},
      {"samples", "--samples,--budget", "replicates per cell (e.g. 1e6)"},
      {"method", "--method", "direct or tilted"},
      {"lambda", "--lambda", "tilt parameter (implies tilted)"},
      {"halfwidth", "--halfwidth", "corridor halfwidth (implies tilted)"},
      {"spacing", "--spacing", "corridor waypoint spacing (implies tilted)"},
      {"seed", "--seed", "base seed"},
      {"workers", "--workers", "worker threads (default: LPP_WORKERS or all cores)"},
      {"k", "--k", "uniform-walk midpoint offset"},
      {"max_n", "--max-n", "largest n for verify"},
      {"fields", "--fields", "random fields per n for verify"},
      {"out", "--out", "output file (default: standard output)"},
      {"format", "--format", "csv or jsonl"},
  };
  return flags;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

unsigned default_workers() {
  if (const char* env = std::getenv("LPP_WORKERS"); env && *env) {
    try {
      const auto w = parse_count(env);
      if (w < 1 || w > 4096) throw ValidationError("out of range");
      return static_cast<unsigned>(w);
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("LPP_WORKERS='") + env + "': " + e.what());
    }
  }
  return resolve_workers(0);
}

struct NullBuffer : std::streambuf {
  int overflow(int c) override { return c; }
};

int run_report(const std::string& path, const std::string& out_path, std::ostream& out,
               std::ostream& err) {
  std::vector<ResultRow> rows;
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      err << "lpp report: cannot read " << path << '\n';
      return 3;
    }
    try {
      rows = read_rows(in);
    } catch (const SchemaError& e) {
      err << "lpp report: schema mismatch: " << e.what() << '\n';
      return 2;
    }
  }
  try {
    if (out_path.empty()) {
      write_report(rows, out);
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) {
        err << "lpp report: cannot write " << out_path << '\n';
        return 3;
      }
      write_report(rows, file);
    }
  } catch (const SchemaError& e) {
    err << "lpp report: schema mismatch: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Last-passage percolation experiments", "lpp"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  std::map<std::string, std::string, std::less<>> values;
  std::string config_path;
  bool quiet = false;
  bool omit_timing = false;
  std::map<std::string, std::vector<std::pair<std::string_view, CLI::Option*>>, std::less<>> options;
  std::map<std::string, CLI::Option*, std::less<>> omit_flags;

  const std::vector<std::pair<std::string_view, std::string_view>> descriptions{
      {"verify", "dynamic program against brute-force enumeration"},
      {"shape", "mean of G/n"},
      {"tail", "P(G >= r n) per n, or per t with --t-list"},
      {"fekete", "finite-n rate bounds -log(p)/n over ascending n"},
      {"midpoint", "geodesic midpoint tail and point events"},
      {"endpoint", "point-to-line endpoint tail and point events"},
      {"corner", "P(Mid = (n, 0)) per n"},
      {"identity", "midpoint exponent against the passage-value exponent"},
      {"left-tail", "lower-tail probabilities under a down-tilt"},
      {"uniform-walk", "exact midpoint law of the uniform random walk"},
  };
  for (const auto& [name, description] : descriptions) {
    auto* sub = app.add_subcommand(std::string(name), std::string(description));
    sub->add_option("--config", config_path, "flat key = value config file; flags override it");
    sub->add_flag("--quiet", quiet, "no progress on standard error");
    omit_flags[std::string(name)] =
        sub->add_flag("--omit-timing", omit_timing, "leave wall_time_s empty (byte-stable output)");
    for (const auto& flag : flag_specs()) {
      options[std::string(name)].emplace_back(
          flag.key, sub->add_option(flag.names, values[std::string(flag.key)], flag.help));
    }
  }
  std::string report_path;
  std::string report_out;
  auto* report = app.add_subcommand("report", "summarize a rows file");
  report->add_option("rows", report_path, "CSV or JSONL rows")->required();
  report->add_option("--out", report_out, "output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "lpp: " << e.what() << '\n';
    return 2;
  }

  if (report->parsed()) return run_report(report_path, report_out, out, err);

  const auto* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  ExperimentSpec spec;
  try {
    spec.experiment = *parse_experiment(name);
    spec.workers = default_workers();
    if (!config_path.empty()) {
      spec = parse_config(read_file(config_path), spec);
      if (spec.experiment != *parse_experiment(name)) {
        throw ValidationError("config experiment '" +
                              std::string(experiment_name(spec.experiment)) +
                              "' does not match subcommand '" + name + "'");
      }
    }
    for (const auto& [key, option] : options.at(name)) {
      if (option->count() > 0) apply_setting(spec, key, values[std::string(key)]);
    }
    if (omit_flags.at(name)->count() > 0) spec.omit_timing = omit_timing;
    validate(spec);
  } catch (const ValidationError& e) {
    err << "lpp " << name << ": " << e.what() << '\n';
    return 2;
  }

  NullBuffer null_buffer;
  std::ostream null_stream(&null_buffer);
  std::ostream& log = quiet ? null_stream : err;

  try {
    std::ofstream file;
    if (!spec.out.empty()) {
      file.open(spec.out, std::ios::binary);
      if (!file) throw std::runtime_error("cannot write " + spec.out);
    }
    std::ostream& sink_stream = spec.out.empty() ? out : file;
    const bool csv = spec.format == OutputFormat::kCsv;
    if (csv) sink_stream << csv_header();
    const bool ok = run_experiment(
        spec,
        [&](const ResultRow& r) {
          sink_stream << (csv ? to_csv(r) : to_jsonl(r));
          sink_stream.flush();
        },
        log);
    if (!sink_stream) throw std::runtime_error("write failed");
    if (!ok) {
      err << "lpp " << name << ": verification failed\n";
      return 3;
    }
  } catch (const std::exception& e) {
    err << "lpp " << name << ": " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace lpp::cli
