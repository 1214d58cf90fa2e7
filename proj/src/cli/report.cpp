#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "lpp/cli/runner.hpp"
#include "lpp/distributions.hpp"
#include "lpp/numerics.hpp"

namespace lpp::cli {

namespace {

const std::set<std::string, std::less<>> kRateFamilies{
    "tail", "fekete", "midpoint", "endpoint", "corner", "left-tail", "uniform-walk"};

template <class T>
std::string cell(const std::optional<T>& v) {
  return v ? std::to_string(*v) : "-";
}

}  // namespace

void write_report(const std::vector<ResultRow>& rows, std::ostream& out) {
  if (rows.empty()) {
    out << "no rows\n";
    return;
  }
  const std::string& family = rows.front().experiment;
  for (const auto& r : rows) {
    if (r.experiment != family) {
      throw SchemaError("rows mix experiment families '" + family + "' and '" + r.experiment + "'");
    }
  }

  out << "experiment: " << family;
  if (!rows.front().distribution.empty()) out << "  distribution: " << rows.front().distribution;
  out << '\n';
  out << std::left << std::setw(14) << "event" << std::setw(7) << "n" << std::setw(8) << "t"
      << std::setw(14) << "p_hat" << std::setw(14) << "ci_low" << std::setw(14) << "ci_high"
      << std::setw(14) << "fekete" << std::setw(14) << "mean" << "std_err\n";
  auto short_real = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    std::ostringstream os;
    os << std::setprecision(6) << *v;
    return os.str();
  };
  for (const auto& r : rows) {
    out << std::left << std::setw(14) << (r.event.empty() ? "-" : r.event) << std::setw(7)
        << cell(r.n) << std::setw(8) << short_real(r.t) << std::setw(14) << short_real(r.p_hat)
        << std::setw(14) << short_real(r.ci_low) << std::setw(14) << short_real(r.ci_high)
        << std::setw(14) << short_real(r.fekete_bound) << std::setw(14) << short_real(r.mean)
        << short_real(r.std_err) << '\n';
  }

  if (!kRateFamilies.count(family)) return;

  // One fit per event kind, in order of first appearance.
  std::vector<std::string> events;
  std::map<std::string, std::vector<const ResultRow*>> groups;
  for (const auto& r : rows) {
    if (!r.n || !r.p_hat) continue;
    if (!groups.count(r.event)) events.push_back(r.event);
    groups[r.event].push_back(&r);
  }
  for (const auto& event : events) {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<int> excluded;
    for (const auto* r : groups[event]) {
      if (!(*r->p_hat > 0.0)) {
        excluded.push_back(*r->n);
        continue;
      }
      x.push_back(*r->n);
      y.push_back(-std::log(*r->p_hat));
    }
    out << '\n' << "slope of -log p_hat vs n";
    if (!event.empty()) out << " [" << event << ']';
    out << ": ";
    const auto fit = fit_line(x, y);
    if (!fit) {
      out << "omitted (fewer than two usable rows)\n";
    } else {
      out << format_real(fit->slope);
      if (!std::isnan(fit->slope_std_err)) out << " +/- " << format_real(fit->slope_std_err);
      out << " over " << fit->points << " rows\n";
    }
    if (!excluded.empty()) {
      out << "excluded zero-hit rows at n =";
      for (int n : excluded) out << ' ' << n;
      out << '\n';
    }
  }

  if (family == "corner") {
    try {
      const auto dist = WeightDistribution::parse(rows.front().distribution);
      if (dist == WeightDistribution::exponential(1.0)) {
        out << "target 2 - 2 log 2 = " << std::fixed << std::setprecision(6)
            << corner_rate_theoretical(dist) << '\n';
      }
    } catch (const std::exception&) {
      // Unknown law: no annotation.
    }
  }
}

}  // namespace lpp::cli
