#include "lpp/passage.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lpp/error.hpp"

namespace lpp {
namespace {

void check_endpoints(const WeightField& field, LatticePoint source, LatticePoint target) {
  if (!source.precedes(target)) {
    std::ostringstream msg;
    msg << "no up-right path from " << source << " to " << target;
    throw OrderError(msg.str());
  }
  if (!field.contains(source) || !field.contains(target)) {
    std::ostringstream msg;
    msg << "endpoints " << source << ", " << target << " outside field extents (" << field.width()
        << ',' << field.height() << ')';
    throw ExtentError(msg.str());
  }
}

}  // namespace

PassageResult last_passage(const WeightField& field, LatticePoint source, LatticePoint target) {
  check_endpoints(field, source, target);
  const int w = target.x - source.x;
  const int h = target.y - source.y;
  const auto stride = static_cast<std::size_t>(w) + 1;
  std::vector<double> g(site_count(w, h));
  auto at = [&](int x, int y) -> double& { return g[static_cast<std::size_t>(y) * stride + x]; };
  auto weight = [&](int x, int y) { return field(source.x + x, source.y + y); };

  at(0, 0) = 0.0;
  for (int x = 1; x <= w; ++x) at(x, 0) = weight(x, 0) + at(x - 1, 0);
  for (int y = 1; y <= h; ++y) {
    at(0, y) = weight(0, y) + at(0, y - 1);
    for (int x = 1; x <= w; ++x) at(x, y) = weight(x, y) + std::max(at(x - 1, y), at(x, y - 1));
  }

  PassageResult result;
  result.source = source;
  result.target = target;
  result.value = at(w, h);
  result.geodesic.resize(static_cast<std::size_t>(w) + static_cast<std::size_t>(h) + 1);

  // Walk back from the target. Preferring the predecessor below (x kept) keeps
  // the path as far right as possible at every level: the rightmost geodesic.
  int x = w;
  int y = h;
  for (auto k = result.geodesic.size(); k-- > 0;) {
    result.geodesic[k] = {source.x + x, source.y + y};
    if (k == 0) break;
    if (x == 0) {
      --y;
    } else if (y == 0) {
      --x;
    } else {
      const double here = at(x, y);
      const bool below_ok = weight(x, y) + at(x, y - 1) == here;
      const bool left_ok = weight(x, y) + at(x - 1, y) == here;
      if (below_ok && left_ok) result.tie_broken = true;
      if (below_ok) {
        --y;
      } else {
        --x;
      }
    }
  }
  return result;
}

double last_passage_value(const WeightField& field, LatticePoint source, LatticePoint target) {
  check_endpoints(field, source, target);
  const int w = target.x - source.x;
  const int h = target.y - source.y;
  auto weight = [&](int x, int y) { return field(source.x + x, source.y + y); };

  if (w <= h) {
    std::vector<double> row(static_cast<std::size_t>(w) + 1);
    row[0] = 0.0;
    for (int x = 1; x <= w; ++x) row[x] = weight(x, 0) + row[x - 1];
    for (int y = 1; y <= h; ++y) {
      row[0] = weight(0, y) + row[0];
      for (int x = 1; x <= w; ++x) row[x] = weight(x, y) + std::max(row[x - 1], row[x]);
    }
    return row[w];
  }
  std::vector<double> col(static_cast<std::size_t>(h) + 1);
  col[0] = 0.0;
  for (int y = 1; y <= h; ++y) col[y] = weight(0, y) + col[y - 1];
  for (int x = 1; x <= w; ++x) {
    col[0] = weight(x, 0) + col[0];
    for (int y = 1; y <= h; ++y) col[y] = weight(x, y) + std::max(col[y], col[y - 1]);
  }
  return col[h];
}

GeodesicSummary summarize_geodesic(const PassageResult& result, int n) {
  if (n < 0 || n % 2 != 0) {
    throw ParityError("midpoint summaries need an even n, got " + std::to_string(n));
  }
  if (result.source != LatticePoint{0, 0} || result.target != LatticePoint{n, n}) {
    std::ostringstream msg;
    msg << "summary for n=" << n << " expects a passage (0,0)->(" << n << ',' << n << "), got "
        << result.source << "->" << result.target;
    throw std::invalid_argument(msg.str());
  }
  GeodesicSummary summary;
  // Point k of the geodesic sits on level k.
  summary.midpoint = result.geodesic.at(static_cast<std::size_t>(n));
  summary.midpoint_offset = summary.midpoint.x - n / 2;
  for (const auto& p : result.geodesic) {
    const int d = std::abs(p.x - p.y);
    summary.max_displacement = std::max(summary.max_displacement, (d + 1) / 2);
  }
  return summary;
}

GeodesicSummary summarize_geodesic(const PassageResult& result, int n, const WeightField& field) {
  GeodesicSummary summary = summarize_geodesic(result, n);
  summary.endpoint_ptl = point_to_line(field, n).endpoint;
  return summary;
}

PointToLineResult point_to_line(const WeightField& field, int n) {
  if (n < 0) throw ExtentError("point-to-line needs n >= 0");
  if (field.width() < n || field.height() < n) {
    std::ostringstream msg;
    msg << "field (" << field.width() << ',' << field.height() << ") does not cover x + y <= "
        << n;
    throw ExtentError(msg.str());
  }
  // Row j holds G((0,0), (x, j)) for x <= n - j; updated in place.
  std::vector<double> row(static_cast<std::size_t>(n) + 1);
  row[0] = 0.0;
  for (int x = 1; x <= n; ++x) row[x] = field(x, 0) + row[x - 1];
  PointToLineResult best{row[n], {n, 0}};
  for (int j = 1; j <= n; ++j) {
    row[0] = field(0, j) + row[0];
    for (int x = 1; x <= n - j; ++x) row[x] = field(x, j) + std::max(row[x - 1], row[x]);
    if (row[n - j] > best.value) best = {row[n - j], {n - j, j}};
  }
  return best;
}

LatticePoint direction_target(double t, int n) {
  auto snapped_floor = [](double v) {
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return static_cast<int>(r);
    return static_cast<int>(std::floor(v));
  };
  const double half = 0.5 * n;
  const double shift = t * n;
  return {snapped_floor(half + shift), snapped_floor(half - shift)};
}

}  // namespace lpp
