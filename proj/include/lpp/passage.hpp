#pragma once

#include <optional>
#include <vector>

#include "lpp/field.hpp"

namespace lpp {

/// Last-passage value G(source, target) and its geodesic.
///
/// `value` is the maximum over up-right paths of the weight sum excluding the
/// source site; `geodesic` runs from source to target with unit steps e1 or e2.
/// When several paths attain the maximum the rightmost one is returned (the
/// path taking e1 at the earliest point where maximizers diverge) and
/// `tie_broken` is set.
struct PassageResult {
  LatticePoint source;
  LatticePoint target;
  double value = 0.0;
  std::vector<LatticePoint> geodesic;
  bool tie_broken = false;
};

/// Full dynamic program over the rectangle [source, target]: O(area) time and
/// memory. Throws OrderError if source does not precede target, ExtentError if
/// either lies outside the field.
PassageResult last_passage(const WeightField& field, LatticePoint source, LatticePoint target);

/// Same value as last_passage (bit-identical), in O(min extent) memory.
double last_passage_value(const WeightField& field, LatticePoint source, LatticePoint target);

struct GeodesicSummary {
  LatticePoint midpoint;      // the geodesic's site on x + y = n
  int midpoint_offset = 0;    // k with midpoint = (n/2 + k, n/2 - k)
  std::optional<LatticePoint> endpoint_ptl;  // point-to-line argmax, when a field is given
  int max_displacement = 0;   // max over the geodesic of ceil(|x - y| / 2)
};

/// Midpoint and displacement of the geodesic from (0,0) to (n,n). Throws
/// ParityError for odd n and std::invalid_argument if `result` has other endpoints.
GeodesicSummary summarize_geodesic(const PassageResult& result, int n);

/// As above, additionally solving the point-to-line problem on `field`.
GeodesicSummary summarize_geodesic(const PassageResult& result, int n, const WeightField& field);

struct PointToLineResult {
  double value = 0.0;
  LatticePoint endpoint;
};

/// max over lattice points p >= 0 with p.x + p.y = n of G((0,0), p), in one
/// sweep over the triangle. Ties go to the larger x coordinate. Throws
/// ExtentError if the field does not cover the triangle.
PointToLineResult point_to_line(const WeightField& field, int n);

/// Target (floor(n/2 + t n), floor(n/2 - t n)) of direction t at scale n.
/// Products that land within 1e-9 of an integer are snapped before flooring.
LatticePoint direction_target(double t, int n);

}  // namespace lpp
