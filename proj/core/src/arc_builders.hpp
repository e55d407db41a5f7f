#pragma once

// Internal arc factories shared by the domain builders and the JSON loader.

#include <string>

#include "mtp/geometry.hpp"

namespace mtp::detail {

BoundaryArc segment_arc(Vec2 a, Vec2 b, ArcClass cls, std::string name);
BoundaryArc circle_arc(Vec2 center, double r, double phi0, double phi1, ArcClass cls,
                       std::string name);
BoundaryArc hermite_arc(Vec2 p0, Vec2 m0, Vec2 p1, Vec2 m1, ArcClass cls, std::string name);
BoundaryArc cc_characteristic_arc(int s, double y0, double y1, std::string name);
BoundaryArc polyline_arc(std::vector<Vec2> pts, ArcClass cls, std::string name);

}  // namespace mtp::detail
