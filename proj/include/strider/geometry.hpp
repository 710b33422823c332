#pragma once

#include "strider/types.hpp"

#include <vector>

namespace strider::geom {

/// Closed half-plane {x : normal . x <= offset}.
struct HalfPlane {
  Vec2 normal = Vec2::UnitX();
  double offset = 0.0;
};

/// Convex polygon as CCW-ordered vertices.
using Polygon = std::vector<Vec2>;

std::vector<HalfPlane> to_half_planes(const Polygon& poly);

bool contains(const std::vector<HalfPlane>& planes, const Vec2& p, double tol = 1e-12);
bool contains(const Polygon& poly, const Vec2& p, double tol = 1e-12);

/// Euclidean projection of p onto a convex polygon.
Vec2 project_point(const Polygon& poly, const Vec2& p);

/// Monotone-chain convex hull, CCW.
Polygon convex_hull(std::vector<Vec2> points);

double area(const Polygon& poly);

Polygon rotate_about(const Polygon& poly, double theta, const Vec2& pivot);

/// Axis-aligned rectangle of given half extents centered at c.
Polygon rectangle(const Vec2& c, double half_x, double half_y);

/// True when the closed segments share a point beyond a single common
/// endpoint: a proper interior crossing or a collinear overlap.
bool segments_cross(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);

/// Axis-aligned rectangle overlap (strict: touching edges do not count).
bool rects_overlap(const Vec2& ca, const Vec2& ha, const Vec2& cb, const Vec2& hb);

}  // namespace strider::geom
