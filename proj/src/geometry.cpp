#include "strider/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace strider::geom {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double orient(const Vec2& o, const Vec2& a, const Vec2& b) { return cross2(a - o, b - o); }

Vec2 project_on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

}  // namespace

std::vector<HalfPlane> to_half_planes(const Polygon& poly) {
  if (poly.size() < 3) throw std::domain_error("to_half_planes: polygon needs >= 3 vertices");
  std::vector<HalfPlane> out;
  out.reserve(poly.size());
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    const Vec2 e = b - a;
    const double len = e.norm();
    if (len <= 0.0) throw std::domain_error("to_half_planes: repeated vertex");
    const Vec2 n(e.y() / len, -e.x() / len);  // outward for CCW order
    out.push_back({n, n.dot(a)});
  }
  return out;
}

bool contains(const std::vector<HalfPlane>& planes, const Vec2& p, double tol) {
  for (const HalfPlane& h : planes)
    if (h.normal.dot(p) > h.offset + tol) return false;
  return true;
}

bool contains(const Polygon& poly, const Vec2& p, double tol) {
  return contains(to_half_planes(poly), p, tol);
}

Vec2 project_point(const Polygon& poly, const Vec2& p) {
  if (poly.size() < 3) throw std::domain_error("project_point: degenerate polygon");
  if (contains(poly, p, 0.0)) return p;
  Vec2 best = poly[0];
  double best_d2 = (p - best).squaredNorm();
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec2 q = project_on_segment(poly[i], poly[(i + 1) % poly.size()], p);
    const double d2 = (p - q).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = q;
    }
  }
  return best;
}

Polygon convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) { return a == b; }),
            pts.end());
  const size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<Vec2> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {  // lower
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
    while (k >= t && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double area(const Polygon& poly) {
  double a = 0.0;
  for (size_t i = 0; i < poly.size(); ++i)
    a += cross2(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * a;
}

Polygon rotate_about(const Polygon& poly, double theta, const Vec2& pivot) {
  const double c = std::cos(theta), s = std::sin(theta);
  Polygon out;
  out.reserve(poly.size());
  for (const Vec2& v : poly) {
    const Vec2 d = v - pivot;
    out.emplace_back(pivot.x() + c * d.x() - s * d.y(), pivot.y() + s * d.x() + c * d.y());
  }
  return out;
}

Polygon rectangle(const Vec2& c, double half_x, double half_y) {
  return {Vec2(c.x() - half_x, c.y() - half_y), Vec2(c.x() + half_x, c.y() - half_y),
          Vec2(c.x() + half_x, c.y() + half_y), Vec2(c.x() - half_x, c.y() + half_y)};
}

bool segments_cross(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  const double d1 = orient(b0, b1, a0);
  const double d2 = orient(b0, b1, a1);
  const double d3 = orient(a0, a1, b0);
  const double d4 = orient(a0, a1, b1);
  if (((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) &&
      ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)))
    return true;

  // Collinear overlap longer than a point counts as crossing.
  const double eps = 1e-12;
  if (std::abs(d1) < eps && std::abs(d2) < eps && std::abs(d3) < eps && std::abs(d4) < eps) {
    const Vec2 dir = a1 - a0;
    const double len = dir.norm();
    if (len <= 0.0) return false;
    const Vec2 u = dir / len;
    double lo_a = 0.0, hi_a = len;
    double tb0 = u.dot(b0 - a0), tb1 = u.dot(b1 - a0);
    double lo_b = std::min(tb0, tb1), hi_b = std::max(tb0, tb1);
    const double overlap = std::min(hi_a, hi_b) - std::max(lo_a, lo_b);
    return overlap > 1e-9;
  }
  return false;
}

bool rects_overlap(const Vec2& ca, const Vec2& ha, const Vec2& cb, const Vec2& hb) {
  return std::abs(ca.x() - cb.x()) < ha.x() + hb.x() &&
         std::abs(ca.y() - cb.y()) < ha.y() + hb.y();
}

}  // namespace strider::geom
