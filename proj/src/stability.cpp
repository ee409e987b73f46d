#include "stackplace/stability.hpp"

#include <algorithm>
#include <limits>

namespace stackplace {

namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

double segment_distance(const Vec2& a, const Vec2& b, const Vec2& p) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) {
    return (p - a).norm();
  }
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

}  // namespace

std::vector<Vec2> convex_hull(std::span<const Vec2> points) {
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) {
    return pts;
  }
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double support_margin(std::span<const Vec2> hull_ccw, const Vec2& p) {
  const std::size_t n = hull_ccw.size();
  if (n == 0) {
    return -std::numeric_limits<double>::infinity();
  }
  if (n < 3) {
    return -segment_distance(hull_ccw.front(), hull_ccw.back(), p);
  }
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = hull_ccw[i];
    const Vec2& b = hull_ccw[(i + 1) % n];
    const double d = cross(a, b, p) / (b - a).norm();
    margin = std::min(margin, d);
  }
  return margin;
}

bool patch_supports(std::span<const Vec2> patch, const Vec2& com, double margin) {
  const auto hull = convex_hull(patch);
  if (hull.size() < 3) return false;
  return support_margin(hull, com) >= margin;
}

}  // namespace stackplace
