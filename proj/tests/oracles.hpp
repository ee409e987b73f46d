#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library code it is used to check.

#include "stackplace/spatial.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using stackplace::Mat3;
using stackplace::Vec2;
using stackplace::Vec3;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec3 random_vec(std::mt19937_64& rng, double scale) {
  return Vec3(uniform(rng, -scale, scale), uniform(rng, -scale, scale), uniform(rng, -scale, scale));
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Vec3 v(n(rng), n(rng), n(rng));
  return v.normalized();
}

/// Rotation from a random unit quaternion.
inline Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized().toRotationMatrix();
}

/// Moment of a point force about the origin: p x F.
inline Vec3 moment(const Vec3& p, const Vec3& f) {
  return Vec3(p.y() * f.z() - p.z() * f.y(), p.z() * f.x() - p.x() * f.z(),
              p.x() * f.y() - p.y() * f.x());
}

/// Unit tangent direction (normal to n) with the largest z-component, found
/// by sampling angles in the tangent plane and refining around the best.
inline Vec3 dense_flat_search(const Vec3& n) {
  Vec3 a = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = (a - a.dot(n) * n).normalized();
  const Vec3 e2 = n.cross(e1);
  auto dir = [&](double t) { return Vec3(std::cos(t) * e1 + std::sin(t) * e2); };
  double best_t = 0.0;
  double best = -2.0;
  const int coarse = 3600;
  for (int k = 0; k < coarse; ++k) {
    const double t = 2.0 * std::numbers::pi * k / coarse;
    if (dir(t).z() > best) {
      best = dir(t).z();
      best_t = t;
    }
  }
  double span = 2.0 * std::numbers::pi / coarse;
  for (int round = 0; round < 8; ++round) {
    double local_best = best_t;
    for (int k = -50; k <= 50; ++k) {
      const double t = best_t + span * k / 50.0;
      if (dir(t).z() > best) {
        best = dir(t).z();
        local_best = t;
      }
    }
    best_t = local_best;
    span /= 25.0;
  }
  return dir(best_t);
}

/// Brute-force tipping check for a flat support patch. Every pair of patch
/// points whose line has all other points on one side is a candidate tip
/// axis; the object stays put iff the COM lies at least `margin` on the
/// supported side of every such axis. A patch whose points are all collinear
/// never supports. Only points that are extreme within their grid row can be
/// hull vertices, so the pair search runs over those.
inline bool brute_force_supported(const std::vector<Vec2>& patch, const Vec2& com, double margin) {
  std::map<long long, std::pair<Vec2, Vec2>> rows;
  for (const auto& p : patch) {
    const long long key = std::llround(p.y() * 1e7);
    auto it = rows.find(key);
    if (it == rows.end()) {
      rows.emplace(key, std::make_pair(p, p));
    } else {
      if (p.x() < it->second.first.x()) it->second.first = p;
      if (p.x() > it->second.second.x()) it->second.second = p;
    }
  }
  std::vector<Vec2> cand;
  for (const auto& [key, lr] : rows) {
    cand.push_back(lr.first);
    if ((lr.second - lr.first).norm() > 0.0) cand.push_back(lr.second);
  }

  bool any_axis = false;
  const double eps = 1e-12;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    for (std::size_t j = 0; j < cand.size(); ++j) {
      if (i == j) continue;
      const Vec2 a = cand[i];
      const Vec2 d = cand[j] - a;
      const double len = d.norm();
      if (len == 0.0) continue;
      // Left normal; the patch must lie entirely on its left.
      const Vec2 inward(-d.y() / len, d.x() / len);
      bool supporting = true;
      bool strictly_left = false;
      for (const auto& p : cand) {
        const double s = inward.dot(p - a);
        if (s < -eps) {
          supporting = false;
          break;
        }
        if (s > eps) strictly_left = true;
      }
      if (!supporting || !strictly_left) continue;
      any_axis = true;
      if (inward.dot(com - a) < margin) return false;
    }
  }
  return any_axis;
}

}  // namespace oracle
