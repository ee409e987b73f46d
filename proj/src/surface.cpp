#include "stackplace/surface.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace stackplace {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

// Height drop of a sphere of radius r at horizontal distance s from its apex.
double cap_sag(double r, double s) { return r - std::sqrt(r * r - s * s); }

// d(sag)/ds * (offset / s) = offset / sqrt(r^2 - s^2).
Vec2 cap_sag_gradient(double r, const Vec2& offset) {
  return offset / std::sqrt(r * r - offset.squaredNorm());
}

}  // namespace

double Ripple::height(const Vec2& local) const {
  if (amplitude == 0.0) {
    return 0.0;
  }
  const double k = kTwoPi / wavelength;
  return amplitude * std::cos(k * local.x()) * std::cos(k * local.y());
}

Vec2 Ripple::gradient(const Vec2& local) const {
  if (amplitude == 0.0) {
    return Vec2::Zero();
  }
  const double k = kTwoPi / wavelength;
  return {-amplitude * k * std::sin(k * local.x()) * std::cos(k * local.y()),
          -amplitude * k * std::cos(k * local.x()) * std::sin(k * local.y())};
}

HeightField::HeightField(const Vec2& origin, double pitch, int nx, int ny)
    : origin_(origin), pitch_(pitch), nx_(nx), ny_(ny),
      nodes_(static_cast<std::size_t>(nx) * ny, kNaN) {
  if (!(pitch > 0.0) || nx < 2 || ny < 2) {
    throw std::invalid_argument("HeightField: need pitch > 0 and at least 2x2 nodes");
  }
}

Vec2 HeightField::node_position(int i, int j) const {
  return origin_ + pitch_ * Vec2(i, j);
}

void HeightField::raise_node(int i, int j, double z) {
  double& n = nodes_[index(i, j)];
  if (std::isnan(n) || z > n) {
    n = z;
  }
}

bool HeightField::locate(const Vec2& xy, int& i, int& j, double& tx, double& ty) const {
  if (nodes_.empty()) {
    return false;
  }
  const double gx = (xy.x() - origin_.x()) / pitch_;
  const double gy = (xy.y() - origin_.y()) / pitch_;
  if (!(gx >= 0.0 && gy >= 0.0 && gx <= nx_ - 1 && gy <= ny_ - 1)) {
    return false;
  }
  i = std::min(static_cast<int>(gx), nx_ - 2);
  j = std::min(static_cast<int>(gy), ny_ - 2);
  tx = gx - i;
  ty = gy - j;
  return true;
}

std::optional<double> HeightField::height(const Vec2& xy) const {
  int i, j;
  double tx, ty;
  if (!locate(xy, i, j, tx, ty)) {
    return std::nullopt;
  }
  const double z00 = node(i, j), z10 = node(i + 1, j), z01 = node(i, j + 1),
               z11 = node(i + 1, j + 1);
  if (std::isnan(z00) || std::isnan(z10) || std::isnan(z01) || std::isnan(z11)) {
    return std::nullopt;
  }
  if (z00 == z10 && z00 == z01 && z00 == z11) {
    return z00;  // exact on plateaus
  }
  return (1 - ty) * ((1 - tx) * z00 + tx * z10) + ty * ((1 - tx) * z01 + tx * z11);
}

std::optional<Vec2> HeightField::gradient(const Vec2& xy) const {
  int i, j;
  double tx, ty;
  if (!locate(xy, i, j, tx, ty)) {
    return std::nullopt;
  }
  const double z00 = node(i, j), z10 = node(i + 1, j), z01 = node(i, j + 1),
               z11 = node(i + 1, j + 1);
  if (std::isnan(z00) || std::isnan(z10) || std::isnan(z01) || std::isnan(z11)) {
    return std::nullopt;
  }
  const double dx = ((1 - ty) * (z10 - z00) + ty * (z11 - z01)) / pitch_;
  const double dy = ((1 - tx) * (z01 - z00) + tx * (z11 - z10)) / pitch_;
  return Vec2(dx, dy);
}

bool operator==(const HeightField& a, const HeightField& b) {
  if (a.origin_ != b.origin_ || a.pitch_ != b.pitch_ || a.nx_ != b.nx_ || a.ny_ != b.ny_ ||
      a.nodes_.size() != b.nodes_.size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.nodes_.size(); ++k) {
    const double x = a.nodes_[k], y = b.nodes_[k];
    if (!(x == y || (std::isnan(x) && std::isnan(y)))) {
      return false;
    }
  }
  return true;
}

namespace {

struct HeightVisitor {
  const Vec2& xy;

  std::optional<double> operator()(const FlatPlane& s) const { return s.height; }

  std::optional<double> operator()(const Ramp& s) const {
    const Vec2 dir(std::cos(s.azimuth), std::sin(s.azimuth));
    return s.height_at_origin + std::tan(s.slope) * (xy - s.origin).dot(dir);
  }

  std::optional<double> operator()(const SphericalCap& s) const {
    const Vec2 d = xy - s.apex_xy;
    if (d.norm() > s.base_radius) {
      return std::nullopt;
    }
    return s.apex_height - cap_sag(s.radius, d.norm());
  }

  std::optional<double> operator()(const Puck& s) const {
    const Vec2 d = xy - s.center;
    if (d.norm() > s.radius) {
      return std::nullopt;
    }
    double h = s.height + s.ripple.height(d);
    if (s.crown_radius > 0.0) {
      h -= cap_sag(s.crown_radius, d.norm());
    }
    return h;
  }

  std::optional<double> operator()(const HeightField& s) const { return s.height(xy); }
};

struct GradientVisitor {
  const Vec2& xy;

  std::optional<Vec2> operator()(const FlatPlane&) const { return Vec2::Zero(); }

  std::optional<Vec2> operator()(const Ramp& s) const {
    return std::tan(s.slope) * Vec2(std::cos(s.azimuth), std::sin(s.azimuth));
  }

  std::optional<Vec2> operator()(const SphericalCap& s) const {
    const Vec2 d = xy - s.apex_xy;
    if (d.norm() > s.base_radius) {
      return std::nullopt;
    }
    return Vec2(-cap_sag_gradient(s.radius, d));
  }

  std::optional<Vec2> operator()(const Puck& s) const {
    const Vec2 d = xy - s.center;
    if (d.norm() > s.radius) {
      return std::nullopt;
    }
    Vec2 g = s.ripple.gradient(d);
    if (s.crown_radius > 0.0) {
      g -= cap_sag_gradient(s.crown_radius, d);
    }
    return g;
  }

  std::optional<Vec2> operator()(const HeightField& s) const { return s.gradient(xy); }
};

}  // namespace

std::optional<double> height_at(const SurfaceModel& surface, const Vec2& xy) {
  return std::visit(HeightVisitor{xy}, surface);
}

std::optional<Vec2> gradient_at(const SurfaceModel& surface, const Vec2& xy) {
  return std::visit(GradientVisitor{xy}, surface);
}

Vec3 normal_from_gradient(const Vec2& gradient) {
  return Vec3(-gradient.x(), -gradient.y(), 1.0).normalized();
}

void validate(const SurfaceModel& surface) {
  struct Check {
    void operator()(const FlatPlane& s) const {
      if (!std::isfinite(s.height)) throw std::invalid_argument("plane: non-finite height");
    }
    void operator()(const Ramp& s) const {
      if (!(std::abs(s.slope) < std::numbers::pi / 2)) {
        throw std::invalid_argument("ramp: slope must be within (-90, 90) degrees");
      }
    }
    void operator()(const SphericalCap& s) const {
      if (!(s.radius > 0.0) || !(s.base_radius > 0.0) || !(s.base_radius < s.radius)) {
        throw std::invalid_argument("cap: need 0 < base_radius < radius");
      }
    }
    void operator()(const Puck& s) const {
      if (!(s.radius > 0.0)) throw std::invalid_argument("puck: radius must be positive");
      if (s.crown_radius != 0.0 && !(s.crown_radius > s.radius)) {
        throw std::invalid_argument("puck: crown_radius must exceed the puck radius");
      }
      if (s.ripple.amplitude != 0.0 && !(s.ripple.wavelength > 0.0)) {
        throw std::invalid_argument("puck: ripple wavelength must be positive");
      }
    }
    void operator()(const HeightField&) const {}
  };
  std::visit(Check{}, surface);
}

std::optional<double> Tower::height(const Vec2& xy) const {
  std::optional<double> best = placed_.height(xy);
  for (const auto& s : surfaces_) {
    const auto h = height_at(s, xy);
    if (h && (!best || *h > *best)) {
      best = h;
    }
  }
  return best;
}

std::optional<Vec3> Tower::normal(const Vec2& xy) const {
  std::optional<double> best = placed_.height(xy);
  std::optional<Vec2> grad = best ? placed_.gradient(xy) : std::nullopt;
  for (const auto& s : surfaces_) {
    const auto h = height_at(s, xy);
    if (h && (!best || *h > *best)) {
      best = h;
      grad = gradient_at(s, xy);
    }
  }
  if (!grad) {
    return std::nullopt;
  }
  return normal_from_gradient(*grad);
}

HeightField& Tower::placed_field(double half_extent, double pitch) {
  if (placed_.empty()) {
    const int n = static_cast<int>(std::round(2.0 * half_extent / pitch)) + 1;
    placed_ = HeightField(Vec2(-half_extent, -half_extent), pitch, n, n);
  }
  return placed_;
}

}  // namespace stackplace
