#pragma once

// Height-function surfaces for the tower and for held-object bottoms.
// Every primitive is a height z = h(x, y) over its own footprint; queries
// outside that footprint return std::nullopt.

#include "stackplace/spatial.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace stackplace {

/// A * cos(2 pi x / lambda) * cos(2 pi y / lambda) in local coordinates.
/// Models the undulating, semi-flat tops of shuffleboard pucks.
struct Ripple {
  double amplitude = 0.0;
  double wavelength = 0.02;

  double height(const Vec2& local) const;
  Vec2 gradient(const Vec2& local) const;

  friend bool operator==(const Ripple&, const Ripple&) = default;
};

struct FlatPlane {
  double height = 0.0;

  friend bool operator==(const FlatPlane&, const FlatPlane&) = default;
};

/// Unbounded inclined plane rising along `azimuth` (rad from +x) at `slope` (rad).
struct Ramp {
  Vec2 origin = Vec2::Zero();
  double height_at_origin = 0.0;
  double slope = 0.0;
  double azimuth = 0.0;

  friend bool operator==(const Ramp&, const Ramp&) = default;
};

/// Sphere cap of `radius` whose apex sits at (apex_xy, apex_height), defined
/// within `base_radius` of the apex.
struct SphericalCap {
  Vec2 apex_xy = Vec2::Zero();
  double apex_height = 0.0;
  double radius = 1.0;
  double base_radius = 0.05;

  friend bool operator==(const SphericalCap&, const SphericalCap&) = default;
};

/// Disk-shaped top at `height`. A nonzero crown_radius domes the top as a
/// sphere cap of that radius; the ripple is added on top.
struct Puck {
  Vec2 center = Vec2::Zero();
  double radius = 0.05;
  double height = 0.02;
  double crown_radius = 0.0;
  Ripple ripple;

  friend bool operator==(const Puck&, const Puck&) = default;
};

/// Uniform grid with bilinear interpolation. Unset nodes hold NaN and make
/// every cell touching them undefined.
class HeightField {
 public:
  HeightField() = default;
  HeightField(const Vec2& origin, double pitch, int nx, int ny);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double pitch() const { return pitch_; }
  const Vec2& origin() const { return origin_; }
  bool empty() const { return nodes_.empty(); }

  Vec2 node_position(int i, int j) const;
  double node(int i, int j) const { return nodes_[index(i, j)]; }
  void set_node(int i, int j, double z) { nodes_[index(i, j)] = z; }
  /// Raises node (i, j) to z if z is higher or the node is unset.
  void raise_node(int i, int j, double z);

  std::optional<double> height(const Vec2& xy) const;
  std::optional<Vec2> gradient(const Vec2& xy) const;

  /// Node-wise equality treating unset nodes as equal.
  friend bool operator==(const HeightField& a, const HeightField& b);

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
  bool locate(const Vec2& xy, int& i, int& j, double& tx, double& ty) const;

  Vec2 origin_ = Vec2::Zero();
  double pitch_ = 0.0;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<double> nodes_;
};

using SurfaceModel = std::variant<FlatPlane, Ramp, SphericalCap, Puck, HeightField>;

std::optional<double> height_at(const SurfaceModel& surface, const Vec2& xy);
std::optional<Vec2> gradient_at(const SurfaceModel& surface, const Vec2& xy);

/// Upward unit normal of z = h(x, y) given grad h.
Vec3 normal_from_gradient(const Vec2& gradient);

/// Throws std::invalid_argument on non-physical parameters.
void validate(const SurfaceModel& surface);

/// The structure being stacked on: a union of primitives plus a height field
/// that records every object released onto it. Height is the max over all
/// components defined at a point.
class Tower {
 public:
  Tower() = default;
  explicit Tower(std::vector<SurfaceModel> surfaces) : surfaces_(std::move(surfaces)) {}

  const std::vector<SurfaceModel>& surfaces() const { return surfaces_; }
  const HeightField& placed() const { return placed_; }

  std::optional<double> height(const Vec2& xy) const;
  /// Normal of whichever component is highest at xy.
  std::optional<Vec3> normal(const Vec2& xy) const;

  /// Allocates the placement height field if needed.
  HeightField& placed_field(double half_extent, double pitch);

 private:
  std::vector<SurfaceModel> surfaces_;
  HeightField placed_;
};

}  // namespace stackplace
