#pragma once

// Quasi-static ground-truth world for placement trials.
//
// The gripper keeps a fixed, vertical orientation. Frames:
//   B  base (z up, gravity along -z)
//   W  wrist / sensor, `gripper.length` above the tip, axes `sensor_rotation`
//   T  gripper tip; the policy assumes the object's COM sits here
//   R  true object COM = T + held.true_com_offset
// Commanded poses are tip positions. Contact is a frictionless linear spring
// on the vertical interference between the object bottom and the tower.

#include "stackplace/spatial.hpp"
#include "stackplace/surface.hpp"

#include <optional>
#include <vector>

namespace stackplace {

enum class FootprintShape { Disk, Square };

struct FootprintSamples {
  std::vector<Vec2> interior;  // uniform grid, one per pitch^2 of area
  std::vector<Vec2> boundary;  // along the rim at about `pitch` spacing
};

struct Footprint {
  FootprintShape shape = FootprintShape::Disk;
  double radius = 0.05;  // disk radius or square half-side, m

  bool contains(const Vec2& local) const;
  Vec2 project(const Vec2& local) const;
  FootprintSamples samples(double pitch) const;

  friend bool operator==(const Footprint&, const Footprint&) = default;
};

struct HeldObject {
  double mass = 0.2;                       // kg
  Vec3 true_com_offset = Vec3::Zero();     // COM relative to the gripper tip, m
  /// Downward protrusion below the object's bottom plane, in object
  /// coordinates centered on the COM. FlatPlane{0} is a flat bottom.
  SurfaceModel bottom_surface = FlatPlane{0.0};
  Footprint footprint;
  double thickness = 0.02;                 // bottom plane to top, COM at mid-height
  Ripple top_ripple;

  void validate() const;

  friend bool operator==(const HeldObject&, const HeldObject&) = default;
};

struct GripperGeometry {
  double length = 0.15;      // wrist to tip, m
  double mass = 1.0;         // kg, hangs below the sensor
  double com_depth = 0.075;  // gripper COM below the wrist, m
  /// Sensor axes relative to the base (tip axes are base-aligned).
  Mat3 sensor_rotation = Mat3::Identity();

  friend bool operator==(const GripperGeometry&, const GripperGeometry&) = default;
};

struct ContactParams {
  double stiffness = 1e5;          // N/m
  double descent_step = 5e-4;      // m
  double stability_margin = 1e-3;  // m
  double start_height = 0.3;       // tip z where the first descent begins, m
  double min_height = -0.05;       // lowest tip z the descent may reach, m
  double sample_pitch = 1e-3;      // footprint sampling for contact search, m
  double patch_tolerance = 1e-9;   // interference band treated as one patch, m
  double raster_pitch = 2e-3;      // height-field pitch for released objects, m
  double raster_half_extent = 0.3; // m
  double gravity = 9.81;           // m/s^2

  friend bool operator==(const ContactParams&, const ContactParams&) = default;
};

struct ContactResult {
  Vec3 contact_point = Vec3::Zero();  // base frame, on the tower surface
  Vec3 surface_normal = Vec3::UnitZ();
  double penetration = 0.0;
  double normal_force_magnitude = 0.0;
  /// Support points for flat-on-flat contact; empty for a single point.
  std::vector<Vec3> contact_patch;

  bool is_patch() const { return !contact_patch.empty(); }
  Vec3 normal_force() const { return normal_force_magnitude * surface_normal; }
};

struct DescentResult {
  ContactResult contact;
  double stop_height = 0.0;   // tip z when the threshold was reached
  double start_height = 0.0;
  int steps = 0;              // negative when the arm had to back off first
};

struct ReleaseOutcome {
  enum class Kind { Settled, Toppled };
  Kind kind = Kind::Toppled;
  Vec3 final_com = Vec3::Zero();

  bool settled() const { return kind == Kind::Settled; }
};

class World {
 public:
  World(Tower tower, HeldObject held, GripperGeometry gripper = {}, ContactParams params = {});

  const Tower& tower() const { return tower_; }
  const HeldObject& held() const { return held_; }
  const GripperGeometry& gripper() const { return gripper_; }
  const ContactParams& params() const { return params_; }
  const std::vector<Vec3>& placed_coms() const { return placed_coms_; }

  /// Swaps the held object (picking the next one in a stack).
  void set_held(const HeldObject& held);

  Vec3 true_com(const Vec3& tip) const { return tip + held_.true_com_offset; }
  /// g_BW for the wrist above `tip`.
  RigidTransform base_from_wrist(const Vec3& tip) const;
  /// g_WT: the nominal sensor-to-tip geometry the policy uses.
  RigidTransform wrist_from_tip() const;

  /// Contact geometry for the object centered over tip_xy, independent of
  /// height: which point (or patch) touches first and at which height of the
  /// object's bottom plane. Nullopt when nothing lies below the footprint.
  struct Support {
    double bottom_height = 0.0;  // bottom-plane z at first touch
    Vec3 point = Vec3::Zero();
    Vec3 normal = Vec3::UnitZ();
    std::vector<Vec3> patch;
  };
  std::optional<Support> support_at(const Vec2& tip_xy) const;

  /// Contact state with the tip at `tip` (zero force when not touching).
  std::optional<ContactResult> contact_at(const Vec3& tip) const;

  /// Lowers the tip over tip_xy in descent_step increments from start_height
  /// (default params.start_height) until the spring force reaches `threshold`.
  /// Throws NoContactWithinRange when the budget down to min_height runs out.
  DescentResult descend_until_contact(const Vec2& tip_xy, double threshold,
                                      std::optional<double> start_height = std::nullopt) const;

  /// Wrench the load (object + gripper) exerts on the wrist, in wrist axes.
  Wrench true_wrench_at_wrist(const Vec3& tip, const ContactResult* contact) const;
  Wrench hover_wrench_at_wrist(const Vec3& tip) const { return true_wrench_at_wrist(tip, nullptr); }

  /// Contact wrench about the true COM in base axes: (r x F_N, F_N).
  Wrench contact_wrench_at_com(const Vec3& tip, const ContactResult& contact) const;

  /// Independent ground-truth stability test for releasing at tip_xy.
  bool stability_oracle(const Vec2& tip_xy) const;

  /// Opens the gripper. A settled object is rasterized into the tower.
  ReleaseOutcome release(const Vec2& tip_xy);

 private:
  double bottom_plane_offset() const;  // bottom-plane z minus tip z

  Tower tower_;
  HeldObject held_;
  GripperGeometry gripper_;
  ContactParams params_;
  FootprintSamples footprint_samples_;
  std::vector<Vec3> placed_coms_;
};

}  // namespace stackplace
