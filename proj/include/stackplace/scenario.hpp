#pragma once

// Scenario files: versioned JSON describing one experiment family.
// See README.md for the field reference.

#include "stackplace/policy.hpp"
#include "stackplace/sensor.hpp"
#include "stackplace/world.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace stackplace {

inline constexpr int kScenarioSchemaVersion = 1;

enum class Family { ZeroOffset, OffsetRecovery, Ramp, MultiStack, FingerPress, NoiseSweep };

std::string_view to_string(Family f);
std::optional<Family> family_from_string(std::string_view s);

struct AxisAngle {
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;  // rad
  friend bool operator==(const AxisAngle&, const AxisAngle&) = default;
};

struct QuaternionSpec {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;
  friend bool operator==(const QuaternionSpec&, const QuaternionSpec&) = default;
};

/// Kept in the form it was written so files round-trip exactly.
using RotationSpec = std::variant<AxisAngle, QuaternionSpec>;
Mat3 to_matrix(const RotationSpec& r);

/// Where the first descent is aimed: center + offset, plus an optional random
/// radial offset with magnitude in [offset_min, offset_max] and a random
/// uniform-in-disk perturbation of radius `perturbation` (per stack level).
/// With `axis_aligned` the random offset points along +-x or +-y only.
struct InitialGuess {
  Vec2 center = Vec2::Zero();
  Vec2 offset = Vec2::Zero();
  double offset_min = 0.0;
  double offset_max = 0.0;
  bool axis_aligned = false;
  double perturbation = 0.0;
  friend bool operator==(const InitialGuess&, const InitialGuess&) = default;
};

/// Offsets from the stable point. `radii` x `directions` generates rings
/// on top of the explicit list.
struct SweepSpec {
  std::vector<Vec2> offsets;
  std::vector<double> radii;
  int directions = 8;
  int repeats = 20;
  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

/// Synthetic "finger press" injections. Each trial draws a torque magnitude
/// log-uniformly in [torque_min, torque_max], a lever arm in
/// [lever_min, lever_max] at a random azimuth, and a press direction tilted up
/// to max_tilt from vertical. `curve_torques` adds a magnitude sweep.
struct PressCheckSpec {
  double torque_min = 1.0;
  double torque_max = 30.0;
  double lever_min = 0.02;
  double lever_max = 0.06;
  double max_tilt = 0.35;  // rad
  std::vector<double> curve_torques;
  int curve_repeats = 20;
  friend bool operator==(const PressCheckSpec&, const PressCheckSpec&) = default;
};

/// Thresholds checked after the run; the CLI exits non-zero if any fails.
struct AcceptanceSpec {
  std::optional<double> min_success_rate;
  std::optional<double> max_success_rate;
  std::optional<Outcome> required_outcome;        // every trial ends this way
  std::optional<int> max_iterations_on_success;
  std::optional<double> max_first_shift_error;    // m, post-shift distance to stable point
  std::optional<double> max_direction_error_deg;  // per case (FingerPress)
  std::optional<double> max_median_error_deg_large;  // NoiseSweep, offsets >= large_offset
  std::optional<double> min_median_error_deg_small;  // NoiseSweep, offsets <= small_offset
  double large_offset = 0.02;
  double small_offset = 0.002;
  friend bool operator==(const AcceptanceSpec&, const AcceptanceSpec&) = default;
};

struct Scenario {
  int schema_version = kScenarioSchemaVersion;
  std::string name;
  Family family = Family::ZeroOffset;
  int trials = 1;
  std::uint64_t seed = 0;

  std::vector<SurfaceModel> tower;
  HeldObject object;
  int stack_count = 1;
  double gripper_length = 0.15;
  double gripper_mass = 1.0;
  double gripper_com_depth = 0.075;
  RotationSpec sensor_mount = AxisAngle{};
  ContactParams contact;
  double pickup_height = 0.0;
  SensorConfig sensor;  // seed is replaced per trial
  PolicyConfig policy;
  InitialGuess guess;
  Vec2 stable_point = Vec2::Zero();
  std::optional<SweepSpec> sweep;
  std::optional<PressCheckSpec> press_check;
  AcceptanceSpec acceptance;

  GripperGeometry gripper() const;
  /// Fresh world for one trial.
  World make_world() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws ScenarioError with the offending field path, or line and column for
/// malformed JSON. `source` names the input in messages.
Scenario parse_scenario(std::string_view text, std::string_view source = "<scenario>");
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& scenario);

}  // namespace stackplace
