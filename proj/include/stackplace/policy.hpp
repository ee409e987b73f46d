#pragma once

// Closed-loop placement: lower until resistance, read the wrench, release if
// the torque matches the flat-surface reference, otherwise raise, shift the
// COM over the sensed contact (plus a flat-seeking nudge) and try again.

#include "stackplace/estimate.hpp"
#include "stackplace/sensor.hpp"
#include "stackplace/world.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace stackplace {

struct WorkspaceBounds {
  Vec2 min = Vec2(-0.3, -0.3);
  Vec2 max = Vec2(0.3, 0.3);

  Vec2 clamp(const Vec2& xy) const { return xy.cwiseMax(min).cwiseMin(max); }

  friend bool operator==(const WorkspaceBounds&, const WorkspaceBounds&) = default;
};

struct PolicyConfig {
  double resistance_threshold = 10.0;      // N
  double torque_release_threshold = 0.05;  // N*m
  double step_gain = 0.5;                  // multiplier on the unnormalized flat direction
  double raise_height = 0.02;              // m
  int max_iterations = 10;
  double force_floor = kDefaultForceFloor;  // N
  double repress_factor = 1.5;             // threshold multiplier for the one re-press
  int approach_samples = 10;               // descent samples kept in the trace before the stop
  ReadingWindow reading_window;
  WorkspaceBounds workspace;

  void validate() const;

  friend bool operator==(const PolicyConfig&, const PolicyConfig&) = default;
};

enum class Decision { Release, Adjust, Degenerate };
enum class Outcome { ReleasedStable, ReleasedToppled, MaxIterations, NoContact };

std::string_view to_string(Decision d);
std::string_view to_string(Outcome o);
std::optional<Outcome> outcome_from_string(std::string_view s);

struct IterationRecord {
  int iteration = 0;
  Vec2 commanded_xy = Vec2::Zero();
  double stop_height = 0.0;
  double press_threshold = 0.0;
  /// Averaged reading at the assumed COM with the hover baseline removed,
  /// i.e. the sensed contact wrench (tau_N, F_N).
  Wrench calibrated;
  double torque_deviation = 0.0;  // |tau - tau_flat_reference|
  std::optional<ContactEstimate> estimate;
  Vec2 shift = Vec2::Zero();
  Decision decision = Decision::Adjust;
  // Ground truth from the simulator, for analysis only.
  Vec3 true_contact_point = Vec3::Zero();
  Vec3 true_normal = Vec3::UnitZ();
};

/// One sensor sample taken while lowering, expressed like IterationRecord::calibrated.
struct DescentSample {
  int iteration = 0;
  double t = 0.0;
  double tip_z = 0.0;
  double force_norm = 0.0;
  double torque_norm = 0.0;
};

struct PlacementTrace {
  std::vector<IterationRecord> iterations;
  std::vector<DescentSample> descent;
  Outcome outcome = Outcome::MaxIterations;
  std::optional<Vec3> final_com;

  int iteration_count() const { return static_cast<int>(iterations.size()); }
};

/// Horizontal part of r_T + step_gain * d. Workspace clamping happens when
/// the shift is applied to a pose.
Vec2 propose_shift(const ContactEstimate& est, const PolicyConfig& cfg);

/// Contact estimate from an averaged reading and the hover baseline, both
/// already expressed at the assumed COM. The gripper pushes on the load with
/// the negated reading. Throws DegenerateNormalForce.
ContactEstimate estimate_from_reading(const Wrench& reading_com, const Wrench& hover_com,
                                      double force_floor = kDefaultForceFloor);

/// Hover reading in free space, then a press at the resistance threshold on
/// a flat plane at `pickup_height`.
CalibrationState calibrate_in_world(const World& world, ForceTorqueSensor& sensor,
                                    const PolicyConfig& cfg, double pickup_height = 0.0);

/// One lower-and-measure cycle at xy: descend to the resistance threshold,
/// settle and average, compare against the flat reference and, when the
/// normal force allows it, estimate the contact and propose a shift. On a
/// degenerate normal force the probe re-presses once at repress_factor times
/// the threshold. The decision is Release when the torque deviation is below
/// torque_release_threshold; the estimate and shift are filled in either way.
/// Returns nullopt when the descent finds nothing. Descent samples are
/// appended to `descent` when given.
std::optional<IterationRecord> probe_contact(const World& world, const Vec2& xy,
                                             std::optional<double> start_height,
                                             const PolicyConfig& cfg, ForceTorqueSensor& sensor,
                                             const CalibrationState& calib,
                                             std::vector<DescentSample>* descent = nullptr);

/// Throws CalibrationIncomplete when `calib` lacks the flat reference.
PlacementTrace run_placement(World& world, const Vec2& initial_xy, const PolicyConfig& cfg,
                             ForceTorqueSensor& sensor, const CalibrationState& calib);

struct StackItem {
  HeldObject object;
  Vec2 guess_perturbation = Vec2::Zero();
};

/// The first guess is a fixed stand-in; each later guess is the previous
/// object's settled COM plus its perturbation.
struct StackPlan {
  Vec2 first_guess = Vec2::Zero();
  std::vector<StackItem> items;
};

/// Picks, calibrates and places each object in order. Stops after the first
/// placement that does not settle.
std::vector<PlacementTrace> run_stack(World& world, const StackPlan& plan,
                                      const PolicyConfig& cfg, ForceTorqueSensor& sensor);

}  // namespace stackplace
