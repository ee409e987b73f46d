#pragma once

// Batch experiments: run every trial of a scenario, aggregate outcomes and
// check the scenario's embedded acceptance thresholds.

#include "stackplace/policy.hpp"
#include "stackplace/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace stackplace {

inline constexpr int kReportSchemaVersion = 1;

struct RunOptions {
  std::optional<std::uint64_t> seed;  // replaces the scenario seed
  int jobs = 1;
  /// Reports, traces and tables go here; nothing is written when empty.
  std::filesystem::path out_dir;
};

/// Independent random stream for (seed, trial, stream).
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval for k successes in n trials (z = 1.96).
Interval wilson_interval(int successes, int trials);

/// Angle between two plane vectors in degrees; NaN if either is zero.
double angle_between_deg(const Vec2& a, const Vec2& b);

struct TrialResult {
  int trial = 0;
  std::optional<Outcome> outcome;  // empty when the trial raised an error
  std::string error;
  int iterations = 0;              // summed over levels for stacks
  std::vector<int> iterations_per_level;
  int levels_placed = 0;           // ReleasedStable levels (stacks), else 0 or 1
  Vec2 initial_xy = Vec2::Zero();
  std::optional<Vec3> final_com;
  /// Distance from the COM after the first proposed shift to the stable point.
  std::optional<double> first_shift_error;
  std::vector<std::string> trace_files;  // relative to the output directory
};

struct DirectionStats {
  int iteration = 0;
  int count = 0;
  double median_deg = 0.0;
  double mean_deg = 0.0;
  double max_deg = 0.0;
};

struct AcceptanceCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct SweepRow {
  Vec2 offset = Vec2::Zero();  // COM offset from the stable point
  int repeat = 0;
  Vec2 shift = Vec2::Zero();
  double shift_angle_deg = 0.0;    // atan2 of the shift
  double angle_error_deg = 0.0;    // NaN for the centered case
  double post_shift_distance = 0.0;
  Decision decision = Decision::Adjust;
};

struct SweepSummaryRow {
  double radius = 0.0;
  int count = 0;
  double median_error_deg = 0.0;
  double median_post_shift_distance = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::vector<SweepSummaryRow> by_radius;  // ascending radius, centered rows excluded
  /// Mean resultant length of shift directions for centered rows; near zero
  /// when directions are spread uniformly. NaN without centered rows.
  double centered_resultant_length = 0.0;
  /// Smallest radius where the median error interpolates through 45 degrees,
  /// or NaN if the curve never crosses.
  double crossover_offset = 0.0;
  bool monotone = false;  // median error never rises with radius
};

struct PressCase {
  double torque = 0.0;  // injected magnitude, N*m
  Vec3 lever = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  std::optional<double> error_deg;  // empty when the estimate was degenerate
};

struct PressCurveRow {
  double torque = 0.0;
  int count = 0;
  int degenerate = 0;
  double median_error_deg = 0.0;
  double max_error_deg = 0.0;
};

struct PressReport {
  std::vector<PressCase> cases;
  std::vector<PressCurveRow> curve;
  bool zero_injection_degenerate = false;
  double max_error_deg = 0.0;
};

struct ExperimentReport {
  std::string scenario;
  Family family = Family::ZeroOffset;
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<TrialResult> results;
  int successes = 0;
  double success_rate = 0.0;
  Interval success_ci;
  std::vector<DirectionStats> direction_by_iteration;
  std::optional<SweepTable> sweep;
  std::optional<PressReport> press;
  std::vector<AcceptanceCheck> checks;

  int count(Outcome o) const;
  bool passed() const;
  /// Deterministic JSON: same scenario and seed give the same bytes.
  std::string to_json() const;
};

/// Runs the scenario's family: placement trials, stacks, the offset sweep
/// (NoiseSweep) or the finger-press check (FingerPress). Per-trial errors are
/// recorded in the report.
ExperimentReport run_scenario(const Scenario& scenario, const RunOptions& options = {});
ExperimentReport run_scenario(const std::string& path, const RunOptions& options = {});

/// First-press shift for every sweep offset and repeat.
SweepTable sweep_offsets(const Scenario& scenario, const SweepSpec& grid, const RunOptions& options);

/// Synthetic external wrenches on the hovering object, checked against the
/// known shift direction.
PressReport finger_press_check(const Scenario& scenario, const RunOptions& options);

/// Adds the press/sweep checks without running placements.
ExperimentReport run_sweep(const Scenario& scenario, const RunOptions& options);
ExperimentReport run_press_check(const Scenario& scenario, const RunOptions& options);

std::string format_sweep_table(const SweepTable& table);

}  // namespace stackplace
