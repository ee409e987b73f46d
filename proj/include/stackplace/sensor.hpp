#pragma once

// Simulated wrist force-torque sensor plus the two-phase calibration.
//
// Readings are the wrench the held load exerts on the wrist, in the wrist
// frame, corrupted by a constant bias and independent Gaussian noise per axis.

#include "stackplace/spatial.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>

namespace stackplace {

struct SensorConfig {
  double sample_rate = 25.0;     // Hz
  double noise_force = 0.25;     // N, per-axis std dev
  double noise_torque = 0.01;    // N*m, per-axis std dev
  Wrench bias;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on a non-positive rate or negative noise.
  void validate() const;

  friend bool operator==(const SensorConfig&, const SensorConfig&) = default;
};

/// Settle then average. Sample counts are floor(time * rate).
struct ReadingWindow {
  double settle_time = 0.1;   // s
  double average_time = 0.5;  // s

  int settle_samples(double sample_rate) const;
  int average_samples(double sample_rate) const;

  friend bool operator==(const ReadingWindow&, const ReadingWindow&) = default;
};

class ForceTorqueSensor {
 public:
  using WrenchSource = std::function<Wrench(double t)>;

  explicit ForceTorqueSensor(const SensorConfig& config);

  const SensorConfig& config() const { return config_; }

  /// One raw sample of `true_wrench`. Advances the sensor clock by one period.
  /// The sequence is a pure function of (seed, sample index).
  Wrench sample(const Wrench& true_wrench);

  /// Discards settle_time worth of samples, then averages average_time worth.
  /// Throws InsufficientSamples if the averaging window holds no sample.
  Wrench settle_and_average(const WrenchSource& source, const ReadingWindow& window);

  double now() const { return static_cast<double>(index_) / config_.sample_rate; }
  std::uint64_t samples_drawn() const { return index_; }

 private:
  SensorConfig config_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> unit_normal_{0.0, 1.0};
  std::uint64_t index_ = 0;
};

class CalibrationState {
 public:
  /// Rotation from wrist axes to base axes at hover (R_BW).
  CalibrationState(const Wrench& hover_baseline, const Mat3& base_from_wrist);

  const Wrench& hover_baseline() const { return hover_baseline_; }
  const std::optional<Wrench>& flat_reference() const { return flat_reference_; }
  /// Object + gripper weight in the base frame, including any force bias.
  const Vec3& gravity_estimate() const { return gravity_estimate_; }

  bool complete() const { return flat_reference_.has_value(); }
  /// Throws CalibrationIncomplete when phase two has not run.
  void require_complete() const;

  void set_flat_reference(const Wrench& flat_reference) { flat_reference_ = flat_reference; }

 private:
  Wrench hover_baseline_;
  std::optional<Wrench> flat_reference_;
  Vec3 gravity_estimate_;
};

/// Mean of `readings`; throws InsufficientSamples when empty.
Wrench mean_wrench(std::span<const Wrench> readings);

/// Phase one: object held statically in free space. Throws CalibrationError if
/// the measured load does not point down.
CalibrationState calibrate_hover(std::span<const Wrench> readings, const Mat3& base_from_wrist);

/// Phase two: object pressed on a known flat surface.
CalibrationState calibrate_flat_reference(CalibrationState partial,
                                          std::span<const Wrench> readings);

}  // namespace stackplace
