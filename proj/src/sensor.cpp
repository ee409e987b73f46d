#include "stackplace/sensor.hpp"

#include "stackplace/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace stackplace {

namespace {

// floor(t * rate) with slack for products such as 0.3 * 10 = 2.9999999999999996.
int sample_count(double seconds, double rate) {
  return static_cast<int>(std::floor(seconds * rate + 1e-9));
}

}  // namespace

void SensorConfig::validate() const {
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
    throw std::invalid_argument("sensor: sample_rate must be positive");
  }
  if (!(noise_force >= 0.0) || !(noise_torque >= 0.0)) {
    throw std::invalid_argument("sensor: noise std devs must be non-negative");
  }
  if (!bias.is_finite()) {
    throw std::invalid_argument("sensor: bias must be finite");
  }
}

int ReadingWindow::settle_samples(double sample_rate) const {
  return sample_count(settle_time, sample_rate);
}

int ReadingWindow::average_samples(double sample_rate) const {
  return sample_count(average_time, sample_rate);
}

ForceTorqueSensor::ForceTorqueSensor(const SensorConfig& config)
    : config_(config), rng_(config.seed) {
  config_.validate();
}

Wrench ForceTorqueSensor::sample(const Wrench& true_wrench) {
  Wrench out = true_wrench + config_.bias;
  // Draw all six normals unconditionally so the stream position depends on the
  // sample index only.
  for (int i = 0; i < 3; ++i) {
    out.torque[i] += config_.noise_torque * unit_normal_(rng_);
  }
  for (int i = 0; i < 3; ++i) {
    out.force[i] += config_.noise_force * unit_normal_(rng_);
  }
  ++index_;
  return out;
}

Wrench ForceTorqueSensor::settle_and_average(const WrenchSource& source,
                                             const ReadingWindow& window) {
  if (window.settle_time < 0.0 || window.average_time < 0.0) {
    throw std::invalid_argument("settle_and_average: negative window");
  }
  const int n = window.average_samples(config_.sample_rate);
  if (n < 1) {
    throw InsufficientSamples("settle_and_average: averaging window holds no samples");
  }
  const int settle = window.settle_samples(config_.sample_rate);
  for (int i = 0; i < settle; ++i) {
    sample(source(now()));
  }
  Wrench sum;
  for (int i = 0; i < n; ++i) {
    sum += sample(source(now()));
  }
  return (1.0 / n) * sum;
}

CalibrationState::CalibrationState(const Wrench& hover_baseline, const Mat3& base_from_wrist)
    : hover_baseline_(hover_baseline), gravity_estimate_(base_from_wrist * hover_baseline.force) {}

void CalibrationState::require_complete() const {
  if (!complete()) {
    throw CalibrationIncomplete("flat-surface reference has not been recorded");
  }
}

Wrench mean_wrench(std::span<const Wrench> readings) {
  if (readings.empty()) {
    throw InsufficientSamples("no readings to average");
  }
  Wrench sum;
  for (const auto& w : readings) {
    sum += w;
  }
  return (1.0 / static_cast<double>(readings.size())) * sum;
}

CalibrationState calibrate_hover(std::span<const Wrench> readings, const Mat3& base_from_wrist) {
  CalibrationState state(mean_wrench(readings), base_from_wrist);
  if (!(state.gravity_estimate().z() < 0.0)) {
    throw CalibrationError("hover load does not point down; is an object grasped?");
  }
  return state;
}

CalibrationState calibrate_flat_reference(CalibrationState partial,
                                          std::span<const Wrench> readings) {
  partial.set_flat_reference(mean_wrench(readings));
  return partial;
}

}  // namespace stackplace
