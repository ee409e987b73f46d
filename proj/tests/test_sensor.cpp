#include "oracles.hpp"

#include "stackplace/errors.hpp"
#include "stackplace/sensor.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace stackplace;

namespace {

SensorConfig quiet() {
  SensorConfig c;
  c.noise_force = 0.0;
  c.noise_torque = 0.0;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  SensorConfig c;
  CHECK_NOTHROW(c.validate());
  c.sample_rate = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SensorConfig{};
  c.noise_force = -1.0;
  CHECK_THROWS_AS(ForceTorqueSensor{c}, std::invalid_argument);
}

TEST_CASE("noiseless sample is exact") {
  ForceTorqueSensor s(quiet());
  const Wrench w(Vec3(0.1, -0.2, 0.3), Vec3(1, 2, -3));
  CHECK(s.sample(w) == w);
  CHECK(s.samples_drawn() == 1);
  CHECK(s.now() == doctest::Approx(1.0 / 25.0));
}

TEST_CASE("bias is added to every sample") {
  SensorConfig c = quiet();
  c.bias = Wrench(Vec3(0.01, 0, 0), Vec3(0, 0.5, 0));
  ForceTorqueSensor s(c);
  CHECK(s.sample(Wrench()) == c.bias);
}

TEST_CASE("fixed seed gives identical sequences") {
  SensorConfig c;
  c.seed = 77;
  ForceTorqueSensor a(c), b(c);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.sample(Wrench()) == b.sample(Wrench()));
  }
  c.seed = 78;
  ForceTorqueSensor d(c);
  CHECK(!(ForceTorqueSensor(SensorConfig{}).sample(Wrench()) == d.sample(Wrench())));
}

TEST_CASE("per-axis noise has the configured spread") {
  SensorConfig c;
  c.noise_force = 0.1;
  c.noise_torque = 0.02;
  c.seed = 5;
  ForceTorqueSensor s(c);
  const int n = 10000;
  Vec6 sum = Vec6::Zero(), sq = Vec6::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec6 v = s.sample(Wrench()).as_vector();
    sum += v;
    sq += v.cwiseProduct(v);
  }
  for (int k = 0; k < 6; ++k) {
    const double mean = sum[k] / n;
    const double sd = std::sqrt(sq[k] / n - mean * mean);
    const double want = k < 3 ? 0.02 : 0.1;
    CHECK(std::abs(sd - want) < 0.05 * want);
  }
}

TEST_CASE("window sample counts use the floor") {
  const ReadingWindow w;
  CHECK(w.settle_samples(25.0) == 2);
  CHECK(w.average_samples(25.0) == 12);
  CHECK(ReadingWindow{0.3, 0.3}.average_samples(10.0) == 3);
  CHECK(ReadingWindow{0.0, 0.01}.average_samples(25.0) == 0);
}

TEST_CASE("settle and average") {
  SUBCASE("constant wrench, no noise, exact") {
    ForceTorqueSensor s(quiet());
    const Wrench w(Vec3(0.1, 0.2, 0.3), Vec3(4, 5, 6));
    const Wrench avg = s.settle_and_average([&](double) { return w; }, ReadingWindow{});
    CHECK((avg.as_vector() - w.as_vector()).norm() < 1e-15);
    CHECK(s.samples_drawn() == 14);
  }
  SUBCASE("settling discards the transient") {
    ForceTorqueSensor s(quiet());
    // A step that is only present during the first 0.08 s (two samples).
    const Wrench avg = s.settle_and_average(
        [](double t) { return Wrench(Vec3::Zero(), Vec3(t < 0.075 ? 100.0 : 1.0, 0, 0)); },
        ReadingWindow{});
    CHECK(avg.force.x() == doctest::Approx(1.0));
  }
  SUBCASE("empty window") {
    ForceTorqueSensor s(quiet());
    CHECK_THROWS_AS(s.settle_and_average([](double) { return Wrench(); }, ReadingWindow{0.1, 0.01}),
                    InsufficientSamples);
  }
  SUBCASE("averaging shrinks the spread by sqrt(n)") {
    SensorConfig c;
    c.noise_force = 0.25;
    c.seed = 9;
    ForceTorqueSensor s(c);
    const int windows = 1000;
    double sq = 0.0;
    for (int i = 0; i < windows; ++i) {
      const Wrench avg = s.settle_and_average([](double) { return Wrench(); }, ReadingWindow{});
      sq += avg.force.x() * avg.force.x();
    }
    const double sd = std::sqrt(sq / windows);
    const double want = 0.25 / std::sqrt(12.0);
    CHECK(std::abs(sd - want) < 0.1 * want);
  }
}

TEST_CASE("hover calibration") {
  const Wrench hover(Vec3::Zero(), Vec3(0, 0, -9.81));
  SUBCASE("gravity estimate in base axes") {
    const auto st = calibrate_hover(std::span<const Wrench>(&hover, 1), Mat3::Identity());
    CHECK((st.gravity_estimate() - Vec3(0, 0, -9.81)).norm() < 1e-15);
    CHECK(!st.complete());
    CHECK_THROWS_AS(st.require_complete(), CalibrationIncomplete);
  }
  SUBCASE("rotated sensor") {
    const Mat3 r = RigidTransform::from_axis_angle(Vec3::UnitX(), 0.4).rotation();
    const Wrench in_wrist(Vec3::Zero(), r.transpose() * Vec3(0, 0, -9.81));
    const auto st = calibrate_hover(std::span<const Wrench>(&in_wrist, 1), r);
    CHECK((st.gravity_estimate() - Vec3(0, 0, -9.81)).norm() < 1e-12);
  }
  SUBCASE("upward load is rejected") {
    const Wrench up(Vec3::Zero(), Vec3(0, 0, 1));
    CHECK_THROWS_AS(calibrate_hover(std::span<const Wrench>(&up, 1), Mat3::Identity()),
                    CalibrationError);
  }
  SUBCASE("no readings") {
    CHECK_THROWS_AS(calibrate_hover({}, Mat3::Identity()), InsufficientSamples);
  }
  SUBCASE("noisy estimate within 3 sigma / sqrt(n)") {
    SensorConfig c;
    c.seed = 3;
    ForceTorqueSensor s(c);
    std::vector<Wrench> readings;
    for (int i = 0; i < 12; ++i) readings.push_back(s.sample(hover));
    const auto st = calibrate_hover(readings, Mat3::Identity());
    const double bound = 3.0 * c.noise_force / std::sqrt(12.0);
    CHECK((st.gravity_estimate() - Vec3(0, 0, -9.81)).cwiseAbs().maxCoeff() < bound);
  }
}

TEST_CASE("flat reference completes calibration") {
  const Wrench hover(Vec3(0.001, 0, 0), Vec3(0, 0, -9.81));
  const Wrench flat(Vec3(0.001, 0, 0), Vec3(0, 0, 0.19));
  auto st = calibrate_hover(std::span<const Wrench>(&hover, 1), Mat3::Identity());
  st = calibrate_flat_reference(std::move(st), std::span<const Wrench>(&flat, 1));
  CHECK(st.complete());
  CHECK_NOTHROW(st.require_complete());
  CHECK(*st.flat_reference() == flat);
}
