#include "stackplace/policy.hpp"

#include "stackplace/errors.hpp"

#include <stdexcept>

namespace stackplace {

void PolicyConfig::validate() const {
  if (!(resistance_threshold > 0.0) || !(torque_release_threshold > 0.0) ||
      !(raise_height > 0.0) || !(force_floor > 0.0)) {
    throw std::invalid_argument("policy: thresholds and raise_height must be positive");
  }
  if (!(step_gain >= 0.0)) {
    throw std::invalid_argument("policy: step_gain must be non-negative");
  }
  if (max_iterations < 1) {
    throw std::invalid_argument("policy: max_iterations must be at least 1");
  }
  if (!(repress_factor >= 1.0) || approach_samples < 0) {
    throw std::invalid_argument("policy: invalid re-press or trace settings");
  }
  if (!(workspace.min.array() <= workspace.max.array()).all()) {
    throw std::invalid_argument("policy: empty workspace");
  }
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Release:
      return "release";
    case Decision::Adjust:
      return "adjust";
    case Decision::Degenerate:
      return "degenerate";
  }
  return "?";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::ReleasedStable:
      return "ReleasedStable";
    case Outcome::ReleasedToppled:
      return "ReleasedToppled";
    case Outcome::MaxIterations:
      return "MaxIterations";
    case Outcome::NoContact:
      return "NoContact";
  }
  return "?";
}

std::optional<Outcome> outcome_from_string(std::string_view s) {
  for (auto o : {Outcome::ReleasedStable, Outcome::ReleasedToppled, Outcome::MaxIterations,
                 Outcome::NoContact}) {
    if (to_string(o) == s) return o;
  }
  return std::nullopt;
}

Vec2 propose_shift(const ContactEstimate& est, const PolicyConfig& cfg) {
  const Vec3 s = est.contact_offset_tangent + cfg.step_gain * est.flat_dir;
  return s.head<2>();
}

ContactEstimate estimate_from_reading(const Wrench& reading_com, const Wrench& hover_com,
                                      double force_floor) {
  // The hover torque is removed; the force keeps gravity for the balance.
  const Wrench push(-(reading_com.torque - hover_com.torque), -reading_com.force);
  return estimate_contact(push, hover_com.force, force_floor);
}

CalibrationState calibrate_in_world(const World& world, ForceTorqueSensor& sensor,
                                    const PolicyConfig& cfg, double pickup_height) {
  const Vec3 hover_tip(0.0, 0.0, world.params().start_height);
  const Wrench hover_true = world.hover_wrench_at_wrist(hover_tip);
  const Wrench hover = sensor.settle_and_average([&](double) { return hover_true; },
                                                 cfg.reading_window);
  CalibrationState state =
      calibrate_hover(std::span<const Wrench>(&hover, 1), world.base_from_wrist(hover_tip).rotation());

  ContactParams params = world.params();
  params.start_height = std::max(params.start_height, pickup_height + 0.1);
  const World pickup(Tower({FlatPlane{pickup_height}}), world.held(), world.gripper(), params);
  const DescentResult press = pickup.descend_until_contact(Vec2::Zero(), cfg.resistance_threshold);
  const Vec3 tip(0.0, 0.0, press.stop_height);
  const Wrench flat_true = pickup.true_wrench_at_wrist(tip, &press.contact);
  const Wrench flat = sensor.settle_and_average([&](double) { return flat_true; },
                                                cfg.reading_window);
  return calibrate_flat_reference(std::move(state), std::span<const Wrench>(&flat, 1));
}

std::optional<IterationRecord> probe_contact(const World& world, const Vec2& xy,
                                             std::optional<double> start_height,
                                             const PolicyConfig& cfg, ForceTorqueSensor& sensor,
                                             const CalibrationState& calib,
                                             std::vector<DescentSample>* descent) {
  calib.require_complete();
  const RigidTransform g_wt = world.wrist_from_tip();
  const Wrench hover_com = transform_wrench(g_wt, calib.hover_baseline());
  const Wrench flat_com = transform_wrench(g_wt, *calib.flat_reference());
  const double step = world.params().descent_step;

  IterationRecord rec;
  rec.commanded_xy = xy;
  double threshold = cfg.resistance_threshold;
  for (int attempt = 0;; ++attempt) {
    DescentResult press;
    try {
      press = world.descend_until_contact(xy, threshold, start_height);
    } catch (const NoContactWithinRange&) {
      return std::nullopt;
    }

    if (descent != nullptr) {
      for (int k = std::max(0, press.steps - cfg.approach_samples); k < press.steps; ++k) {
        const Vec3 tip(xy.x(), xy.y(), press.start_height - k * step);
        const auto c = world.contact_at(tip);
        const Wrench raw = sensor.sample(world.true_wrench_at_wrist(tip, c ? &*c : nullptr));
        const Wrench contact = transform_wrench(g_wt, raw) - hover_com;
        descent->push_back({0, sensor.now(), tip.z(), contact.force.norm(), contact.torque.norm()});
      }
    }

    const Vec3 tip(xy.x(), xy.y(), press.stop_height);
    const Wrench truth = world.true_wrench_at_wrist(tip, &press.contact);
    const Wrench reading_com = transform_wrench(
        g_wt, sensor.settle_and_average([&](double) { return truth; }, cfg.reading_window));

    rec.stop_height = press.stop_height;
    rec.press_threshold = threshold;
    rec.calibrated = reading_com - hover_com;
    rec.torque_deviation = (reading_com.torque - flat_com.torque).norm();
    rec.true_contact_point = press.contact.contact_point;
    rec.true_normal = press.contact.surface_normal;
    if (descent != nullptr) {
      descent->push_back({0, sensor.now(), tip.z(), rec.calibrated.force.norm(),
                          rec.calibrated.torque.norm()});
    }

    const bool release = rec.torque_deviation < cfg.torque_release_threshold;
    try {
      rec.estimate = estimate_from_reading(reading_com, hover_com, cfg.force_floor);
      rec.shift = propose_shift(*rec.estimate, cfg);
      rec.decision = release ? Decision::Release : Decision::Adjust;
    } catch (const DegenerateNormalForce&) {
      if (!release && attempt == 0) {
        threshold *= cfg.repress_factor;
        start_height = press.stop_height + cfg.raise_height;
        continue;
      }
      rec.estimate.reset();
      rec.shift = Vec2::Zero();
      rec.decision = release ? Decision::Release : Decision::Degenerate;
    }
    return rec;
  }
}

PlacementTrace run_placement(World& world, const Vec2& initial_xy, const PolicyConfig& cfg,
                             ForceTorqueSensor& sensor, const CalibrationState& calib) {
  cfg.validate();
  calib.require_complete();

  PlacementTrace trace;
  Vec2 xy = cfg.workspace.clamp(initial_xy);
  std::optional<double> start;

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const std::size_t first_sample = trace.descent.size();
    auto rec = probe_contact(world, xy, start, cfg, sensor, calib, &trace.descent);
    for (std::size_t k = first_sample; k < trace.descent.size(); ++k) {
      trace.descent[k].iteration = it;
    }
    if (!rec) {
      trace.outcome = Outcome::NoContact;
      return trace;
    }
    rec->iteration = it;
    start = rec->stop_height + cfg.raise_height;

    if (rec->decision == Decision::Release) {
      rec->shift = Vec2::Zero();
      trace.iterations.push_back(*rec);
      const ReleaseOutcome released = world.release(xy);
      trace.outcome = released.settled() ? Outcome::ReleasedStable : Outcome::ReleasedToppled;
      trace.final_com = released.final_com;
      return trace;
    }
    trace.iterations.push_back(*rec);
    xy = cfg.workspace.clamp(xy + rec->shift);
  }
  trace.outcome = Outcome::MaxIterations;
  return trace;
}

std::vector<PlacementTrace> run_stack(World& world, const StackPlan& plan,
                                      const PolicyConfig& cfg, ForceTorqueSensor& sensor) {
  if (plan.items.empty()) {
    throw std::invalid_argument("run_stack: empty plan");
  }
  std::vector<PlacementTrace> traces;
  Vec2 guess = plan.first_guess;
  for (const auto& item : plan.items) {
    world.set_held(item.object);
    const CalibrationState calib = calibrate_in_world(world, sensor, cfg);
    traces.push_back(run_placement(world, guess + item.guess_perturbation, cfg, sensor, calib));
    const PlacementTrace& last = traces.back();
    if (last.outcome != Outcome::ReleasedStable) {
      break;
    }
    guess = last.final_com->head<2>();
  }
  return traces;
}

}  // namespace stackplace
