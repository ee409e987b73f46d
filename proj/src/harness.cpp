#include "stackplace/harness.hpp"

#include "stackplace/errors.hpp"
#include "stackplace/trace_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

namespace stackplace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr std::uint64_t kCurveTrialBase = 1'000'000;

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::clamp(jobs, 1, std::max(1, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

double median(std::vector<double> v) {
  std::erase_if(v, [](double x) { return std::isnan(x); });
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vec2 uniform_in_disk(std::mt19937_64& rng, double radius) {
  if (radius <= 0.0) return Vec2::Zero();
  const double r = radius * std::sqrt(uniform(rng, 0.0, 1.0));
  const double a = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  return Vec2(r * std::cos(a), r * std::sin(a));
}

Vec2 draw_offset(std::mt19937_64& rng, const InitialGuess& g) {
  if (g.offset_max <= 0.0) return Vec2::Zero();
  const double mag = uniform(rng, g.offset_min, g.offset_max);
  if (g.axis_aligned) {
    static const Vec2 axes[4] = {Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1)};
    return mag * axes[std::uniform_int_distribution<int>(0, 3)(rng)];
  }
  const double a = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  return Vec2(mag * std::cos(a), mag * std::sin(a));
}

SensorConfig sensor_for(const Scenario& s, std::uint64_t seed, std::uint64_t trial) {
  SensorConfig c = s.sensor;
  c.seed = trial_rng(seed, trial, 1)();
  return c;
}

std::string trace_name(const Scenario& s, int trial, std::optional<int> level) {
  char buf[96];
  if (level) {
    std::snprintf(buf, sizeof buf, "traces/%s_trial_%04d_level_%d.trace", s.name.c_str(), trial,
                  *level);
  } else {
    std::snprintf(buf, sizeof buf, "traces/%s_trial_%04d.trace", s.name.c_str(), trial);
  }
  return buf;
}

struct TrialOutput {
  TrialResult result;
  // (iteration, angle error) pairs for the per-iteration statistics.
  std::vector<std::pair<int, double>> direction_errors;
};

// Angle errors of every adjusting iteration against the direction from the
// true COM to `stable`, and the COM error after the first proposal.
void analyze_trace(const PlacementTrace& trace, const Vec2& com_offset, const Vec2& stable,
                   const WorkspaceBounds& workspace, TrialOutput& out, bool first_level) {
  for (const auto& rec : trace.iterations) {
    if (rec.decision != Decision::Adjust) continue;
    const Vec2 com = rec.commanded_xy + com_offset;
    const Vec2 want = stable - com;
    if (want.norm() < 1e-9 || rec.shift.norm() == 0.0) continue;
    out.direction_errors.emplace_back(rec.iteration, angle_between_deg(rec.shift, want));
  }
  if (first_level && !trace.iterations.empty()) {
    const auto& rec = trace.iterations.front();
    Vec2 tip = rec.commanded_xy;
    if (rec.decision == Decision::Adjust) tip = workspace.clamp(tip + rec.shift);
    out.result.first_shift_error = (tip + com_offset - stable).norm();
  }
}

TrialOutput run_trial(const Scenario& s, std::uint64_t seed, int trial, const fs::path& out_dir) {
  TrialOutput out;
  TrialResult& r = out.result;
  r.trial = trial;
  std::mt19937_64 rng = trial_rng(seed, static_cast<std::uint64_t>(trial), 0);
  const Vec2 com_offset = s.object.true_com_offset.head<2>();
  try {
    World world = s.make_world();
    ForceTorqueSensor sensor(sensor_for(s, seed, static_cast<std::uint64_t>(trial)));
    std::vector<PlacementTrace> traces;
    std::vector<Vec2> stable_points;

    if (s.family == Family::MultiStack) {
      StackPlan plan;
      plan.first_guess = s.guess.center + s.guess.offset + draw_offset(rng, s.guess);
      for (int k = 0; k < s.stack_count; ++k) {
        plan.items.push_back({s.object, uniform_in_disk(rng, s.guess.perturbation)});
      }
      r.initial_xy = plan.first_guess + plan.items.front().guess_perturbation;
      traces = run_stack(world, plan, s.policy, sensor);
      stable_points.push_back(s.stable_point);
      for (std::size_t k = 0; k + 1 < traces.size(); ++k) {
        stable_points.push_back(traces[k].final_com->head<2>());
      }
    } else {
      r.initial_xy = s.guess.center + s.guess.offset + draw_offset(rng, s.guess) +
                     uniform_in_disk(rng, s.guess.perturbation);
      const CalibrationState calib = calibrate_in_world(world, sensor, s.policy, s.pickup_height);
      traces.push_back(run_placement(world, r.initial_xy, s.policy, sensor, calib));
      stable_points.push_back(s.stable_point);
    }

    for (std::size_t k = 0; k < traces.size(); ++k) {
      const PlacementTrace& t = traces[k];
      r.iterations += t.iteration_count();
      r.iterations_per_level.push_back(t.iteration_count());
      if (t.outcome == Outcome::ReleasedStable) ++r.levels_placed;
      analyze_trace(t, com_offset, stable_points[k], s.policy.workspace, out, k == 0);
      if (!out_dir.empty()) {
        const std::string name = trace_name(
            s, trial, s.family == Family::MultiStack ? std::optional<int>(k) : std::nullopt);
        write_trace(out_dir / name, t);
        r.trace_files.push_back(name);
      }
    }
    r.outcome = traces.back().outcome;
    r.final_com = traces.back().final_com;
  } catch (const std::exception& e) {
    r.outcome.reset();
    r.error = e.what();
  }
  return out;
}

void add_check(ExperimentReport& rep, std::string name, double value, double threshold,
               bool passed) {
  rep.checks.push_back({std::move(name), value, threshold, passed});
}

void finish_counts(ExperimentReport& rep) {
  rep.successes = rep.count(Outcome::ReleasedStable);
  rep.success_rate = rep.trials > 0 ? static_cast<double>(rep.successes) / rep.trials : 0.0;
  rep.success_ci = wilson_interval(rep.successes, rep.trials);
}

void placement_checks(const Scenario& s, ExperimentReport& rep) {
  const AcceptanceSpec& a = s.acceptance;
  if (a.min_success_rate) {
    add_check(rep, "min_success_rate", rep.success_rate, *a.min_success_rate,
              rep.success_rate >= *a.min_success_rate);
  }
  if (a.max_success_rate) {
    add_check(rep, "max_success_rate", rep.success_rate, *a.max_success_rate,
              rep.success_rate <= *a.max_success_rate);
  }
  if (a.required_outcome) {
    const double frac = rep.trials > 0 ? static_cast<double>(rep.count(*a.required_outcome)) / rep.trials : 0.0;
    add_check(rep, "all_" + std::string(to_string(*a.required_outcome)), frac, 1.0, frac == 1.0);
  }
  if (a.max_iterations_on_success) {
    int worst = 0;
    for (const auto& r : rep.results) {
      if (r.outcome != Outcome::ReleasedStable) continue;
      for (int n : r.iterations_per_level) worst = std::max(worst, n);
    }
    add_check(rep, "max_iterations_on_success", worst, *a.max_iterations_on_success,
              worst <= *a.max_iterations_on_success);
  }
  if (a.max_first_shift_error) {
    double worst = 0.0;
    for (const auto& r : rep.results) {
      worst = std::max(worst, r.first_shift_error.value_or(kInf));
    }
    add_check(rep, "max_first_shift_error", worst, *a.max_first_shift_error,
              worst <= *a.max_first_shift_error);
  }
}

void write_report(const ExperimentReport& rep, const fs::path& out_dir) {
  if (out_dir.empty()) return;
  std::ofstream out(out_dir / (rep.scenario + ".report.json"));
  if (!out) throw std::runtime_error("cannot write report in " + out_dir.string());
  out << rep.to_json();
}

void prepare_out_dir(const fs::path& out_dir) {
  if (out_dir.empty()) return;
  fs::create_directories(out_dir / "traces");
}

std::uint64_t effective_seed(const Scenario& s, const RunOptions& o) {
  return o.seed.value_or(s.seed);
}

ojson vec_json(const Vec2& v) { return ojson::array({v.x(), v.y()}); }
ojson vec_json(const Vec3& v) { return ojson::array({v.x(), v.y(), v.z()}); }
ojson num_json(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

}  // namespace

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

Interval wilson_interval(int successes, int trials) {
  if (trials <= 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double n = trials;
  const double p = successes / n;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double angle_between_deg(const Vec2& a, const Vec2& b) {
  if (a.norm() == 0.0 || b.norm() == 0.0) return kNaN;
  const double cross = a.x() * b.y() - a.y() * b.x();
  return std::abs(std::atan2(cross, a.dot(b))) * kRadToDeg;
}

int ExperimentReport::count(Outcome o) const {
  return static_cast<int>(
      std::count_if(results.begin(), results.end(), [&](const TrialResult& r) { return r.outcome == o; }));
}

bool ExperimentReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AcceptanceCheck& c) { return c.passed; });
}

std::string ExperimentReport::to_json() const {
  ojson root;
  root["schema_version"] = kReportSchemaVersion;
  root["scenario"] = scenario;
  root["family"] = std::string(to_string(family));
  root["seed"] = seed;
  root["trials"] = trials;
  root["successes"] = successes;
  root["success_rate"] = success_rate;
  root["success_ci95"] = ojson::array({success_ci.low, success_ci.high});
  ojson outcomes;
  for (auto o : {Outcome::ReleasedStable, Outcome::ReleasedToppled, Outcome::MaxIterations,
                 Outcome::NoContact}) {
    outcomes[std::string(to_string(o))] = count(o);
  }
  outcomes["Error"] = static_cast<int>(std::count_if(
      results.begin(), results.end(), [](const TrialResult& r) { return !r.outcome; }));
  root["outcomes"] = outcomes;

  ojson dirs = ojson::array();
  for (const auto& d : direction_by_iteration) {
    dirs.push_back(ojson{{"iteration", d.iteration},
                         {"count", d.count},
                         {"median_deg", num_json(d.median_deg)},
                         {"mean_deg", num_json(d.mean_deg)},
                         {"max_deg", num_json(d.max_deg)}});
  }
  root["direction_accuracy"] = dirs;

  ojson trials_json = ojson::array();
  for (const auto& r : results) {
    ojson t;
    t["trial"] = r.trial;
    t["outcome"] = r.outcome ? ojson(std::string(to_string(*r.outcome))) : ojson("Error");
    t["iterations"] = r.iterations;
    if (family == Family::MultiStack) t["iterations_per_level"] = r.iterations_per_level;
    t["levels_placed"] = r.levels_placed;
    t["initial_xy"] = vec_json(r.initial_xy);
    t["final_com"] = r.final_com ? vec_json(*r.final_com) : ojson(nullptr);
    t["first_shift_error"] = r.first_shift_error ? num_json(*r.first_shift_error) : ojson(nullptr);
    t["traces"] = r.trace_files;
    if (!r.error.empty()) t["error"] = r.error;
    trials_json.push_back(t);
  }
  root["trial_results"] = trials_json;

  if (sweep) {
    ojson rows = ojson::array();
    for (const auto& b : sweep->by_radius) {
      rows.push_back(ojson{{"radius", b.radius},
                           {"count", b.count},
                           {"median_error_deg", num_json(b.median_error_deg)},
                           {"median_post_shift_distance", num_json(b.median_post_shift_distance)}});
    }
    root["sweep"] = ojson{{"rows", sweep->rows.size()},
                          {"by_radius", rows},
                          {"centered_resultant_length", num_json(sweep->centered_resultant_length)},
                          {"crossover_offset", num_json(sweep->crossover_offset)},
                          {"monotone", sweep->monotone}};
  }
  if (press) {
    ojson cases = ojson::array();
    for (const auto& c : press->cases) {
      cases.push_back(ojson{{"torque", c.torque},
                            {"lever", vec_json(c.lever)},
                            {"normal", vec_json(c.normal)},
                            {"error_deg", c.error_deg ? num_json(*c.error_deg) : ojson(nullptr)}});
    }
    ojson curve = ojson::array();
    for (const auto& c : press->curve) {
      curve.push_back(ojson{{"torque", c.torque},
                            {"count", c.count},
                            {"degenerate", c.degenerate},
                            {"median_error_deg", num_json(c.median_error_deg)},
                            {"max_error_deg", num_json(c.max_error_deg)}});
    }
    root["press_check"] = ojson{{"cases", cases},
                                {"curve", curve},
                                {"zero_injection_degenerate", press->zero_injection_degenerate},
                                {"max_error_deg", num_json(press->max_error_deg)}};
  }

  ojson checks_json = ojson::array();
  for (const auto& c : checks) {
    checks_json.push_back(ojson{{"name", c.name},
                                {"value", num_json(c.value)},
                                {"threshold", c.threshold},
                                {"passed", c.passed}});
  }
  root["acceptance"] = checks_json;
  root["passed"] = passed();
  return root.dump(2) + "\n";
}

SweepTable sweep_offsets(const Scenario& s, const SweepSpec& grid, const RunOptions& options) {
  const std::uint64_t seed = effective_seed(s, options);
  std::vector<Vec2> offsets = grid.offsets;
  for (double radius : grid.radii) {
    for (int k = 0; k < grid.directions; ++k) {
      const double a = 2.0 * std::numbers::pi * k / grid.directions;
      offsets.emplace_back(radius * std::cos(a), radius * std::sin(a));
    }
  }
  const int n = static_cast<int>(offsets.size()) * grid.repeats;
  const Vec2 com_offset = s.object.true_com_offset.head<2>();

  SweepTable table;
  table.rows.resize(n);
  parallel_for(n, options.jobs, [&](int i) {
    SweepRow& row = table.rows[i];
    row.offset = offsets[i / grid.repeats];
    row.repeat = i % grid.repeats;
    const World world = s.make_world();
    ForceTorqueSensor sensor(sensor_for(s, seed, static_cast<std::uint64_t>(i)));
    const CalibrationState calib = calibrate_in_world(world, sensor, s.policy, s.pickup_height);
    const Vec2 tip = s.stable_point + row.offset - com_offset;
    const auto rec = probe_contact(world, tip, std::nullopt, s.policy, sensor, calib);
    if (rec) {
      row.shift = rec->shift;
      row.decision = rec->decision;
    } else {
      row.decision = Decision::Degenerate;
    }
    row.shift_angle_deg = std::atan2(row.shift.y(), row.shift.x()) * kRadToDeg;
    row.angle_error_deg = angle_between_deg(row.shift, -row.offset);
    row.post_shift_distance = (row.offset + row.shift).norm();
  });

  std::map<long long, std::vector<const SweepRow*>> groups;
  Vec2 resultant = Vec2::Zero();
  int centered = 0;
  for (const auto& row : table.rows) {
    const double r = row.offset.norm();
    if (r < 1e-12) {
      if (row.shift.norm() > 0.0) resultant += row.shift.normalized();
      ++centered;
      continue;
    }
    groups[std::llround(r * 1e9)].push_back(&row);
  }
  table.centered_resultant_length = centered > 0 ? resultant.norm() / centered : kNaN;
  for (const auto& [key, rows] : groups) {
    std::vector<double> err, dist;
    for (const SweepRow* row : rows) {
      err.push_back(row->angle_error_deg);
      dist.push_back(row->post_shift_distance);
    }
    table.by_radius.push_back({key * 1e-9, static_cast<int>(rows.size()), median(err), median(dist)});
  }

  table.monotone = true;
  table.crossover_offset = kNaN;
  const auto& b = table.by_radius;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    if (!(b[i + 1].median_error_deg <= b[i].median_error_deg)) table.monotone = false;
    if (std::isnan(table.crossover_offset) && b[i].median_error_deg >= 45.0 &&
        b[i + 1].median_error_deg < 45.0) {
      const double t = (b[i].median_error_deg - 45.0) /
                       (b[i].median_error_deg - b[i + 1].median_error_deg);
      table.crossover_offset =
          std::exp(std::log(b[i].radius) + t * (std::log(b[i + 1].radius) - std::log(b[i].radius)));
    }
  }
  return table;
}

std::string format_sweep_table(const SweepTable& table) {
  std::ostringstream out;
  out << "# stackplace-sweep 1\n";
  out << "offset_x offset_y repeat shift_x shift_y shift_angle_deg angle_error_deg "
         "post_shift_distance decision\n";
  char buf[320];
  for (const auto& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %d %.17g %.17g %.17g %.17g %.17g %s\n",
                  r.offset.x(), r.offset.y(), r.repeat, r.shift.x(), r.shift.y(),
                  r.shift_angle_deg, r.angle_error_deg, r.post_shift_distance,
                  std::string(to_string(r.decision)).c_str());
    out << buf;
  }
  return out.str();
}

namespace {

// Hovering object pushed by a "finger" at a known point and direction.
PressCase press_case(const Scenario& s, std::uint64_t seed, std::uint64_t index,
                     std::optional<double> torque) {
  const PressCheckSpec& pc = *s.press_check;
  std::mt19937_64 rng = trial_rng(seed, index, 0);
  PressCase c;
  c.torque = torque ? *torque
                    : std::exp(uniform(rng, std::log(pc.torque_min), std::log(pc.torque_max)));
  const double lever = uniform(rng, pc.lever_min, pc.lever_max);
  const double az = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double tilt = uniform(rng, 0.0, pc.max_tilt);
  const double tilt_az = uniform(rng, 0.0, 2.0 * std::numbers::pi);

  const World world = s.make_world();
  const Vec3 tip(0.0, 0.0, s.contact.start_height);
  // Lever arm from the assumed COM (the tip) to a point on the bottom face.
  c.lever = Vec3(lever * std::cos(az), lever * std::sin(az),
                 s.object.true_com_offset.z() - 0.5 * s.object.thickness);
  c.normal = Vec3(std::sin(tilt) * std::cos(tilt_az), std::sin(tilt) * std::sin(tilt_az),
                  std::cos(tilt));

  ContactResult contact;
  contact.contact_point = tip + c.lever;
  contact.surface_normal = c.normal;
  const double arm = c.lever.cross(c.normal).norm();
  contact.normal_force_magnitude = c.torque > 0.0 ? c.torque / arm : 0.0;

  ForceTorqueSensor sensor(sensor_for(s, seed, index));
  const CalibrationState calib = calibrate_in_world(world, sensor, s.policy, s.pickup_height);
  const Wrench truth = world.true_wrench_at_wrist(tip, &contact);
  const Wrench reading = sensor.settle_and_average([&](double) { return truth; },
                                                   s.policy.reading_window);
  const RigidTransform g_wt = world.wrist_from_tip();
  try {
    const ContactEstimate est = estimate_from_reading(
        transform_wrench(g_wt, reading), transform_wrench(g_wt, calib.hover_baseline()),
        s.policy.force_floor);
    const Vec2 shift = propose_shift(est, s.policy);
    ContactEstimate ideal;
    ideal.contact_offset_tangent = tangent_projection(c.lever, c.normal);
    ideal.flat_dir = flat_direction(c.normal);
    const Vec2 want = propose_shift(ideal, s.policy);
    c.error_deg = angle_between_deg(shift, want);
  } catch (const DegenerateNormalForce&) {
    c.error_deg.reset();
  }
  return c;
}

}  // namespace

PressReport finger_press_check(const Scenario& s, const RunOptions& options) {
  if (!s.press_check) throw ScenarioError(s.name + ": press_check section required");
  const std::uint64_t seed = effective_seed(s, options);
  const PressCheckSpec& pc = *s.press_check;
  PressReport rep;
  rep.cases.resize(s.trials);
  parallel_for(s.trials, options.jobs, [&](int i) {
    rep.cases[i] = press_case(s, seed, static_cast<std::uint64_t>(i), std::nullopt);
  });
  rep.max_error_deg = 0.0;
  for (const auto& c : rep.cases) {
    rep.max_error_deg = std::max(rep.max_error_deg, c.error_deg.value_or(kInf));
  }

  const int per = pc.curve_repeats;
  const int n_curve = static_cast<int>(pc.curve_torques.size()) * per;
  std::vector<PressCase> curve_cases(n_curve);
  parallel_for(n_curve, options.jobs, [&](int i) {
    curve_cases[i] = press_case(s, seed, kCurveTrialBase + static_cast<std::uint64_t>(i),
                                pc.curve_torques[i / per]);
  });
  for (std::size_t k = 0; k < pc.curve_torques.size(); ++k) {
    PressCurveRow row;
    row.torque = pc.curve_torques[k];
    std::vector<double> err;
    for (int j = 0; j < per; ++j) {
      const PressCase& c = curve_cases[k * per + j];
      ++row.count;
      if (!c.error_deg) {
        ++row.degenerate;
        continue;
      }
      err.push_back(*c.error_deg);
    }
    row.median_error_deg = median(err);
    row.max_error_deg = err.empty() ? kNaN : *std::max_element(err.begin(), err.end());
    rep.curve.push_back(row);
  }

  rep.zero_injection_degenerate =
      !press_case(s, seed, kCurveTrialBase - 1, 0.0).error_deg.has_value();
  return rep;
}

ExperimentReport run_sweep(const Scenario& s, const RunOptions& options) {
  if (!s.sweep) throw ScenarioError(s.name + ": sweep section required");
  prepare_out_dir(options.out_dir);
  ExperimentReport rep;
  rep.scenario = s.name;
  rep.family = s.family;
  rep.seed = effective_seed(s, options);
  rep.sweep = sweep_offsets(s, *s.sweep, options);
  rep.trials = static_cast<int>(rep.sweep->rows.size());

  const AcceptanceSpec& a = s.acceptance;
  const auto& b = rep.sweep->by_radius;
  if (a.max_median_error_deg_large) {
    double worst = -kInf;
    for (const auto& row : b) {
      if (row.radius >= a.large_offset - 1e-12) worst = std::max(worst, row.median_error_deg);
    }
    add_check(rep, "median_error_large_offsets_deg", worst, *a.max_median_error_deg_large,
              worst > -kInf && worst < *a.max_median_error_deg_large);
  }
  if (a.min_median_error_deg_small) {
    double best = kInf;
    for (const auto& row : b) {
      if (row.radius <= a.small_offset + 1e-12) best = std::min(best, row.median_error_deg);
    }
    add_check(rep, "median_error_small_offsets_deg", best, *a.min_median_error_deg_small,
              best < kInf && best > *a.min_median_error_deg_small);
  }
  if (a.max_median_error_deg_large || a.min_median_error_deg_small) {
    add_check(rep, "monotone_degradation", rep.sweep->monotone ? 1.0 : 0.0, 1.0, rep.sweep->monotone);
  }
  if (!options.out_dir.empty()) {
    std::ofstream out(options.out_dir / (s.name + ".sweep.txt"));
    out << format_sweep_table(*rep.sweep);
  }
  write_report(rep, options.out_dir);
  return rep;
}

ExperimentReport run_press_check(const Scenario& s, const RunOptions& options) {
  prepare_out_dir(options.out_dir);
  ExperimentReport rep;
  rep.scenario = s.name;
  rep.family = s.family;
  rep.seed = effective_seed(s, options);
  rep.press = finger_press_check(s, options);
  rep.trials = static_cast<int>(rep.press->cases.size());
  if (s.acceptance.max_direction_error_deg) {
    add_check(rep, "max_direction_error_deg", rep.press->max_error_deg,
              *s.acceptance.max_direction_error_deg,
              rep.press->max_error_deg < *s.acceptance.max_direction_error_deg);
  }
  add_check(rep, "zero_injection_degenerate", rep.press->zero_injection_degenerate ? 1.0 : 0.0, 1.0,
            rep.press->zero_injection_degenerate);
  write_report(rep, options.out_dir);
  return rep;
}

ExperimentReport run_scenario(const Scenario& s, const RunOptions& options) {
  if (s.family == Family::NoiseSweep) return run_sweep(s, options);
  if (s.family == Family::FingerPress) return run_press_check(s, options);

  prepare_out_dir(options.out_dir);
  ExperimentReport rep;
  rep.scenario = s.name;
  rep.family = s.family;
  rep.seed = effective_seed(s, options);
  rep.trials = s.trials;

  std::vector<TrialOutput> outputs(s.trials);
  parallel_for(s.trials, options.jobs,
               [&](int i) { outputs[i] = run_trial(s, rep.seed, i, options.out_dir); });

  std::map<int, std::vector<double>> by_iteration;
  for (auto& o : outputs) {
    for (const auto& [it, err] : o.direction_errors) by_iteration[it].push_back(err);
    rep.results.push_back(std::move(o.result));
  }
  for (const auto& [it, errs] : by_iteration) {
    DirectionStats d;
    d.iteration = it;
    d.count = static_cast<int>(errs.size());
    d.median_deg = median(errs);
    double sum = 0.0;
    d.max_deg = 0.0;
    for (double e : errs) {
      sum += e;
      d.max_deg = std::max(d.max_deg, e);
    }
    d.mean_deg = sum / d.count;
    rep.direction_by_iteration.push_back(d);
  }
  finish_counts(rep);
  placement_checks(s, rep);
  write_report(rep, options.out_dir);
  return rep;
}

ExperimentReport run_scenario(const std::string& path, const RunOptions& options) {
  return run_scenario(load_scenario(path), options);
}

}  // namespace stackplace
