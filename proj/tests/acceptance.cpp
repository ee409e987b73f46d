// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "flat_configs.hpp"
#include "oracles.hpp"

#include "stackplace/estimate.hpp"
#include "stackplace/harness.hpp"
#include "stackplace/spatial.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <thread>

using namespace stackplace;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string path_of(const std::string& name) {
  return (std::filesystem::path(STACKPLACE_SCENARIO_DIR) / (name + ".json")).string();
}

int jobs() { return static_cast<int>(std::max(2u, std::thread::hardware_concurrency())); }

RigidTransform random_transform(std::mt19937_64& rng) {
  return RigidTransform(oracle::random_rotation(rng), oracle::random_vec(rng, 1.0));
}

Wrench random_wrench(std::mt19937_64& rng) {
  return Wrench(oracle::random_vec(rng, 5.0), oracle::random_vec(rng, 50.0));
}

double max_abs(const Wrench& a, const Wrench& b) {
  return std::max((a.torque - b.torque).cwiseAbs().maxCoeff(), (a.force - b.force).cwiseAbs().maxCoeff());
}

std::map<std::string, ExperimentReport> reports;

const ExperimentReport& run(const std::string& name) {
  auto it = reports.find(name);
  if (it == reports.end()) {
    it = reports.emplace(name, run_scenario(path_of(name), {std::nullopt, jobs(), {}})).first;
  }
  return it->second;
}

const AcceptanceCheck* check_named(const ExperimentReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

void zero_offset() {
  const auto t0 = Clock::now();
  const ExperimentReport& quiet = run("zero_offset");
  const ExperimentReport& noisy = run("zero_offset_noisy");
  const double elapsed = seconds_since(t0);
  bool one_iteration = true;
  for (const auto& r : quiet.results) one_iteration = one_iteration && r.iterations == 1;
  const int n = quiet.count(Outcome::ReleasedStable);
  const int m = noisy.count(Outcome::ReleasedStable);
  report(1, "zero-offset detection",
         n == 16 && quiet.trials == 16 && one_iteration && m >= 15 && noisy.trials == 16 && elapsed < 5.0,
         fmt("noiseless %d/16 stable, one iteration each: %s; noisy %d/16; %.2f s", n,
             one_iteration ? "yes" : "no", m, elapsed));
}

void contact_round_trip() {
  std::mt19937_64 rng(101);
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Vec3 r = oracle::random_vec(rng, 0.1);
    const Vec3 n = oracle::random_unit(rng);
    const Vec3 fn = oracle::uniform(rng, 1.0, 100.0) * n;
    const Vec3 rt = recover_contact_offset(fn, oracle::moment(r, fn));
    const Vec3 want = r - r.dot(n) * n;
    worst = std::max(worst, (rt - want).norm() / std::max(want.norm(), 1e-3));
  }
  const double elapsed = seconds_since(t0);
  report(2, "contact offset round trip", worst <= 1e-10 && elapsed < 1.0,
         fmt("10000 cases, worst relative error %.3g, %.3f s", worst, elapsed));
}

void wrench_transforms() {
  std::mt19937_64 rng(102);
  double compose_err = 0.0, power_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto g_ab = random_transform(rng), g_bc = random_transform(rng);
    const Wrench w = random_wrench(rng);
    compose_err = std::max(compose_err, max_abs(transform_wrench(g_bc, transform_wrench(g_ab, w)),
                                                transform_wrench(compose(g_ab, g_bc), w)));
    const Twist v_b{oracle::random_vec(rng, 2.0), oracle::random_vec(rng, 2.0)};
    const Twist v_a = transform_twist(g_ab, v_b);
    const Wrench f_b = transform_wrench(g_ab, w);
    const double p_a = w.torque.dot(v_a.angular) + w.force.dot(v_a.linear);
    const double p_b = f_b.torque.dot(v_b.angular) + f_b.force.dot(v_b.linear);
    power_err = std::max(power_err, std::abs(p_a - p_b) / std::max(1.0, std::abs(p_a)));
  }
  report(3, "wrench transform consistency", compose_err <= 1e-12 && power_err <= 1e-12,
         fmt("1000 pairs, composed vs sequential %.3g, power invariance %.3g", compose_err, power_err));
}

void flat_direction_check() {
  std::mt19937_64 rng(103);
  double identity_err = 0.0, angle_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3 n = oracle::random_unit(rng);
    const Vec3 d = flat_direction(n);
    const Vec3 z = Vec3::UnitZ();
    identity_err = std::max(identity_err, (-n.cross(n.cross(z)) - d).cwiseAbs().maxCoeff());
    if (d.norm() < 1e-9) continue;
    const Vec3 best = oracle::dense_flat_search(n);
    angle_err = std::max(angle_err, std::acos(std::clamp(best.dot(d.normalized()), -1.0, 1.0)));
  }
  report(4, "flat direction identity and optimality", identity_err <= 1e-15 && angle_err <= 1e-3,
         fmt("1000 normals, identity %.3g, worst angle to dense search %.3g rad", identity_err, angle_err));
}

void offset_recovery() {
  const ExperimentReport& r = run("offset_recovery");
  int within = 0;
  double worst = 0.0;
  for (const auto& t : r.results) {
    if (t.first_shift_error && *t.first_shift_error <= 0.01) ++within;
    if (t.first_shift_error) worst = std::max(worst, *t.first_shift_error);
  }
  report(5, "one-iteration shift quality", r.trials == 50 && within == 50,
         fmt("%d/%d first shifts within 1 cm, worst %.3g m", within, r.trials, worst));
}

void ramp() {
  const ExperimentReport& r = run("ramp");
  const int stable = r.count(Outcome::ReleasedStable);
  const int maxed = r.count(Outcome::MaxIterations);
  report(6, "ramp failure mode", r.trials == 10 && stable == 0 && maxed == 10,
         fmt("%d trials, %d stable, %d MaxIterations", r.trials, stable, maxed));
}

void multistack() {
  const ExperimentReport& r = run("multistack");
  int full = 0;
  for (const auto& t : r.results) full += t.levels_placed == 6 ? 1 : 0;
  report(7, "six-object stack", full == r.trials && r.trials > 0,
         fmt("%d/%d runs placed 6/6 stable", full, r.trials));
}

void finger_press() {
  const ExperimentReport& r = run("finger_press");
  int ok = 0;
  for (const auto& c : r.press->cases) ok += (c.error_deg && *c.error_deg <= 5.0) ? 1 : 0;
  const int n = static_cast<int>(r.press->cases.size());
  report(8, "finger-press check", n == 100 && ok == n,
         fmt("%d/%d within 5 deg, worst %.3f deg", ok, n, r.press->max_error_deg));
}

void noise_sweep() {
  const ExperimentReport& r = run("noise_sweep");
  const SweepTable& t = *r.sweep;
  std::string curve;
  for (const auto& row : t.by_radius) curve += fmt(" %.3g m:%.1f", row.radius, row.median_error_deg);
  const auto* large = check_named(r, "median_error_large_offsets_deg");
  const auto* small = check_named(r, "median_error_small_offsets_deg");
  const bool ok = large && small && large->passed && small->passed && t.monotone;
  report(9, "sensitivity failure mode", ok,
         fmt("monotone %s, median >=2 cm %.2f deg, <=2 mm %.2f deg, crossover %.4f m; curve%s",
             t.monotone ? "yes" : "no", large ? large->value : NAN, small ? small->value : NAN,
             t.crossover_offset, curve.c_str()));

  // Same sweep at the default descent step, where the press overshoots the threshold.
  Scenario s = load_scenario(path_of("noise_sweep"));
  s.contact.descent_step = ContactParams{}.descent_step;
  const SweepTable d = sweep_offsets(s, *s.sweep, {std::nullopt, jobs(), {}});
  std::string dcurve;
  for (const auto& row : d.by_radius) dcurve += fmt(" %.3g m:%.1f", row.radius, row.median_error_deg);
  std::printf("[INFO]  9 default descent step %.1e m: crossover %.4f m; curve%s\n",
              s.contact.descent_step, d.crossover_offset, dcurve.c_str());
}

void oracle_equivalence() {
  std::mt19937_64 rng(110);
  ContactParams params;
  params.sample_pitch = 3e-3;
  int configs = 0, agree = 0, ties = 0, tries = 0;
  while (configs < 500 && tries < 5000) {
    ++tries;
    const auto c = flat_configs::random_config(rng, params);
    const auto a = flat_configs::compare(c);
    if (a == flat_configs::Agreement::PointContact) continue;
    ++configs;
    if (a == flat_configs::Agreement::Agree) ++agree;
    if (a == flat_configs::Agreement::Tie) ++ties;
  }
  report(10, "stability oracle equivalence", configs == 500 && agree + ties == configs,
         fmt("%d/%d agree, %d within 1e-9 m of the margin", agree + ties, configs, ties));
}

void determinism() {
  int same = 0, total = 0;
  std::string bad;
  for (const auto& entry : std::filesystem::directory_iterator(STACKPLACE_SCENARIO_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const std::string name = entry.path().stem().string();
    const std::string first = run(name).to_json();
    const std::string again = run_scenario(path_of(name), {std::nullopt, 1, {}}).to_json();
    ++total;
    if (first == again) {
      ++same;
    } else {
      bad += " " + name;
    }
  }
  report(11, "determinism", same == total && total > 0,
         fmt("%d/%d scenarios byte-identical across job counts%s", same, total, bad.c_str()));
}

}  // namespace

int main() {
  zero_offset();
  contact_round_trip();
  wrench_transforms();
  flat_direction_check();
  offset_recovery();
  ramp();
  multistack();
  finger_press();
  noise_sweep();
  oracle_equivalence();
  determinism();
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
