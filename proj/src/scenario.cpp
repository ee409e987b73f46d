#include "stackplace/scenario.hpp"

#include "stackplace/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace stackplace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string_view to_string(Family f) {
  switch (f) {
    case Family::ZeroOffset:
      return "ZeroOffset";
    case Family::OffsetRecovery:
      return "OffsetRecovery";
    case Family::Ramp:
      return "Ramp";
    case Family::MultiStack:
      return "MultiStack";
    case Family::FingerPress:
      return "FingerPress";
    case Family::NoiseSweep:
      return "NoiseSweep";
  }
  return "?";
}

std::optional<Family> family_from_string(std::string_view s) {
  for (auto f : {Family::ZeroOffset, Family::OffsetRecovery, Family::Ramp, Family::MultiStack,
                 Family::FingerPress, Family::NoiseSweep}) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

Mat3 to_matrix(const RotationSpec& r) {
  if (const auto* aa = std::get_if<AxisAngle>(&r)) {
    return RigidTransform::from_axis_angle(aa->axis, aa->angle).rotation();
  }
  const auto& q = std::get<QuaternionSpec>(r);
  return RigidTransform::from_quaternion(Eigen::Quaterniond(q.w, q.x, q.y, q.z)).rotation();
}

GripperGeometry Scenario::gripper() const {
  GripperGeometry g;
  g.length = gripper_length;
  g.mass = gripper_mass;
  g.com_depth = gripper_com_depth;
  g.sensor_rotation = to_matrix(sensor_mount);
  return g;
}

World Scenario::make_world() const { return World(Tower(tower), object, gripper(), contact); }

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Reads one JSON object, remembering which keys were consumed so that typos
// surface as errors instead of silently falling back to defaults.
class Reader {
 public:
  Reader(const json& node, std::string path, std::string_view source)
      : node_(node), path_(std::move(path)), source_(source) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw ScenarioError(std::string(source_) + ": field '" + (field.empty() ? "<root>" : field) +
                        "': " + what);
  }

  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  bool has(std::string_view key) const { return node_.contains(std::string(key)); }

  const json& at(std::string_view key) {
    used_.insert(std::string(key));
    return node_.at(std::string(key));
  }

  double number(std::string_view key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number()) fail(field(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(field(key), "expected a finite number");
    return d;
  }

  double required_number(std::string_view key) {
    if (!has(key)) fail(field(key), "missing required field");
    return number(key, 0.0);
  }

  /// Angle in radians, or in degrees under key + "_deg".
  double angle(std::string_view key, double fallback) {
    const std::string deg = std::string(key) + "_deg";
    if (has(deg)) {
      if (has(key)) fail(field(key), "give either radians or degrees, not both");
      return number(deg, 0.0) * kDeg;
    }
    return number(key, fallback);
  }

  int integer(std::string_view key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_integer()) fail(field(key), "expected an integer");
    return v.get<int>();
  }

  std::uint64_t unsigned_integer(std::string_view key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(field(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string string(std::string_view key) {
    if (!has(key)) fail(field(key), "missing required field");
    const json& v = at(key);
    if (!v.is_string()) fail(field(key), "expected a string");
    return v.get<std::string>();
  }

  template <int N>
  Eigen::Matrix<double, N, 1> vec(std::string_view key, const Eigen::Matrix<double, N, 1>& fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_array() || v.size() != N) {
      fail(field(key), "expected an array of " + std::to_string(N) + " numbers");
    }
    Eigen::Matrix<double, N, 1> out;
    for (int i = 0; i < N; ++i) {
      if (!v[i].is_number()) fail(field(key) + "[" + std::to_string(i) + "]", "expected a number");
      out[i] = v[i].get<double>();
    }
    return out;
  }

  std::vector<double> numbers(std::string_view key) {
    std::vector<double> out;
    if (!has(key)) return out;
    const json& v = at(key);
    if (!v.is_array()) fail(field(key), "expected an array of numbers");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(field(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  Reader child(std::string_view key) { return Reader(at(key), field(key), source_); }

  std::string_view source() const { return source_; }
  const std::string& path() const { return path_; }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!used_.contains(key)) fail(field(key), "unknown field");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::string_view source_;
  std::set<std::string> used_;
};

Ripple read_ripple(Reader r) {
  Ripple out;
  out.amplitude = r.number("amplitude", out.amplitude);
  out.wavelength = r.number("wavelength", out.wavelength);
  r.finish();
  return out;
}

SurfaceModel read_surface(Reader r) {
  const std::string type = r.string("type");
  SurfaceModel out;
  if (type == "plane") {
    out = FlatPlane{r.number("height", 0.0)};
  } else if (type == "ramp") {
    Ramp s;
    s.origin = r.vec<2>("origin", s.origin);
    s.height_at_origin = r.number("height_at_origin", s.height_at_origin);
    s.slope = r.angle("slope", s.slope);
    s.azimuth = r.angle("azimuth", s.azimuth);
    out = s;
  } else if (type == "cap") {
    SphericalCap s;
    s.apex_xy = r.vec<2>("apex", s.apex_xy);
    s.apex_height = r.number("apex_height", s.apex_height);
    s.radius = r.required_number("radius");
    s.base_radius = r.required_number("base_radius");
    out = s;
  } else if (type == "puck") {
    Puck s;
    s.center = r.vec<2>("center", s.center);
    s.radius = r.required_number("radius");
    s.height = r.required_number("height");
    s.crown_radius = r.number("crown_radius", 0.0);
    if (r.has("ripple")) s.ripple = read_ripple(r.child("ripple"));
    out = s;
  } else if (type == "heightfield") {
    const Vec2 origin = r.vec<2>("origin", Vec2::Zero());
    const double pitch = r.required_number("pitch");
    const int nx = r.integer("nx", 0);
    const int ny = r.integer("ny", 0);
    if (!(pitch > 0.0) || nx < 2 || ny < 2) r.fail(r.path(), "need pitch > 0 and nx, ny >= 2");
    HeightField hf(origin, pitch, nx, ny);
    const json& heights = r.at("heights");
    if (!heights.is_array() || heights.size() != static_cast<std::size_t>(nx) * ny) {
      r.fail(r.field("heights"), "expected nx * ny entries");
    }
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const json& h = heights[static_cast<std::size_t>(j) * nx + i];
        if (h.is_null()) continue;
        if (!h.is_number()) r.fail(r.field("heights"), "entries must be numbers or null");
        hf.set_node(i, j, h.get<double>());
      }
    }
    out = hf;
  } else {
    r.fail(r.field("type"), "unknown surface type '" + type + "'");
  }
  r.finish();
  try {
    validate(out);
  } catch (const std::invalid_argument& e) {
    r.fail(r.path(), e.what());
  }
  return out;
}

HeldObject read_object(Reader r) {
  HeldObject o;
  o.mass = r.number("mass", o.mass);
  o.true_com_offset = r.vec<3>("com_offset", o.true_com_offset);
  if (r.has("footprint")) {
    const std::string shape = r.string("footprint");
    if (shape == "disk") {
      o.footprint.shape = FootprintShape::Disk;
    } else if (shape == "square") {
      o.footprint.shape = FootprintShape::Square;
    } else {
      r.fail(r.field("footprint"), "expected 'disk' or 'square'");
    }
  }
  o.footprint.radius = r.number("footprint_radius", o.footprint.radius);
  o.thickness = r.number("thickness", o.thickness);
  if (r.has("bottom")) o.bottom_surface = read_surface(r.child("bottom"));
  if (r.has("top_ripple")) o.top_ripple = read_ripple(r.child("top_ripple"));
  r.finish();
  try {
    o.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(r.path(), e.what());
  }
  return o;
}

RotationSpec read_rotation(Reader r) {
  RotationSpec out;
  if (r.has("axis_angle") && r.has("quaternion")) {
    r.fail(r.path(), "give either axis_angle or quaternion");
  }
  if (r.has("axis_angle")) {
    const Eigen::Vector4d v = r.vec<4>("axis_angle", Eigen::Vector4d::Zero());
    out = AxisAngle{v.head<3>(), v[3]};
  } else if (r.has("quaternion")) {
    const Eigen::Vector4d v = r.vec<4>("quaternion", Eigen::Vector4d::Zero());
    out = QuaternionSpec{v[0], v[1], v[2], v[3]};
  }
  r.finish();
  try {
    to_matrix(out);
  } catch (const std::invalid_argument& e) {
    r.fail(r.path(), e.what());
  }
  return out;
}

void read_gripper(Reader r, Scenario& s) {
  s.gripper_length = r.number("length", s.gripper_length);
  s.gripper_mass = r.number("mass", s.gripper_mass);
  s.gripper_com_depth = r.number("com_depth", s.gripper_com_depth);
  if (r.has("sensor_mount")) s.sensor_mount = read_rotation(r.child("sensor_mount"));
  r.finish();
}

ContactParams read_contact(Reader r) {
  ContactParams c;
  c.stiffness = r.number("stiffness", c.stiffness);
  c.descent_step = r.number("descent_step", c.descent_step);
  c.stability_margin = r.number("stability_margin", c.stability_margin);
  c.start_height = r.number("start_height", c.start_height);
  c.min_height = r.number("min_height", c.min_height);
  c.sample_pitch = r.number("sample_pitch", c.sample_pitch);
  c.patch_tolerance = r.number("patch_tolerance", c.patch_tolerance);
  c.raster_pitch = r.number("raster_pitch", c.raster_pitch);
  c.raster_half_extent = r.number("raster_half_extent", c.raster_half_extent);
  c.gravity = r.number("gravity", c.gravity);
  r.finish();
  return c;
}

SensorConfig read_sensor(Reader r) {
  SensorConfig c;
  c.sample_rate = r.number("sample_rate", c.sample_rate);
  c.noise_force = r.number("noise_force", c.noise_force);
  c.noise_torque = r.number("noise_torque", c.noise_torque);
  c.bias = Wrench::from_vector(r.vec<6>("bias", Vec6::Zero()));
  r.finish();
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(r.path(), e.what());
  }
  return c;
}

PolicyConfig read_policy(Reader r) {
  PolicyConfig p;
  p.resistance_threshold = r.number("resistance_threshold", p.resistance_threshold);
  p.torque_release_threshold = r.number("torque_release_threshold", p.torque_release_threshold);
  p.step_gain = r.number("step_gain", p.step_gain);
  p.raise_height = r.number("raise_height", p.raise_height);
  p.max_iterations = r.integer("max_iterations", p.max_iterations);
  p.force_floor = r.number("force_floor", p.force_floor);
  p.repress_factor = r.number("repress_factor", p.repress_factor);
  p.approach_samples = r.integer("approach_samples", p.approach_samples);
  if (r.has("window")) {
    Reader w = r.child("window");
    p.reading_window.settle_time = w.number("settle_time", p.reading_window.settle_time);
    p.reading_window.average_time = w.number("average_time", p.reading_window.average_time);
    w.finish();
  }
  if (r.has("workspace")) {
    Reader w = r.child("workspace");
    p.workspace.min = w.vec<2>("min", p.workspace.min);
    p.workspace.max = w.vec<2>("max", p.workspace.max);
    w.finish();
  }
  r.finish();
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(r.path(), e.what());
  }
  return p;
}

InitialGuess read_guess(Reader r) {
  InitialGuess g;
  g.center = r.vec<2>("center", g.center);
  g.offset = r.vec<2>("offset", g.offset);
  g.offset_min = r.number("offset_min", g.offset_min);
  g.offset_max = r.number("offset_max", g.offset_max);
  if (r.has("axis_aligned")) {
    const json& v = r.at("axis_aligned");
    if (!v.is_boolean()) r.fail(r.field("axis_aligned"), "expected true or false");
    g.axis_aligned = v.get<bool>();
  }
  g.perturbation = r.number("perturbation", g.perturbation);
  if (g.offset_min < 0.0 || g.offset_max < g.offset_min || g.perturbation < 0.0) {
    r.fail(r.path(), "need 0 <= offset_min <= offset_max and perturbation >= 0");
  }
  r.finish();
  return g;
}

SweepSpec read_sweep(Reader r) {
  SweepSpec s;
  if (r.has("offsets")) {
    const json& v = r.at("offsets");
    if (!v.is_array()) r.fail(r.field("offsets"), "expected an array of [x, y] pairs");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_array() || v[i].size() != 2 || !v[i][0].is_number() || !v[i][1].is_number()) {
        r.fail(r.field("offsets") + "[" + std::to_string(i) + "]", "expected [x, y]");
      }
      s.offsets.emplace_back(v[i][0].get<double>(), v[i][1].get<double>());
    }
  }
  s.radii = r.numbers("radii");
  s.directions = r.integer("directions", s.directions);
  s.repeats = r.integer("repeats", s.repeats);
  if (s.directions < 1 || s.repeats < 1) r.fail(r.path(), "directions and repeats must be >= 1");
  r.finish();
  return s;
}

PressCheckSpec read_press(Reader r) {
  PressCheckSpec p;
  p.torque_min = r.number("torque_min", p.torque_min);
  p.torque_max = r.number("torque_max", p.torque_max);
  p.lever_min = r.number("lever_min", p.lever_min);
  p.lever_max = r.number("lever_max", p.lever_max);
  p.max_tilt = r.angle("max_tilt", p.max_tilt);
  p.curve_torques = r.numbers("curve_torques");
  p.curve_repeats = r.integer("curve_repeats", p.curve_repeats);
  if (!(p.torque_min > 0.0) || p.torque_max < p.torque_min || !(p.lever_min > 0.0) ||
      p.lever_max < p.lever_min || p.curve_repeats < 1) {
    r.fail(r.path(), "need 0 < torque_min <= torque_max, 0 < lever_min <= lever_max");
  }
  r.finish();
  return p;
}

AcceptanceSpec read_acceptance(Reader r) {
  AcceptanceSpec a;
  auto opt_number = [&](std::string_view key) -> std::optional<double> {
    if (!r.has(key)) return std::nullopt;
    return r.number(key, 0.0);
  };
  a.min_success_rate = opt_number("min_success_rate");
  a.max_success_rate = opt_number("max_success_rate");
  if (r.has("required_outcome")) {
    const std::string s = r.string("required_outcome");
    a.required_outcome = outcome_from_string(s);
    if (!a.required_outcome) r.fail(r.field("required_outcome"), "unknown outcome '" + s + "'");
  }
  if (r.has("max_iterations_on_success")) {
    a.max_iterations_on_success = r.integer("max_iterations_on_success", 0);
  }
  a.max_first_shift_error = opt_number("max_first_shift_error");
  a.max_direction_error_deg = opt_number("max_direction_error_deg");
  a.max_median_error_deg_large = opt_number("max_median_error_deg_large");
  a.min_median_error_deg_small = opt_number("min_median_error_deg_small");
  a.large_offset = r.number("large_offset", a.large_offset);
  a.small_offset = r.number("small_offset", a.small_offset);
  r.finish();
  return a;
}

// ---------------------------------------------------------------- writing

ojson vec_json(const Vec2& v) { return ojson::array({v.x(), v.y()}); }
ojson vec_json(const Vec3& v) { return ojson::array({v.x(), v.y(), v.z()}); }

ojson ripple_json(const Ripple& r) {
  return ojson{{"amplitude", r.amplitude}, {"wavelength", r.wavelength}};
}

ojson surface_json(const SurfaceModel& surface) {
  struct Visitor {
    ojson operator()(const FlatPlane& s) const {
      return ojson{{"type", "plane"}, {"height", s.height}};
    }
    ojson operator()(const Ramp& s) const {
      return ojson{{"type", "ramp"},
                   {"origin", vec_json(s.origin)},
                   {"height_at_origin", s.height_at_origin},
                   {"slope", s.slope},
                   {"azimuth", s.azimuth}};
    }
    ojson operator()(const SphericalCap& s) const {
      return ojson{{"type", "cap"},
                   {"apex", vec_json(s.apex_xy)},
                   {"apex_height", s.apex_height},
                   {"radius", s.radius},
                   {"base_radius", s.base_radius}};
    }
    ojson operator()(const Puck& s) const {
      return ojson{{"type", "puck"},
                   {"center", vec_json(s.center)},
                   {"radius", s.radius},
                   {"height", s.height},
                   {"crown_radius", s.crown_radius},
                   {"ripple", ripple_json(s.ripple)}};
    }
    ojson operator()(const HeightField& s) const {
      ojson heights = ojson::array();
      for (int j = 0; j < s.ny(); ++j) {
        for (int i = 0; i < s.nx(); ++i) {
          const double h = s.node(i, j);
          heights.push_back(std::isnan(h) ? ojson(nullptr) : ojson(h));
        }
      }
      return ojson{{"type", "heightfield"}, {"origin", vec_json(s.origin())}, {"pitch", s.pitch()},
                   {"nx", s.nx()},           {"ny", s.ny()},                  {"heights", heights}};
    }
  };
  return std::visit(Visitor{}, surface);
}

ojson rotation_json(const RotationSpec& r) {
  if (const auto* aa = std::get_if<AxisAngle>(&r)) {
    return ojson{{"axis_angle", ojson::array({aa->axis.x(), aa->axis.y(), aa->axis.z(), aa->angle})}};
  }
  const auto& q = std::get<QuaternionSpec>(r);
  return ojson{{"quaternion", ojson::array({q.w, q.x, q.y, q.z})}};
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string_view source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string(source) + ": " + e.what());
  }
  Reader r(root, "", source);
  Scenario s;
  s.schema_version = r.integer("schema_version", -1);
  if (s.schema_version != kScenarioSchemaVersion) {
    r.fail("schema_version", "expected " + std::to_string(kScenarioSchemaVersion));
  }
  s.name = r.string("name");
  const std::string family = r.string("family");
  const auto f = family_from_string(family);
  if (!f) r.fail("family", "unknown family '" + family + "'");
  s.family = *f;
  s.trials = r.integer("trials", s.trials);
  if (s.trials < 1) r.fail("trials", "must be >= 1");
  s.seed = r.unsigned_integer("seed", s.seed);

  if (r.has("tower")) {
    const json& tower = r.at("tower");
    if (!tower.is_array()) r.fail("tower", "expected an array of surfaces");
    for (std::size_t i = 0; i < tower.size(); ++i) {
      s.tower.push_back(read_surface(Reader(tower[i], "tower[" + std::to_string(i) + "]", source)));
    }
  }
  if (r.has("object")) s.object = read_object(r.child("object"));
  s.stack_count = r.integer("stack_count", s.stack_count);
  if (s.stack_count < 1) r.fail("stack_count", "must be >= 1");
  if (r.has("gripper")) read_gripper(r.child("gripper"), s);
  if (r.has("contact")) s.contact = read_contact(r.child("contact"));
  s.pickup_height = r.number("pickup_height", s.pickup_height);
  if (r.has("sensor")) s.sensor = read_sensor(r.child("sensor"));
  if (r.has("policy")) s.policy = read_policy(r.child("policy"));
  if (r.has("guess")) s.guess = read_guess(r.child("guess"));
  s.stable_point = r.vec<2>("stable_point", s.stable_point);
  if (r.has("sweep")) s.sweep = read_sweep(r.child("sweep"));
  if (r.has("press_check")) s.press_check = read_press(r.child("press_check"));
  if (r.has("acceptance")) s.acceptance = read_acceptance(r.child("acceptance"));
  r.finish();

  if (s.family == Family::NoiseSweep) {
    if (!s.sweep) r.fail("sweep", "required for NoiseSweep");
    const std::size_t rows =
        (s.sweep->offsets.size() + s.sweep->radii.size() * s.sweep->directions) * s.sweep->repeats;
    if (rows != static_cast<std::size_t>(s.trials)) {
      r.fail("trials", "must equal the sweep row count (" + std::to_string(rows) + ")");
    }
  }
  if (s.family == Family::FingerPress && !s.press_check) {
    r.fail("press_check", "required for FingerPress");
  }

  try {
    s.make_world();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string(source) + ": " + e.what());
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError(path + ": cannot open");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string serialize_scenario(const Scenario& s) {
  ojson root;
  root["schema_version"] = s.schema_version;
  root["name"] = s.name;
  root["family"] = std::string(to_string(s.family));
  root["trials"] = s.trials;
  root["seed"] = s.seed;
  ojson tower = ojson::array();
  for (const auto& surface : s.tower) tower.push_back(surface_json(surface));
  root["tower"] = tower;

  const HeldObject& o = s.object;
  root["object"] = ojson{
      {"mass", o.mass},
      {"com_offset", vec_json(o.true_com_offset)},
      {"footprint", o.footprint.shape == FootprintShape::Disk ? "disk" : "square"},
      {"footprint_radius", o.footprint.radius},
      {"thickness", o.thickness},
      {"bottom", surface_json(o.bottom_surface)},
      {"top_ripple", ripple_json(o.top_ripple)}};
  root["stack_count"] = s.stack_count;
  root["gripper"] = ojson{{"length", s.gripper_length},
                          {"mass", s.gripper_mass},
                          {"com_depth", s.gripper_com_depth},
                          {"sensor_mount", rotation_json(s.sensor_mount)}};
  const ContactParams& c = s.contact;
  root["contact"] = ojson{{"stiffness", c.stiffness},
                          {"descent_step", c.descent_step},
                          {"stability_margin", c.stability_margin},
                          {"start_height", c.start_height},
                          {"min_height", c.min_height},
                          {"sample_pitch", c.sample_pitch},
                          {"patch_tolerance", c.patch_tolerance},
                          {"raster_pitch", c.raster_pitch},
                          {"raster_half_extent", c.raster_half_extent},
                          {"gravity", c.gravity}};
  root["pickup_height"] = s.pickup_height;
  const Vec6 bias = s.sensor.bias.as_vector();
  root["sensor"] = ojson{{"sample_rate", s.sensor.sample_rate},
                         {"noise_force", s.sensor.noise_force},
                         {"noise_torque", s.sensor.noise_torque},
                         {"bias", ojson(std::vector<double>(bias.data(), bias.data() + 6))}};
  const PolicyConfig& p = s.policy;
  root["policy"] = ojson{
      {"resistance_threshold", p.resistance_threshold},
      {"torque_release_threshold", p.torque_release_threshold},
      {"step_gain", p.step_gain},
      {"raise_height", p.raise_height},
      {"max_iterations", p.max_iterations},
      {"force_floor", p.force_floor},
      {"repress_factor", p.repress_factor},
      {"approach_samples", p.approach_samples},
      {"window", ojson{{"settle_time", p.reading_window.settle_time},
                       {"average_time", p.reading_window.average_time}}},
      {"workspace", ojson{{"min", vec_json(p.workspace.min)}, {"max", vec_json(p.workspace.max)}}}};
  root["guess"] = ojson{{"center", vec_json(s.guess.center)},
                        {"offset", vec_json(s.guess.offset)},
                        {"offset_min", s.guess.offset_min},
                        {"offset_max", s.guess.offset_max},
                        {"axis_aligned", s.guess.axis_aligned},
                        {"perturbation", s.guess.perturbation}};
  root["stable_point"] = vec_json(s.stable_point);
  if (s.sweep) {
    ojson offsets = ojson::array();
    for (const auto& v : s.sweep->offsets) offsets.push_back(vec_json(v));
    root["sweep"] = ojson{{"offsets", offsets},
                          {"radii", s.sweep->radii},
                          {"directions", s.sweep->directions},
                          {"repeats", s.sweep->repeats}};
  }
  if (s.press_check) {
    const PressCheckSpec& pc = *s.press_check;
    root["press_check"] = ojson{{"torque_min", pc.torque_min},
                                {"torque_max", pc.torque_max},
                                {"lever_min", pc.lever_min},
                                {"lever_max", pc.lever_max},
                                {"max_tilt", pc.max_tilt},
                                {"curve_torques", pc.curve_torques},
                                {"curve_repeats", pc.curve_repeats}};
  }
  const AcceptanceSpec& a = s.acceptance;
  ojson acc = ojson::object();
  if (a.min_success_rate) acc["min_success_rate"] = *a.min_success_rate;
  if (a.max_success_rate) acc["max_success_rate"] = *a.max_success_rate;
  if (a.required_outcome) acc["required_outcome"] = std::string(to_string(*a.required_outcome));
  if (a.max_iterations_on_success) acc["max_iterations_on_success"] = *a.max_iterations_on_success;
  if (a.max_first_shift_error) acc["max_first_shift_error"] = *a.max_first_shift_error;
  if (a.max_direction_error_deg) acc["max_direction_error_deg"] = *a.max_direction_error_deg;
  if (a.max_median_error_deg_large) acc["max_median_error_deg_large"] = *a.max_median_error_deg_large;
  if (a.min_median_error_deg_small) acc["min_median_error_deg_small"] = *a.min_median_error_deg_small;
  acc["large_offset"] = a.large_offset;
  acc["small_offset"] = a.small_offset;
  root["acceptance"] = acc;
  return root.dump(2) + "\n";
}

}  // namespace stackplace
