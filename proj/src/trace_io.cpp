#include "stackplace/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace stackplace {
namespace {

constexpr const char* kIterationHeader =
    "iteration cmd_x cmd_y stop_z threshold tau_x tau_y tau_z f_x f_y f_z torque_dev "
    "fn_x fn_y fn_z n_x n_y n_z r_x r_y r_z d_x d_y d_z press shift_x shift_y decision "
    "true_x true_y true_z true_nx true_ny true_nz";
constexpr const char* kDescentHeader = "iteration t tip_z force_norm torque_norm";
constexpr int kIterationColumns = 34;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void put(std::ostream& out, const Vec3& v) {
  out << ' ' << num(v.x()) << ' ' << num(v.y()) << ' ' << num(v.z());
}

double parse_num(const std::string& tok) {
  if (tok == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size()) throw std::runtime_error("trace: bad number '" + tok + "'");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

Decision decision_from_string(const std::string& s) {
  for (auto d : {Decision::Release, Decision::Adjust, Decision::Degenerate}) {
    if (to_string(d) == s) return d;
  }
  throw std::runtime_error("trace: unknown decision '" + s + "'");
}

}  // namespace

void write_trace(std::ostream& out, const PlacementTrace& trace) {
  out << "# stackplace-trace " << kTraceFormatVersion << '\n';
  out << "# outcome " << to_string(trace.outcome) << '\n';
  out << "# final_com";
  if (trace.final_com) {
    put(out, *trace.final_com);
  } else {
    out << " none";
  }
  out << "\n[iterations]\n" << kIterationHeader << '\n';
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const Vec3 nan3 = Vec3::Constant(nan);
  for (const auto& r : trace.iterations) {
    out << r.iteration << ' ' << num(r.commanded_xy.x()) << ' ' << num(r.commanded_xy.y()) << ' '
        << num(r.stop_height) << ' ' << num(r.press_threshold);
    put(out, r.calibrated.torque);
    put(out, r.calibrated.force);
    out << ' ' << num(r.torque_deviation);
    put(out, r.estimate ? r.estimate->normal_force : nan3);
    put(out, r.estimate ? r.estimate->normal_dir : nan3);
    put(out, r.estimate ? r.estimate->contact_offset_tangent : nan3);
    put(out, r.estimate ? r.estimate->flat_dir : nan3);
    out << ' ' << num(r.estimate ? r.estimate->press_magnitude : nan) << ' '
        << num(r.shift.x()) << ' ' << num(r.shift.y()) << ' ' << to_string(r.decision);
    put(out, r.true_contact_point);
    put(out, r.true_normal);
    out << '\n';
  }
  out << "[descent]\n" << kDescentHeader << '\n';
  for (const auto& s : trace.descent) {
    out << s.iteration << ' ' << num(s.t) << ' ' << num(s.tip_z) << ' ' << num(s.force_norm) << ' '
        << num(s.torque_norm) << '\n';
  }
}

void write_trace(const std::filesystem::path& path, const PlacementTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_trace(out, trace);
}

PlacementTrace read_trace(std::istream& in) {
  PlacementTrace trace;
  std::string line;
  auto expect = [&](const std::string& want) {
    if (!std::getline(in, line) || line != want) {
      throw std::runtime_error("trace: expected '" + want + "'");
    }
  };
  expect("# stackplace-trace " + std::to_string(kTraceFormatVersion));

  if (!std::getline(in, line)) throw std::runtime_error("trace: missing outcome");
  auto tok = split(line);
  if (tok.size() != 3 || tok[0] != "#" || tok[1] != "outcome") {
    throw std::runtime_error("trace: missing outcome");
  }
  const auto outcome = outcome_from_string(tok[2]);
  if (!outcome) throw std::runtime_error("trace: unknown outcome '" + tok[2] + "'");
  trace.outcome = *outcome;

  if (!std::getline(in, line)) throw std::runtime_error("trace: missing final_com");
  tok = split(line);
  if (tok.size() == 3 && tok[1] == "final_com" && tok[2] == "none") {
  } else if (tok.size() == 5 && tok[1] == "final_com") {
    trace.final_com = Vec3(parse_num(tok[2]), parse_num(tok[3]), parse_num(tok[4]));
  } else {
    throw std::runtime_error("trace: bad final_com line");
  }

  expect("[iterations]");
  expect(kIterationHeader);
  while (std::getline(in, line) && line != "[descent]") {
    tok = split(line);
    if (static_cast<int>(tok.size()) != kIterationColumns) {
      throw std::runtime_error("trace: iteration row has " + std::to_string(tok.size()) +
                               " columns");
    }
    std::size_t i = 0;
    auto next = [&] { return parse_num(tok[i++]); };
    auto next3 = [&] {
      const double x = next(), y = next(), z = next();
      return Vec3(x, y, z);
    };
    IterationRecord r;
    r.iteration = static_cast<int>(next());
    const double cx = next(), cy = next();
    r.commanded_xy = Vec2(cx, cy);
    r.stop_height = next();
    r.press_threshold = next();
    r.calibrated.torque = next3();
    r.calibrated.force = next3();
    r.torque_deviation = next();
    ContactEstimate e;
    e.normal_force = next3();
    e.normal_dir = next3();
    e.contact_offset_tangent = next3();
    e.flat_dir = next3();
    e.press_magnitude = next();
    if (!std::isnan(e.press_magnitude)) r.estimate = e;
    const double sx = next(), sy = next();
    r.shift = Vec2(sx, sy);
    r.decision = decision_from_string(tok[i++]);
    r.true_contact_point = next3();
    r.true_normal = next3();
    trace.iterations.push_back(r);
  }
  if (line != "[descent]") throw std::runtime_error("trace: missing [descent] section");
  expect(kDescentHeader);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    tok = split(line);
    if (tok.size() != 5) throw std::runtime_error("trace: descent row needs 5 columns");
    trace.descent.push_back({static_cast<int>(parse_num(tok[0])), parse_num(tok[1]),
                             parse_num(tok[2]), parse_num(tok[3]), parse_num(tok[4])});
  }
  return trace;
}

PlacementTrace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return read_trace(in);
}

void emit_contact_plot_data(const PlacementTrace& trace, std::ostream& out) {
  if (trace.descent.empty()) {
    throw std::invalid_argument("plot data: trace has no descent samples");
  }
  out << "# contact norms during descent, calibrated at the assumed COM\n";
  out << kDescentHeader << '\n';
  for (const auto& s : trace.descent) {
    out << s.iteration << ' ' << num(s.t) << ' ' << num(s.tip_z) << ' ' << num(s.force_norm) << ' '
        << num(s.torque_norm) << '\n';
  }
}

void emit_contact_plot_data(const PlacementTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  emit_contact_plot_data(trace, out);
}

}  // namespace stackplace
