#include "stackplace/world.hpp"

#include "stackplace/errors.hpp"
#include "stackplace/stability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stackplace {

bool Footprint::contains(const Vec2& local) const {
  if (shape == FootprintShape::Disk) {
    return local.norm() <= radius * (1.0 + 1e-12);
  }
  return local.cwiseAbs().maxCoeff() <= radius * (1.0 + 1e-12);
}

Vec2 Footprint::project(const Vec2& local) const {
  if (shape == FootprintShape::Disk) {
    const double n = local.norm();
    return n > radius ? Vec2(local * (radius / n)) : local;
  }
  return local.cwiseMax(-radius).cwiseMin(radius);
}

FootprintSamples Footprint::samples(double pitch) const {
  FootprintSamples out;
  const int n = std::max(2, static_cast<int>(std::ceil(2.0 * radius / pitch)));
  const double h = 2.0 * radius / n;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const Vec2 u(-radius + i * h, -radius + j * h);
      if (contains(u)) {
        out.interior.push_back(u);
      }
    }
  }
  if (shape == FootprintShape::Disk) {
    const int m = std::max(8, static_cast<int>(std::ceil(2.0 * std::numbers::pi * radius / pitch)));
    for (int k = 0; k < m; ++k) {
      const double a = 2.0 * std::numbers::pi * k / m;
      out.boundary.emplace_back(radius * std::cos(a), radius * std::sin(a));
    }
  }
  // Square edges are already on the interior grid.
  return out;
}

void HeldObject::validate() const {
  if (!(mass > 0.0)) throw std::invalid_argument("object: mass must be positive");
  if (!(footprint.radius > 0.0)) throw std::invalid_argument("object: footprint_radius must be positive");
  if (!(thickness > 0.0)) throw std::invalid_argument("object: thickness must be positive");
  if (!true_com_offset.allFinite()) throw std::invalid_argument("object: non-finite COM offset");
  stackplace::validate(bottom_surface);
}

World::World(Tower tower, HeldObject held, GripperGeometry gripper, ContactParams params)
    : tower_(std::move(tower)), held_(std::move(held)), gripper_(gripper), params_(params) {
  for (const auto& s : tower_.surfaces()) {
    stackplace::validate(s);
  }
  if (!(params_.stiffness > 0.0) || !(params_.descent_step > 0.0) ||
      !(params_.sample_pitch > 0.0) || !(params_.raster_pitch > 0.0) ||
      !(params_.stability_margin >= 0.0) || !(params_.min_height < params_.start_height)) {
    throw std::invalid_argument("world: invalid contact parameters");
  }
  if (!(gripper_.length > 0.0) || !(gripper_.mass >= 0.0)) {
    throw std::invalid_argument("world: invalid gripper geometry");
  }
  RigidTransform(gripper_.sensor_rotation, Vec3::Zero());  // validates the mount rotation
  set_held(held_);
}

void World::set_held(const HeldObject& held) {
  held.validate();
  held_ = held;
  footprint_samples_ = held_.footprint.samples(params_.sample_pitch);
}

RigidTransform World::base_from_wrist(const Vec3& tip) const {
  return {gripper_.sensor_rotation, tip + Vec3(0.0, 0.0, gripper_.length)};
}

RigidTransform World::wrist_from_tip() const {
  const Mat3 rt = gripper_.sensor_rotation.transpose();
  return {rt, rt * Vec3(0.0, 0.0, -gripper_.length)};
}

double World::bottom_plane_offset() const {
  return held_.true_com_offset.z() - 0.5 * held_.thickness;
}

namespace {

double protrusion(const SurfaceModel& bottom, const Vec2& local) {
  return height_at(bottom, local).value_or(0.0);
}

double hull_area(const std::vector<Vec2>& hull) {
  double a = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2& p = hull[i];
    const Vec2& q = hull[(i + 1) % hull.size()];
    a += p.x() * q.y() - p.y() * q.x();
  }
  return 0.5 * std::abs(a);
}

}  // namespace

std::optional<World::Support> World::support_at(const Vec2& tip_xy) const {
  const Vec2 com_xy = tip_xy + held_.true_com_offset.head<2>();
  const double lowest = -std::numeric_limits<double>::infinity();

  auto interference = [&](const Vec2& u) -> double {
    const auto h = tower_.height(com_xy + u);
    return h ? *h + protrusion(held_.bottom_surface, u) : lowest;
  };

  struct Scored {
    Vec2 u;
    double f;
    bool interior;
  };
  std::vector<Scored> scored;
  scored.reserve(footprint_samples_.interior.size() + footprint_samples_.boundary.size());
  double best = lowest;
  for (const auto& u : footprint_samples_.interior) {
    scored.push_back({u, interference(u), true});
    best = std::max(best, scored.back().f);
  }
  for (const auto& u : footprint_samples_.boundary) {
    scored.push_back({u, interference(u), false});
    best = std::max(best, scored.back().f);
  }
  if (best == lowest) {
    return std::nullopt;
  }

  std::vector<Vec2> band;
  std::vector<Vec2> band_interior;
  Vec2 best_u = Vec2::Zero();
  double best_f = lowest;
  for (const auto& s : scored) {
    if (s.f >= best - params_.patch_tolerance) {
      band.push_back(s.u);
      if (s.interior) band_interior.push_back(s.u);
    }
    if (s.f > best_f) {
      best_f = s.f;
      best_u = s.u;
    }
  }

  Support support;
  const double pitch = params_.sample_pitch;
  const auto hull = band.size() >= 3 ? convex_hull(band) : std::vector<Vec2>{};
  if (hull.size() >= 3 && hull_area(hull) >= pitch * pitch) {
    const auto& pts = band_interior.empty() ? band : band_interior;
    Vec2 centroid = Vec2::Zero();
    for (const auto& u : pts) centroid += u;
    centroid /= static_cast<double>(pts.size());
    const Vec2 c = com_xy + centroid;
    support.bottom_height = best;
    support.point = Vec3(c.x(), c.y(), tower_.height(c).value_or(best));
    support.normal = tower_.normal(c).value_or(Vec3::UnitZ());
    support.patch.reserve(band.size());
    for (const auto& u : band) {
      const Vec2 q = com_xy + u;
      support.patch.emplace_back(q.x(), q.y(), tower_.height(q).value_or(best));
    }
    return support;
  }

  // Single dominant contact: refine the best sample by projected pattern search.
  Vec2 u = best_u;
  double f = best_f;
  static const std::array<Vec2, 8> kDirs = {
      Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1),
      Vec2(M_SQRT1_2, M_SQRT1_2), Vec2(-M_SQRT1_2, M_SQRT1_2),
      Vec2(M_SQRT1_2, -M_SQRT1_2), Vec2(-M_SQRT1_2, -M_SQRT1_2)};
  for (double step = pitch; step > 1e-9; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (const auto& d : kDirs) {
        const Vec2 cand = held_.footprint.project(u + step * d);
        const double fc = interference(cand);
        if (fc > f) {
          f = fc;
          u = cand;
          improved = true;
        }
      }
    }
  }
  const Vec2 c = com_xy + u;
  support.bottom_height = f;
  support.point = Vec3(c.x(), c.y(), *tower_.height(c));
  support.normal = tower_.normal(c).value_or(Vec3::UnitZ());
  return support;
}

std::optional<ContactResult> World::contact_at(const Vec3& tip) const {
  const auto support = support_at(tip.head<2>());
  if (!support) {
    return std::nullopt;
  }
  ContactResult c;
  c.contact_point = support->point;
  c.surface_normal = support->normal;
  c.penetration = std::max(0.0, support->bottom_height - (tip.z() + bottom_plane_offset()));
  c.normal_force_magnitude = params_.stiffness * c.penetration;
  c.contact_patch = support->patch;
  return c;
}

DescentResult World::descend_until_contact(const Vec2& tip_xy, double threshold,
                                           std::optional<double> start_height) const {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("descend_until_contact: threshold must be positive");
  }
  const auto support = support_at(tip_xy);
  if (!support) {
    throw NoContactWithinRange("nothing below the footprint");
  }
  const double z0 = start_height.value_or(params_.start_height);
  const double step = params_.descent_step;
  const double offset = bottom_plane_offset();
  auto force_at = [&](int n) {
    const double pen = support->bottom_height - (z0 - n * step + offset);
    return params_.stiffness * std::max(0.0, pen);
  };
  // First step index whose spring force reaches the threshold; negative when
  // the start height is already pressed past it and the arm backs off.
  const double target = support->bottom_height - offset - threshold / params_.stiffness;
  int n = static_cast<int>(std::ceil((z0 - target) / step));
  while (force_at(n) < threshold) ++n;
  while (force_at(n - 1) >= threshold) --n;

  DescentResult out;
  out.start_height = z0;
  out.steps = n;
  out.stop_height = z0 - n * step;
  if (out.stop_height < params_.min_height) {
    throw NoContactWithinRange("descent reached the height budget at z = " +
                               std::to_string(params_.min_height) + " m without resistance");
  }
  ContactResult& c = out.contact;
  c.contact_point = support->point;
  c.surface_normal = support->normal;
  c.penetration = support->bottom_height - (out.stop_height + offset);
  c.normal_force_magnitude = params_.stiffness * c.penetration;
  c.contact_patch = support->patch;
  return out;
}

Wrench World::true_wrench_at_wrist(const Vec3& tip, const ContactResult* contact) const {
  const RigidTransform g_bw = base_from_wrist(tip);
  auto at_wrist = [&](const Vec3& point, const Vec3& force) {
    // Point-force wrench in a base-aligned frame at `point`, carried to W.
    const RigidTransform g_pw = compose(RigidTransform::from_translation(-point), g_bw);
    return transform_wrench(g_pw, Wrench(Vec3::Zero(), force));
  };
  const Vec3 down(0.0, 0.0, -params_.gravity);
  Wrench w = at_wrist(true_com(tip), held_.mass * down);
  const Vec3 wrist = g_bw.translation();
  w += at_wrist(wrist - Vec3(0.0, 0.0, gripper_.com_depth), gripper_.mass * down);
  if (contact != nullptr && contact->normal_force_magnitude > 0.0) {
    w += at_wrist(contact->contact_point, contact->normal_force());
  }
  return w;
}

Wrench World::contact_wrench_at_com(const Vec3& tip, const ContactResult& contact) const {
  const Vec3 f = contact.normal_force();
  return {(contact.contact_point - true_com(tip)).cross(f), f};
}

bool World::stability_oracle(const Vec2& tip_xy) const {
  const auto support = support_at(tip_xy);
  if (!support) {
    return false;
  }
  const Vec2 com = tip_xy + held_.true_com_offset.head<2>();
  if (!support->patch.empty()) {
    std::vector<Vec2> pts;
    pts.reserve(support->patch.size());
    for (const auto& p : support->patch) pts.push_back(p.head<2>());
    return patch_supports(pts, com, params_.stability_margin);
  }
  return (support->point.head<2>() - com).norm() <= params_.stability_margin;
}

ReleaseOutcome World::release(const Vec2& tip_xy) {
  ReleaseOutcome out;
  const Vec2 com = tip_xy + held_.true_com_offset.head<2>();
  const auto support = support_at(tip_xy);
  if (!support || !stability_oracle(tip_xy)) {
    out.kind = ReleaseOutcome::Kind::Toppled;
    out.final_com = Vec3(com.x(), com.y(), support ? support->bottom_height : 0.0);
    return out;
  }
  const double bottom = support->bottom_height;
  const double top = bottom + held_.thickness;
  HeightField& field = tower_.placed_field(params_.raster_half_extent, params_.raster_pitch);
  const double r = held_.footprint.radius;
  const double pitch = field.pitch();
  const int i0 = std::max(0, static_cast<int>(std::floor((com.x() - r - field.origin().x()) / pitch)));
  const int i1 = std::min(field.nx() - 1, static_cast<int>(std::ceil((com.x() + r - field.origin().x()) / pitch)));
  const int j0 = std::max(0, static_cast<int>(std::floor((com.y() - r - field.origin().y()) / pitch)));
  const int j1 = std::min(field.ny() - 1, static_cast<int>(std::ceil((com.y() + r - field.origin().y()) / pitch)));
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      const Vec2 local = field.node_position(i, j) - com;
      if (held_.footprint.contains(local)) {
        field.raise_node(i, j, top + held_.top_ripple.height(local));
      }
    }
  }
  out.kind = ReleaseOutcome::Kind::Settled;
  out.final_com = Vec3(com.x(), com.y(), bottom + 0.5 * held_.thickness);
  placed_coms_.push_back(out.final_com);
  return out;
}

}  // namespace stackplace
