#include "stackplace/estimate.hpp"

#include "stackplace/errors.hpp"

#include <stdexcept>
#include <string>

namespace stackplace {

Vec3 solve_normal_force(const ForceBudget& budget) { return -(budget.gravity + budget.push); }

Vec3 recover_contact_offset(const Vec3& normal_force, const Vec3& torque, double force_floor) {
  const double magnitude = normal_force.norm();
  if (!(magnitude > force_floor)) {
    throw DegenerateNormalForce("normal force " + std::to_string(magnitude) +
                                " N is at or below the floor of " + std::to_string(force_floor) +
                                " N");
  }
  return normal_force.cross(torque) / (magnitude * magnitude);
}

Vec3 flat_direction(const Vec3& n_hat) {
  const Vec3 z = Vec3::UnitZ();
  return z - n_hat.z() * n_hat;
}

ContactEstimate estimate_contact(const Wrench& push_at_com, const Vec3& gravity,
                                 double force_floor) {
  if (gravity.z() > 0.0) {
    throw std::invalid_argument("estimate_contact: gravity must point down");
  }
  ContactEstimate est;
  est.normal_force = solve_normal_force({gravity, push_at_com.force});
  est.press_magnitude = est.normal_force.norm();
  const Vec3 contact_torque = -push_at_com.torque;
  est.contact_offset_tangent = recover_contact_offset(est.normal_force, contact_torque, force_floor);
  est.normal_dir = est.normal_force / est.press_magnitude;
  est.flat_dir = flat_direction(est.normal_dir);
  return est;
}

}  // namespace stackplace
