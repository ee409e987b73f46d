#pragma once

// Contact recovery from a calibrated, quasi-static wrench reading.
//
// Everything here is expressed in the held object's COM frame, which is
// assumed to coincide with the gripper-tip frame and to share the base
// frame's orientation (vertical approach, fixed end-effector orientation).
//
// Sign convention: the sensor reports the wrench the held load exerts on the
// wrist. The gripper therefore pushes on the load with the negated reading.
// `push` below is that gripper-on-object wrench, and the tower's normal force
// closes the balance F_g + F_push + F_N = 0.

#include "stackplace/spatial.hpp"

namespace stackplace {

inline constexpr double kDefaultForceFloor = 1.0;  // N

struct ForceBudget {
  Vec3 gravity = Vec3::Zero();  // weight of object + gripper, measured at hover
  Vec3 push = Vec3::Zero();     // gripper-on-object force from the converted reading
};

struct ContactEstimate {
  Vec3 normal_force = Vec3::Zero();
  Vec3 normal_dir = Vec3::Zero();
  /// Tangent-plane component of the COM-to-contact vector. The normal
  /// component cannot be observed and is represented as exactly zero.
  Vec3 contact_offset_tangent = Vec3::Zero();
  /// Unnormalized flat-seeking direction; its length falls to zero as the
  /// contact surface approaches horizontal.
  Vec3 flat_dir = Vec3::Zero();
  double press_magnitude = 0.0;
};

/// F_N = -(F_g + F_push).
Vec3 solve_normal_force(const ForceBudget& budget);

/// r_T = (F_N x tau) / |F_N|^2 where tau = r x F_N is the contact torque about
/// the COM. Throws DegenerateNormalForce when |F_N| <= force_floor.
Vec3 recover_contact_offset(const Vec3& normal_force, const Vec3& torque,
                            double force_floor = kDefaultForceFloor);

/// z - (n . z) n, identical to -n x (n x z). Zero when n = +-z.
Vec3 flat_direction(const Vec3& n_hat);

/// Full estimate from the gripper-on-object wrench at the COM (hover torque
/// already removed) and the hover gravity load in the same frame. The contact
/// torque is the negated push torque.
ContactEstimate estimate_contact(const Wrench& push_at_com, const Vec3& gravity,
                                 double force_floor = kDefaultForceFloor);

}  // namespace stackplace
