#pragma once

// Rigid transforms and wrench algebra.
//
// Conventions
// -----------
// A RigidTransform g_ab is the pose of frame B expressed in frame A, so a
// point with coordinates q_b in B has coordinates q_a = R q_b + p in A.
// Composition follows g_ac = g_ab * g_bc.
//
// Wrenches are stored torque first, (tau, f). Twists are stored angular
// first, (omega, v), so the natural pairing is the plain dot product
// <F, V> = tau . omega + f . v.
//
// With that ordering the twist adjoint is
//
//   Ad_g = [ R      0 ]
//          [ p^R    R ]
//
// and a twist of a rigid body expressed in B maps to A as V_a = Ad_{g_ab} V_b.
// The statically equivalent wrench therefore maps from A to B as
// F_b = Ad_{g_ab}^T F_a, i.e. f_b = R^T f_a and tau_b = R^T (tau_a - p x f_a):
// the torque is re-taken about B's origin and then rotated into B's axes.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <string_view>

namespace stackplace {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

enum class FrameId { Base, Wrist, GripperTip, RockCom, Contact };

std::string_view to_string(FrameId frame);

struct Wrench {
  Vec3 torque = Vec3::Zero();
  Vec3 force = Vec3::Zero();

  Wrench() = default;
  Wrench(const Vec3& torque_, const Vec3& force_) : torque(torque_), force(force_) {}

  static Wrench from_vector(const Vec6& v);
  Vec6 as_vector() const;
  bool is_finite() const;

  Wrench& operator+=(const Wrench& other);
  Wrench& operator-=(const Wrench& other);
  friend Wrench operator+(Wrench a, const Wrench& b) { return a += b; }
  friend Wrench operator-(Wrench a, const Wrench& b) { return a -= b; }
  friend Wrench operator-(const Wrench& w) { return {-w.torque, -w.force}; }
  friend Wrench operator*(double s, const Wrench& w) { return {s * w.torque, s * w.force}; }
  friend bool operator==(const Wrench&, const Wrench&) = default;
};

/// Rigid body velocity, angular part first. Only used to pin the wrench
/// convention through power invariance.
struct Twist {
  Vec3 angular = Vec3::Zero();
  Vec3 linear = Vec3::Zero();
};

class RigidTransform {
 public:
  static constexpr double kOrthonormalTolerance = 1e-9;
  static constexpr double kDriftTolerance = 1e-12;

  RigidTransform();
  /// Throws std::invalid_argument unless rotation is orthonormal with det +1
  /// (within kOrthonormalTolerance) and all entries are finite.
  RigidTransform(const Mat3& rotation, const Vec3& translation);

  static RigidTransform identity() { return {}; }
  static RigidTransform from_translation(const Vec3& translation);
  /// Rotation of `angle` radians about `axis` (need not be unit length).
  static RigidTransform from_axis_angle(const Vec3& axis, double angle,
                                        const Vec3& translation = Vec3::Zero());
  static RigidTransform from_quaternion(const Eigen::Quaterniond& q,
                                        const Vec3& translation = Vec3::Zero());

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  /// Maps a point from the child frame into the parent frame.
  Vec3 apply(const Vec3& point) const { return rotation_ * point + translation_; }

  /// 6x6 twist adjoint in (omega, v) ordering.
  Mat6 adjoint() const;

  bool is_approx(const RigidTransform& other, double tol) const;

 private:
  struct Unchecked {};
  RigidTransform(Unchecked, const Mat3& rotation, const Vec3& translation)
      : rotation_(rotation), translation_(translation) {}

  friend RigidTransform compose(const RigidTransform&, const RigidTransform&);
  friend RigidTransform invert(const RigidTransform&);

  Mat3 rotation_;
  Vec3 translation_;
};

/// g_ac = g_ab * g_bc. Re-orthonormalizes the rotation once drift exceeds 1e-12.
RigidTransform compose(const RigidTransform& g_ab, const RigidTransform& g_bc);
RigidTransform invert(const RigidTransform& g);
inline RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
  return compose(a, b);
}

/// F_b = Ad_{g_ab}^T F_a.
Wrench transform_wrench(const RigidTransform& g_ab, const Wrench& wrench_a);

/// V_a = Ad_{g_ab} V_b.
Twist transform_twist(const RigidTransform& g_ab, const Twist& twist_b);

/// Instantaneous power of a wrench acting on a twist expressed in the same frame.
double power(const Wrench& wrench, const Twist& twist);

/// v - (v . n) n for unit n.
Vec3 tangent_projection(const Vec3& v, const Vec3& n_hat);

Mat3 hat(const Vec3& v);
double orthonormality_error(const Mat3& rotation);
/// Nearest rotation matrix in the Frobenius sense.
Mat3 orthonormalize(const Mat3& rotation);

// Frame-labeled wrappers. A FramedTransform carries g_{parent,child}; two of
// them compose only when the first's child equals the second's parent.

struct FramedTransform {
  FrameId parent;
  FrameId child;
  RigidTransform pose;
};

struct FramedWrench {
  FrameId frame;
  Wrench wrench;
};

/// Throws FrameMismatch when g_ab.child != g_bc.parent.
FramedTransform compose(const FramedTransform& g_ab, const FramedTransform& g_bc);
FramedTransform invert(const FramedTransform& g);
/// Throws FrameMismatch unless wrench.frame == g_ab.parent; result is in g_ab.child.
FramedWrench transform_wrench(const FramedTransform& g_ab, const FramedWrench& wrench);

}  // namespace stackplace
