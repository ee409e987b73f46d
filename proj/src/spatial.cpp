#include "stackplace/spatial.hpp"

#include "stackplace/errors.hpp"

#include <Eigen/SVD>

#include <stdexcept>
#include <string>

namespace stackplace {

std::string_view to_string(FrameId frame) {
  switch (frame) {
    case FrameId::Base:
      return "B";
    case FrameId::Wrist:
      return "W";
    case FrameId::GripperTip:
      return "T";
    case FrameId::RockCom:
      return "R";
    case FrameId::Contact:
      return "C";
  }
  return "?";
}

Wrench Wrench::from_vector(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }

Vec6 Wrench::as_vector() const {
  Vec6 v;
  v << torque, force;
  return v;
}

bool Wrench::is_finite() const { return torque.allFinite() && force.allFinite(); }

Wrench& Wrench::operator+=(const Wrench& other) {
  torque += other.torque;
  force += other.force;
  return *this;
}

Wrench& Wrench::operator-=(const Wrench& other) {
  torque -= other.torque;
  force -= other.force;
  return *this;
}

Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

double orthonormality_error(const Mat3& rotation) {
  return (rotation.transpose() * rotation - Mat3::Identity()).norm();
}

Mat3 orthonormalize(const Mat3& rotation) {
  Eigen::JacobiSVD<Mat3> svd(rotation, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) {
    u.col(2) *= -1.0;
  }
  return u * v.transpose();
}

RigidTransform::RigidTransform() : rotation_(Mat3::Identity()), translation_(Vec3::Zero()) {}

RigidTransform::RigidTransform(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw std::invalid_argument("RigidTransform: non-finite entries");
  }
  const double err = orthonormality_error(rotation);
  if (err > kOrthonormalTolerance) {
    throw std::invalid_argument("RigidTransform: rotation not orthonormal (error " +
                                std::to_string(err) + ")");
  }
  if (rotation.determinant() < 0.0) {
    throw std::invalid_argument("RigidTransform: rotation is a reflection");
  }
}

RigidTransform RigidTransform::from_translation(const Vec3& translation) {
  return {Mat3::Identity(), translation};
}

RigidTransform RigidTransform::from_axis_angle(const Vec3& axis, double angle,
                                               const Vec3& translation) {
  const double n = axis.norm();
  if (!(n > 0.0)) {
    throw std::invalid_argument("RigidTransform: zero rotation axis");
  }
  return {Eigen::AngleAxisd(angle, axis / n).toRotationMatrix(), translation};
}

RigidTransform RigidTransform::from_quaternion(const Eigen::Quaterniond& q,
                                               const Vec3& translation) {
  const double n = q.norm();
  if (!(n > 0.0)) {
    throw std::invalid_argument("RigidTransform: zero quaternion");
  }
  return {q.normalized().toRotationMatrix(), translation};
}

Mat6 RigidTransform::adjoint() const {
  Mat6 ad = Mat6::Zero();
  ad.topLeftCorner<3, 3>() = rotation_;
  ad.bottomLeftCorner<3, 3>() = hat(translation_) * rotation_;
  ad.bottomRightCorner<3, 3>() = rotation_;
  return ad;
}

bool RigidTransform::is_approx(const RigidTransform& other, double tol) const {
  return (rotation_ - other.rotation_).cwiseAbs().maxCoeff() <= tol &&
         (translation_ - other.translation_).cwiseAbs().maxCoeff() <= tol;
}

RigidTransform compose(const RigidTransform& g_ab, const RigidTransform& g_bc) {
  Mat3 r = g_ab.rotation_ * g_bc.rotation_;
  if (orthonormality_error(r) > RigidTransform::kDriftTolerance) {
    r = orthonormalize(r);
  }
  return {RigidTransform::Unchecked{}, r, g_ab.rotation_ * g_bc.translation_ + g_ab.translation_};
}

RigidTransform invert(const RigidTransform& g) {
  const Mat3 rt = g.rotation_.transpose();
  return {RigidTransform::Unchecked{}, rt, -(rt * g.translation_)};
}

Wrench transform_wrench(const RigidTransform& g_ab, const Wrench& wrench_a) {
  const Mat3& r = g_ab.rotation();
  const Vec3& p = g_ab.translation();
  return {r.transpose() * (wrench_a.torque - p.cross(wrench_a.force)),
          r.transpose() * wrench_a.force};
}

Twist transform_twist(const RigidTransform& g_ab, const Twist& twist_b) {
  const Mat3& r = g_ab.rotation();
  const Vec3 omega_a = r * twist_b.angular;
  return {omega_a, r * twist_b.linear + g_ab.translation().cross(omega_a)};
}

double power(const Wrench& wrench, const Twist& twist) {
  return wrench.torque.dot(twist.angular) + wrench.force.dot(twist.linear);
}

Vec3 tangent_projection(const Vec3& v, const Vec3& n_hat) { return v - v.dot(n_hat) * n_hat; }

namespace {

void require_frame(FrameId expected, FrameId actual, const char* what) {
  if (expected != actual) {
    throw FrameMismatch(std::string(what) + ": expected frame " + std::string(to_string(expected)) +
                        ", got " + std::string(to_string(actual)));
  }
}

}  // namespace

FramedTransform compose(const FramedTransform& g_ab, const FramedTransform& g_bc) {
  require_frame(g_ab.child, g_bc.parent, "compose");
  return {g_ab.parent, g_bc.child, compose(g_ab.pose, g_bc.pose)};
}

FramedTransform invert(const FramedTransform& g) {
  return {g.child, g.parent, invert(g.pose)};
}

FramedWrench transform_wrench(const FramedTransform& g_ab, const FramedWrench& wrench) {
  require_frame(g_ab.parent, wrench.frame, "transform_wrench");
  return {g_ab.child, transform_wrench(g_ab.pose, wrench.wrench)};
}

}  // namespace stackplace
