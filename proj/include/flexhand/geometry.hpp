#pragma once

#include <vector>

#include <Eigen/Core>

namespace flexhand {

inline constexpr double kPi = 3.14159265358979323846;

inline double degToRad(double deg) { return deg * kPi / 180.0; }
inline double radToDeg(double rad) { return rad * 180.0 / kPi; }

/// Finger length that defines unit scale: a finger of 52 mm has scale 1.
inline constexpr double kReferenceFingerLength = 0.052;

/// A point attached to a link, expressed in that link's frame:
/// `along` on the link axis, `lateral` toward the flexion side.
struct BandRouting {
  double along = 0.0;    // [m]
  double lateral = 0.0;  // [m]
};

/// Planar geometry of one tendon-driven finger with m compliant joints.
///
/// Joint 1 sits at the origin of the finger base frame; link i extends from
/// joint i to joint i+1 (link m ends at the fingertip). Link orientations are
/// partial sums of the joint angles, so all kinematics stay in the xy-plane.
/// The band runs from a fixed entry point on the support flange, over one
/// routing point per intermediate link, to an anchor on the last link.
struct FingerGeometry {
  int joint_count = 0;                    // m
  std::vector<double> link_lengths;       // L_1..L_m [m], joint-to-joint
  std::vector<double> rest_angles;        // [rad]; rest_angles[0] is the print angle
  std::vector<BandRouting> band_routing;  // links 1..m-1 routing; entry [m-1] is the anchor on link m
  BandRouting band_entry;                 // band entry on the immobilized flange (base frame)
  std::vector<double> pad_offsets;        // contact-pad surface offset per link [m]
  double scale = 1.0;                     // kappa
  double reference_length = kReferenceFingerLength;  // total length at scale 1 [m]

  double totalLength() const;

  /// Throws std::invalid_argument on any violated invariant:
  /// m >= 1, matching field sizes, positive lengths and lateral offsets,
  /// positive scale, and total length == scale * reference_length.
  void validate() const;
};

/// Builds the reference finger at the given scale: m = 3, 50 deg print angle
/// at joint 1, links (22, 16, 14) mm at scale 1, routing points halfway along
/// each link and offset 0.15 L to the flexion side.
FingerGeometry makeReferenceFinger(double kappa = 1.0);

/// Returns a copy with every length multiplied by kappa; angles unchanged.
FingerGeometry scaleGeometry(const FingerGeometry& geom, double kappa);

/// Joint angle vector bound to the rest shape it deflects from.
class JointConfiguration {
 public:
  JointConfiguration(const FingerGeometry& geom, Eigen::VectorXd angles);

  static JointConfiguration atRest(const FingerGeometry& geom);

  const Eigen::VectorXd& angles() const { return angles_; }
  const Eigen::VectorXd& restAngles() const { return rest_; }
  Eigen::VectorXd deflections() const { return angles_ - rest_; }
  int jointCount() const { return static_cast<int>(angles_.size()); }

 private:
  Eigen::VectorXd angles_;
  Eigen::VectorXd rest_;
};

/// World-frame poses and band points of every link at one configuration.
struct FrameSet {
  std::vector<double> link_angles;       // orientation of link i = sum of theta_1..theta_i
  std::vector<Eigen::Vector2d> joints;   // joint positions, joints[0] = origin
  std::vector<Eigen::Vector2d> routing;  // routing points on links 1..m-1
  Eigen::Vector2d anchor;                // band anchor on link m
  Eigen::Vector2d entry;                 // fixed band entry on the flange
  Eigen::Vector2d fingertip;
  std::vector<Eigen::Vector2d> pads;     // contact-pad surface centers
};

FrameSet forwardKinematics(const FingerGeometry& geom, const JointConfiguration& q);

/// Moment arms of the band forces about each joint.
///
/// d(i) runs from joint i+1 (0-based i) to the band anchor on the last link;
/// r(i, j) runs from joint i+1 to the routing point on link j+1, defined for
/// 0 <= i <= j <= m-2.
class LeverVectors {
 public:
  LeverVectors(std::vector<Eigen::Vector2d> d,
               std::vector<std::vector<Eigen::Vector2d>> r)
      : d_(std::move(d)), r_(std::move(r)) {}

  const Eigen::Vector2d& d(int i) const { return d_.at(i); }
  const Eigen::Vector2d& r(int i, int j) const { return r_.at(i).at(j - i); }
  int jointCount() const { return static_cast<int>(d_.size()); }

 private:
  std::vector<Eigen::Vector2d> d_;
  std::vector<std::vector<Eigen::Vector2d>> r_;  // r_[i][j-i]
};

LeverVectors leverVectors(const FingerGeometry& geom, const JointConfiguration& q);

}  // namespace flexhand
