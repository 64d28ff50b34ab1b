#include "flexhand/geometry.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Geometry>

namespace flexhand {

namespace {

Eigen::Vector2d rotated(double angle, const BandRouting& p) {
  return Eigen::Rotation2Dd(angle) * Eigen::Vector2d(p.along, p.lateral);
}

}  // namespace

double FingerGeometry::totalLength() const {
  return std::accumulate(link_lengths.begin(), link_lengths.end(), 0.0);
}

void FingerGeometry::validate() const {
  const auto m = static_cast<std::size_t>(joint_count);
  if (joint_count < 1) {
    throw std::invalid_argument("finger needs at least one joint");
  }
  if (link_lengths.size() != m || rest_angles.size() != m ||
      band_routing.size() != m || pad_offsets.size() != m) {
    throw std::invalid_argument("geometry field sizes must equal joint_count");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!(link_lengths[i] > 0.0)) {
      throw std::invalid_argument("link length " + std::to_string(i + 1) +
                                  " must be positive");
    }
    if (!(band_routing[i].lateral > 0.0)) {
      throw std::invalid_argument("band lateral offset " + std::to_string(i + 1) +
                                  " must be positive (band runs on the flexion side)");
    }
    if (!(band_routing[i].along > 0.0) || band_routing[i].along > link_lengths[i]) {
      throw std::invalid_argument("band along-link offset " + std::to_string(i + 1) +
                                  " must lie within the link");
    }
    if (pad_offsets[i] < 0.0) {
      throw std::invalid_argument("pad offset " + std::to_string(i + 1) +
                                  " must be non-negative");
    }
  }
  if (!(band_entry.lateral > 0.0) || !(band_entry.along < 0.0)) {
    throw std::invalid_argument(
        "band entry must sit behind joint 1 on the flexion side");
  }
  if (!(scale > 0.0) || !(reference_length > 0.0)) {
    throw std::invalid_argument("scale and reference length must be positive");
  }
  const double expected = scale * reference_length;
  if (std::abs(totalLength() - expected) > 1e-6 * expected) {
    throw std::invalid_argument("sum of link lengths (" +
                                std::to_string(totalLength()) +
                                " m) must equal scale * reference length (" +
                                std::to_string(expected) + " m)");
  }
}

FingerGeometry makeReferenceFinger(double kappa) {
  if (!(kappa > 0.0)) {
    throw std::invalid_argument("scale factor must be positive");
  }
  FingerGeometry g;
  g.joint_count = 3;
  g.link_lengths = {0.022 * kappa, 0.016 * kappa, 0.014 * kappa};
  g.rest_angles = {degToRad(50.0), 0.0, 0.0};
  g.band_routing.clear();
  g.pad_offsets.clear();
  for (double len : g.link_lengths) {
    g.band_routing.push_back({0.5 * len, 0.15 * len});
    g.pad_offsets.push_back(0.1 * len);
  }
  g.band_entry = {-g.band_routing[0].along, g.band_routing[0].lateral};
  g.scale = kappa;
  g.reference_length = kReferenceFingerLength;
  g.validate();
  return g;
}

FingerGeometry scaleGeometry(const FingerGeometry& geom, double kappa) {
  if (!(kappa > 0.0)) {
    throw std::invalid_argument("scale factor must be positive");
  }
  FingerGeometry g = geom;
  for (auto& len : g.link_lengths) len *= kappa;
  for (auto& p : g.band_routing) {
    p.along *= kappa;
    p.lateral *= kappa;
  }
  g.band_entry.along *= kappa;
  g.band_entry.lateral *= kappa;
  for (auto& pad : g.pad_offsets) pad *= kappa;
  g.scale *= kappa;
  return g;
}

JointConfiguration::JointConfiguration(const FingerGeometry& geom,
                                       Eigen::VectorXd angles)
    : angles_(std::move(angles)),
      rest_(Eigen::Map<const Eigen::VectorXd>(geom.rest_angles.data(),
                                              geom.rest_angles.size())) {
  if (angles_.size() != geom.joint_count) {
    throw std::invalid_argument("joint angle count does not match geometry");
  }
}

JointConfiguration JointConfiguration::atRest(const FingerGeometry& geom) {
  return JointConfiguration(
      geom, Eigen::Map<const Eigen::VectorXd>(geom.rest_angles.data(),
                                              geom.rest_angles.size()));
}

FrameSet forwardKinematics(const FingerGeometry& geom,
                           const JointConfiguration& q) {
  const int m = geom.joint_count;
  if (q.jointCount() != m) {
    throw std::invalid_argument("configuration does not match geometry");
  }

  FrameSet fs;
  fs.link_angles.resize(m);
  fs.joints.resize(m);
  fs.pads.resize(m);
  fs.routing.resize(m - 1);
  fs.entry = Eigen::Vector2d(geom.band_entry.along, geom.band_entry.lateral);

  double angle = 0.0;
  Eigen::Vector2d joint = Eigen::Vector2d::Zero();
  for (int i = 0; i < m; ++i) {
    angle += q.angles()[i];
    fs.link_angles[i] = angle;
    fs.joints[i] = joint;
    if (i < m - 1) {
      fs.routing[i] = joint + rotated(angle, geom.band_routing[i]);
    }
    fs.pads[i] = joint + rotated(angle, {0.5 * geom.link_lengths[i],
                                         geom.pad_offsets[i]});
    joint += geom.link_lengths[i] * Eigen::Vector2d(std::cos(angle), std::sin(angle));
  }
  fs.fingertip = joint;
  fs.anchor = fs.joints[m - 1] + rotated(fs.link_angles[m - 1],
                                         geom.band_routing[m - 1]);
  return fs;
}

LeverVectors leverVectors(const FingerGeometry& geom,
                          const JointConfiguration& q) {
  const FrameSet fs = forwardKinematics(geom, q);
  const int m = geom.joint_count;

  std::vector<Eigen::Vector2d> d(m);
  for (int i = 0; i < m; ++i) {
    d[i] = fs.anchor - fs.joints[i];
  }
  std::vector<std::vector<Eigen::Vector2d>> r(m > 0 ? m - 1 : 0);
  for (int i = 0; i + 1 < m; ++i) {
    r[i].reserve(m - 1 - i);
    for (int j = i; j + 1 < m; ++j) {
      r[i].push_back(fs.routing[j] - fs.joints[i]);
    }
  }
  return LeverVectors(std::move(d), std::move(r));
}

}  // namespace flexhand
