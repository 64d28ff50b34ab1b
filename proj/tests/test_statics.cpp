#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "flexhand/statics.hpp"
#include "support/oracles.hpp"

using namespace flexhand;
using Catch::Approx;

namespace {

FingerGeometry zeroRestFinger() {
  FingerGeometry g;
  g.joint_count = 3;
  g.link_lengths = {0.022, 0.016, 0.014};
  g.rest_angles = {0.0, 0.0, 0.0};
  for (double len : g.link_lengths) {
    g.band_routing.push_back({0.5 * len, 0.15 * len});
    g.pad_offsets.push_back(0.1 * len);
  }
  g.band_entry = {-0.011, 0.0033};
  g.scale = 1.0;
  return g;
}

FingerGeometry singleJointFinger(double along, double lateral) {
  FingerGeometry g;
  g.joint_count = 1;
  g.link_lengths = {0.052};
  g.rest_angles = {0.0};
  g.band_routing = {{along, lateral}};
  g.pad_offsets = {0.005};
  g.band_entry = {-along, lateral};
  g.scale = 1.0;
  return g;
}

}  // namespace

TEST_CASE("band angles halve the deflection") {
  const FingerGeometry g = zeroRestFinger();
  CHECK(bandAngles(JointConfiguration(g, Eigen::Vector3d::Zero()))
            .lpNorm<Eigen::Infinity>() == 0.0);

  const JointConfiguration q(
      g, Eigen::Vector3d(degToRad(50.0), degToRad(30.0), degToRad(10.0)));
  const Eigen::VectorXd delta = bandAngles(q);
  CHECK(delta[0] == Approx(degToRad(25.0)));
  CHECK(delta[1] == Approx(degToRad(15.0)));
  CHECK(delta[2] == Approx(degToRad(5.0)));

  const JointConfiguration right_angle(
      g, Eigen::Vector3d(0.0, 0.0, degToRad(90.0)));
  CHECK(bandAngles(right_angle)[2] == Approx(degToRad(45.0)));
}

TEST_CASE("band angles ignore the print angle") {
  const FingerGeometry g = makeReferenceFinger();
  CHECK(bandAngles(JointConfiguration::atRest(g)).lpNorm<Eigen::Infinity>() ==
        0.0);
}

TEST_CASE("distal force basics") {
  const FingerGeometry g = zeroRestFinger();

  const JointConfiguration straight(g, Eigen::Vector3d::Zero());
  CHECK(distalForce(0.0, straight).norm() == 0.0);

  const Eigen::Vector2d pull = distalForce(10.0, straight);
  CHECK(pull.x() == Approx(0.0).margin(1e-15));
  CHECK(pull.y() == Approx(-10.0));

  CHECK_THROWS_AS(distalForce(-1.0, straight), std::invalid_argument);
}

TEST_CASE("distal force of the flexed reference finger") {
  // 20 R_z(90 deg) (-sin 10, -cos 10): evaluated directly below.
  const FingerGeometry g = makeReferenceFinger(1.5);
  const JointConfiguration q(
      g, Eigen::Vector3d(degToRad(50.0), degToRad(20.0), degToRad(20.0)));
  const Eigen::Vector2d f = distalForce(20.0, q);
  CHECK(f.x() == Approx(20.0 * std::cos(degToRad(10.0))).epsilon(1e-14));
  CHECK(f.y() == Approx(-20.0 * std::sin(degToRad(10.0))).epsilon(1e-14));
  CHECK(f.x() == Approx(19.69615506).margin(1e-8));
  CHECK(f.y() == Approx(-3.47296355).margin(1e-8));
}

TEST_CASE("distal force magnitude equals the tension") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> tension(0.0, 120.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const FingerGeometry g = testing::randomGeometry(rng);
    const JointConfiguration q(g, testing::randomAngles(rng, g));
    const double f_in = tension(rng);
    REQUIRE(distalForce(f_in, q).norm() == Approx(f_in).epsilon(1e-12));
  }
}

TEST_CASE("band normal forces vanish at rest and at zero tension") {
  const FingerGeometry g = makeReferenceFinger();
  const JointConfiguration rest = JointConfiguration::atRest(g);
  for (const auto& f : bandNormalForces(25.0, rest)) {
    CHECK(f.norm() == 0.0);
  }
  const JointConfiguration q(
      g, Eigen::Vector3d(degToRad(60.0), degToRad(15.0), degToRad(5.0)));
  for (const auto& f : bandNormalForces(0.0, q)) {
    CHECK(f.norm() == 0.0);
  }
  CHECK_THROWS_AS(bandNormalForces(-0.5, q), std::invalid_argument);
}

TEST_CASE("band normal force magnitude at 40 degrees of flexion") {
  const FingerGeometry g = makeReferenceFinger();
  const JointConfiguration q(
      g, Eigen::Vector3d(degToRad(50.0), degToRad(40.0), 0.0));
  const auto forces = bandNormalForces(10.0, q);
  CHECK(forces[1].norm() == Approx(10.0 * std::sin(degToRad(20.0))).epsilon(1e-14));
  CHECK(forces[1].norm() == Approx(3.420201433).margin(1e-8));
}

TEST_CASE("band normal force magnitudes follow tension times sine") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const FingerGeometry g = testing::randomGeometry(rng);
    const JointConfiguration q(g, testing::randomAngles(rng, g));
    const double f_in = 42.0;
    const Eigen::VectorXd delta = bandAngles(q);
    const auto forces = bandNormalForces(f_in, q);
    for (std::size_t i = 0; i < forces.size(); ++i) {
      REQUIRE(forces[i].norm() ==
              Approx(f_in * std::sin(delta[static_cast<int>(i)])).margin(1e-12));
    }
  }
}

TEST_CASE("spring torques are linear in the deflection") {
  const FingerGeometry g = makeReferenceFinger(1.5);
  const StiffnessVector k((Eigen::Vector3d() << 28.48, 4.05, 4.05).finished());

  CHECK(springTorques(k, JointConfiguration::atRest(g))
            .lpNorm<Eigen::Infinity>() == 0.0);

  const JointConfiguration q(
      g, Eigen::Vector3d(g.rest_angles[0] + 0.1, 0.04, 0.02));
  const Eigen::VectorXd sigma = springTorques(k, q);
  CHECK(sigma[0] == Approx(2.848).epsilon(1e-12));

  const JointConfiguration doubled(
      g, Eigen::Vector3d(g.rest_angles[0] + 0.2, 0.08, 0.04));
  const Eigen::VectorXd sigma2 = springTorques(k, doubled);
  for (int i = 0; i < 3; ++i) {
    CHECK(sigma2[i] == Approx(2.0 * sigma[i]).epsilon(1e-12));
  }
}

TEST_CASE("stiffness must be positive and sized right") {
  CHECK_THROWS_AS(StiffnessVector((Eigen::Vector2d() << 1.0, 0.0).finished()),
                  std::invalid_argument);
  CHECK_THROWS_AS(StiffnessVector((Eigen::Vector2d() << -1.0, 2.0).finished()),
                  std::invalid_argument);
  const FingerGeometry g = makeReferenceFinger();
  const StiffnessVector two((Eigen::Vector2d() << 1.0, 2.0).finished());
  CHECK_THROWS_AS(springTorques(two, JointConfiguration::atRest(g)),
                  std::invalid_argument);
}

TEST_CASE("load torques vanish without tension") {
  const FingerGeometry g = makeReferenceFinger();
  const JointConfiguration q(
      g, Eigen::Vector3d(degToRad(70.0), degToRad(25.0), degToRad(10.0)));
  CHECK(jointLoadTorques(0.0, q, g).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK_THROWS_AS(jointLoadTorques(-3.0, q, g), std::invalid_argument);
}

TEST_CASE("load torques scale linearly with tension and with size") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> factor(0.25, 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    const FingerGeometry g = testing::randomGeometry(rng);
    const Eigen::VectorXd angles = testing::randomAngles(rng, g);
    const JointConfiguration q(g, angles);
    const double f_in = 18.0;
    const Eigen::VectorXd u = jointLoadTorques(f_in, q, g);

    const double lambda = factor(rng);
    const Eigen::VectorXd u_lambda = jointLoadTorques(lambda * f_in, q, g);
    REQUIRE((u_lambda - lambda * u).lpNorm<Eigen::Infinity>() <=
            1e-12 * u.lpNorm<Eigen::Infinity>());

    const double kappa = factor(rng);
    const FingerGeometry scaled = scaleGeometry(g, kappa);
    const Eigen::VectorXd u_kappa =
        jointLoadTorques(f_in, JointConfiguration(scaled, angles), scaled);
    REQUIRE((u_kappa - kappa * u).lpNorm<Eigen::Infinity>() <=
            1e-12 * kappa * u.lpNorm<Eigen::Infinity>());
  }
}

TEST_CASE("single-joint load torque against the hand-evaluated cross product") {
  // Anchor 30 mm from the joint, theta = 60 deg, 10 N of tension:
  // f = 10 R(60)(-sin 30, -cos 30), d = R(60)(0.024, 0.018),
  // u = f x d = 0.11784610 N m.
  const FingerGeometry g = singleJointFinger(0.024, 0.018);
  const JointConfiguration q(g, Eigen::VectorXd::Constant(1, degToRad(60.0)));
  const Eigen::VectorXd u = jointLoadTorques(10.0, q, g);
  CHECK(u[0] == Approx(0.1178460969).margin(1e-9));

  const double delta = degToRad(30.0);
  const double closed_form =
      10.0 * (0.024 * std::cos(delta) - 0.018 * std::sin(delta));
  CHECK(u[0] == Approx(closed_form).epsilon(1e-13));
}

TEST_CASE("load state bundles the forces consistently") {
  const FingerGeometry g = makeReferenceFinger(1.5);
  const JointConfiguration q(
      g, Eigen::Vector3d(degToRad(62.0), degToRad(18.0), degToRad(7.0)));
  const LoadState state = evaluateLoads(24.0, q, g);
  CHECK(state.tendon_tension == 24.0);
  CHECK(state.distal_force.norm() == Approx(24.0).epsilon(1e-12));
  REQUIRE(state.normal_forces.size() == 2);
  const Eigen::VectorXd delta = bandAngles(q);
  for (int i = 0; i < 2; ++i) {
    CHECK(state.normal_forces[i].norm() ==
          Approx(24.0 * std::sin(delta[i])).margin(1e-12));
  }
  CHECK(state.load_torques == jointLoadTorques(24.0, q, g));
}

TEST_CASE("torque residuals vanish at rest without load") {
  const FingerGeometry g = makeReferenceFinger();
  const StiffnessVector k((Eigen::Vector3d() << 28.48, 4.05, 4.05).finished());
  const Eigen::VectorXd rho =
      torqueResiduals(0.0, JointConfiguration::atRest(g), k, g);
  CHECK(rho.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("one-joint equilibrium found by bisection balances the spring") {
  const FingerGeometry g = singleJointFinger(0.024, 0.018);
  const StiffnessVector k(Eigen::VectorXd::Constant(1, 2.0));
  const double f_in = 30.0;

  const auto rho = [&](double theta) {
    const JointConfiguration q(g, Eigen::VectorXd::Constant(1, theta));
    return torqueResiduals(f_in, q, k, g)[0];
  };

  double lo = 0.0, hi = 1.5;
  REQUIRE(rho(lo) > 0.0);
  REQUIRE(rho(hi) < 0.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (rho(mid) > 0.0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);

  // At the root the load torque balances k * deflection.
  const JointConfiguration q(g, Eigen::VectorXd::Constant(1, root));
  const double u = jointLoadTorques(f_in, q, g)[0];
  CHECK(u == Approx(k[0] * root).epsilon(1e-10));
}
