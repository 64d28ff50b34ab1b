#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "flexhand/errors.hpp"
#include "flexhand/hand.hpp"

using namespace flexhand;
using Catch::Approx;

namespace {

StiffnessVector paperStiffness() {
  return StiffnessVector((Eigen::Vector3d() << 28.48, 4.05, 4.05).finished());
}

HandModel referenceHand(int fingers = 2) {
  const FingerGeometry g = makeReferenceFinger(1.5);
  return assembleHand(g, paperStiffness(), fingers,
                      {0.5 * g.totalLength()});
}

ClampSet restClamps(const FingerGeometry& g) {
  ClampSet clamps;
  for (int j = 0; j < g.joint_count; ++j) clamps.push_back({j, g.rest_angles[j]});
  return clamps;
}

// Actuator force at which the symmetric hand reaches the given pull-loop
// displacement; monotone, so bisection suffices.
double forceForDisplacement(const HandModel& hand, double displacement) {
  double lo = 0.0, hi = 200.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (solveHand(hand, mid).pull_loop_displacement < displacement ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("a hand needs at least two fingers and a real base circle") {
  const FingerGeometry g = makeReferenceFinger();
  CHECK_THROWS_AS(assembleHand(g, paperStiffness(), 1, {0.02}),
                  std::invalid_argument);
  CHECK_THROWS_AS(assembleHand(g, paperStiffness(), 4, {0.0}),
                  std::invalid_argument);
  const StiffnessVector wrong((Eigen::Vector2d() << 1.0, 2.0).finished());
  CHECK_THROWS_AS(assembleHand(g, wrong, 2, {0.02}), std::invalid_argument);
}

TEST_CASE("four fingers sit in four-fold rotational symmetry") {
  const HandModel hand = referenceHand(4);
  const double quarter = kPi / 2.0;
  for (int f = 0; f < 4; ++f) {
    CHECK(hand.azimuth(f) == Approx(f * quarter));
    const Eigen::Vector3d base = hand.basePosition(f);
    const Eigen::Vector3d next = hand.basePosition((f + 1) % 4);
    // Rotating a base by a quarter turn lands on the next one.
    const Eigen::Vector3d rotated(-base.y(), base.x(), base.z());
    CHECK((rotated - next).norm() < 1e-15);
  }
  CHECK((hand.basePosition(0) - hand.basePosition(2)).norm() ==
        Approx(2.0 * hand.layout().base_radius));
}

TEST_CASE("zero actuator force leaves every finger at rest") {
  const HandModel hand = referenceHand(3);
  const HandState state = solveHand(hand, 0.0);
  for (const auto& angles : state.finger_angles) {
    CHECK(angles[0] == Approx(hand.finger().rest_angles[0]));
    CHECK(angles[1] == 0.0);
  }
  CHECK(state.pull_loop_displacement == 0.0);
  CHECK_THROWS_AS(solveHand(hand, -1.0), std::invalid_argument);
}

TEST_CASE("symmetric hands flex all fingers identically") {
  for (int n : {2, 3, 4}) {
    const HandModel hand = referenceHand(n);
    const HandState state = solveHand(hand, 12.0 * n);
    for (int f = 1; f < n; ++f) {
      REQUIRE((state.finger_angles[f] - state.finger_angles[0])
                  .lpNorm<Eigen::Infinity>() < 1e-12);
    }
  }
}

TEST_CASE("tensions split the actuator force exactly") {
  for (int n : {2, 3, 4}) {
    const HandModel hand = referenceHand(n);
    const HandState state = solveHand(hand, 41.7);
    double sum = 0.0;
    for (double t : state.tensions) sum += t;
    REQUIRE(sum == 41.7);
  }

  const HandState even = solveHand(referenceHand(2), 40.0);
  CHECK(even.tensions[0] == 20.0);
  CHECK(even.tensions[1] == 20.0);
}

TEST_CASE("clamping a finger shifts all pull-loop displacement to the other") {
  const HandModel hand = referenceHand(2);
  const HandState symmetric = solveHand(hand, 40.0);

  std::vector<ClampSet> clamps(2);
  clamps[0] = restClamps(hand.finger());
  const HandState blocked = solveHand(hand, 40.0, clamps);

  CHECK(blocked.tensions[0] == 20.0);
  CHECK(blocked.tensions[1] == 20.0);
  CHECK(blocked.excursions[0] == 0.0);
  CHECK(blocked.excursions[1] > 0.0);
  CHECK(blocked.pull_loop_displacement ==
        Approx(0.5 * blocked.excursions[1]));

  // The free finger supplies the whole pull-loop displacement instead of half.
  CHECK(blocked.excursions[1] ==
        Approx(symmetric.excursions[1]).epsilon(1e-12));
  CHECK(blocked.pull_loop_displacement <
        symmetric.pull_loop_displacement);

  // Matched at the same pull-loop displacement, the free finger has flexed
  // strictly further than either finger of a symmetric grasp.
  const double f_matched =
      forceForDisplacement(hand, blocked.pull_loop_displacement);
  const HandState matched = solveHand(hand, f_matched);
  CHECK(matched.pull_loop_displacement ==
        Approx(blocked.pull_loop_displacement).epsilon(1e-6));
  CHECK(blocked.excursions[1] > 1.5 * matched.excursions[1]);
}

TEST_CASE("per-finger clamp lists must match the finger count") {
  const HandModel hand = referenceHand(2);
  std::vector<ClampSet> clamps(3);
  CHECK_THROWS_AS(solveHand(hand, 10.0, clamps), std::invalid_argument);
}

TEST_CASE("rest aperture is the base separation plus twice the tip offset") {
  const HandModel hand = referenceHand(2);
  const FingerGeometry& g = hand.finger();
  const Eigen::Vector2d tip =
      forwardKinematics(g, JointConfiguration::atRest(g)).fingertip;

  const HandState rest = solveHand(hand, 0.0);
  const double expected = 2.0 * hand.layout().base_radius + 2.0 * tip.x();
  CHECK(aperture(hand, rest) == Approx(expected).epsilon(1e-12));

  // Symmetric about the hand axis: tips mirror in x and share z.
  const Eigen::Vector3d tip0 = hand.fingertipPosition(0, rest.finger_angles[0]);
  const Eigen::Vector3d tip1 = hand.fingertipPosition(1, rest.finger_angles[1]);
  CHECK(tip0.x() == Approx(-tip1.x()));
  CHECK(tip0.z() == Approx(tip1.z()));
}

TEST_CASE("aperture closes monotonically along a force ramp") {
  const HandModel hand = referenceHand(2);
  double previous = aperture(hand, solveHand(hand, 0.0));
  for (double force = 10.0; force <= 150.0; force += 10.0) {
    const double current = aperture(hand, solveHand(hand, force));
    REQUIRE(current < previous);
    previous = current;
  }
}

TEST_CASE("aperture scales with the hand at equal angles") {
  const double kappa = 1.6;
  const FingerGeometry g = makeReferenceFinger();
  const HandModel hand = assembleHand(g, paperStiffness(), 2, {0.026});
  const HandModel big = assembleHand(scaleGeometry(g, kappa), paperStiffness(),
                                     2, {0.026 * kappa});

  HandState state;
  const Eigen::Vector3d angles(degToRad(65.0), degToRad(20.0), degToRad(10.0));
  state.finger_angles = {angles, angles};
  HandState big_state = state;
  CHECK(aperture(big, big_state) == Approx(kappa * aperture(hand, state)).epsilon(1e-12));
}

TEST_CASE("per-finger solver failures name the finger") {
  const HandModel hand = referenceHand(2);
  SolverOptions opts;
  opts.max_iterations = 1;
  opts.residual_tolerance = 1e-15;
  try {
    solveHand(hand, 60.0, {}, opts);
    FAIL("expected ConvergenceFailure");
  } catch (const ConvergenceFailure& e) {
    CHECK(std::string(e.what()).find("finger 1") != std::string::npos);
  }
}
