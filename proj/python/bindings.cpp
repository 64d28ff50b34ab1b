#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "flexhand/calibration.hpp"
#include "flexhand/cli.hpp"
#include "flexhand/config.hpp"
#include "flexhand/errors.hpp"
#include "flexhand/dataset_io.hpp"
#include "flexhand/equilibrium.hpp"
#include "flexhand/geometry.hpp"
#include "flexhand/hand.hpp"
#include "flexhand/statics.hpp"

namespace py = pybind11;
using namespace flexhand;

namespace {

JointConfiguration makeConfig(const FingerGeometry& geom,
                              const Eigen::VectorXd& angles) {
  return JointConfiguration(geom, angles);
}

}  // namespace

PYBIND11_MODULE(_flexhand, m) {
  m.doc() = "Quasi-static simulation and calibration of tendon-driven "
            "compliant fingers and hands";

  py::class_<BandRouting>(m, "BandRouting")
      .def(py::init<double, double>(), py::arg("along"), py::arg("lateral"))
      .def_readwrite("along", &BandRouting::along)
      .def_readwrite("lateral", &BandRouting::lateral);

  py::class_<FingerGeometry>(m, "FingerGeometry")
      .def(py::init<>())
      .def_readwrite("joint_count", &FingerGeometry::joint_count)
      .def_readwrite("link_lengths", &FingerGeometry::link_lengths)
      .def_readwrite("rest_angles", &FingerGeometry::rest_angles)
      .def_readwrite("band_routing", &FingerGeometry::band_routing)
      .def_readwrite("band_entry", &FingerGeometry::band_entry)
      .def_readwrite("pad_offsets", &FingerGeometry::pad_offsets)
      .def_readwrite("scale", &FingerGeometry::scale)
      .def_readwrite("reference_length", &FingerGeometry::reference_length)
      .def("total_length", &FingerGeometry::totalLength)
      .def("validate", &FingerGeometry::validate);

  m.def("make_reference_finger", &makeReferenceFinger, py::arg("kappa") = 1.0);
  m.def("scale_geometry", &scaleGeometry, py::arg("geometry"), py::arg("kappa"));
  m.def("load_geometry", &loadGeometry, py::arg("path"));
  m.def("write_geometry", &writeGeometry, py::arg("path"), py::arg("geometry"));

  py::class_<FrameSet>(m, "FrameSet")
      .def_readonly("link_angles", &FrameSet::link_angles)
      .def_readonly("joints", &FrameSet::joints)
      .def_readonly("routing", &FrameSet::routing)
      .def_readonly("anchor", &FrameSet::anchor)
      .def_readonly("entry", &FrameSet::entry)
      .def_readonly("fingertip", &FrameSet::fingertip)
      .def_readonly("pads", &FrameSet::pads);

  m.def(
      "forward_kinematics",
      [](const FingerGeometry& geom, const Eigen::VectorXd& angles) {
        return forwardKinematics(geom, makeConfig(geom, angles));
      },
      py::arg("geometry"), py::arg("angles"));

  m.def(
      "band_angles",
      [](const FingerGeometry& geom, const Eigen::VectorXd& angles) {
        return bandAngles(makeConfig(geom, angles));
      },
      py::arg("geometry"), py::arg("angles"));
  m.def(
      "distal_force",
      [](const FingerGeometry& geom, double tension,
         const Eigen::VectorXd& angles) {
        return distalForce(tension, makeConfig(geom, angles));
      },
      py::arg("geometry"), py::arg("tension"), py::arg("angles"));
  m.def(
      "band_normal_forces",
      [](const FingerGeometry& geom, double tension,
         const Eigen::VectorXd& angles) {
        return bandNormalForces(tension, makeConfig(geom, angles));
      },
      py::arg("geometry"), py::arg("tension"), py::arg("angles"));
  m.def(
      "spring_torques",
      [](const FingerGeometry& geom, const Eigen::VectorXd& stiffness,
         const Eigen::VectorXd& angles) {
        return springTorques(StiffnessVector(stiffness),
                             makeConfig(geom, angles));
      },
      py::arg("geometry"), py::arg("stiffness"), py::arg("angles"));
  m.def(
      "joint_load_torques",
      [](const FingerGeometry& geom, double tension,
         const Eigen::VectorXd& angles) {
        return jointLoadTorques(tension, makeConfig(geom, angles), geom);
      },
      py::arg("geometry"), py::arg("tension"), py::arg("angles"));
  m.def(
      "torque_residuals",
      [](const FingerGeometry& geom, const Eigen::VectorXd& stiffness,
         double tension, const Eigen::VectorXd& angles) {
        return torqueResiduals(tension, makeConfig(geom, angles),
                               StiffnessVector(stiffness), geom);
      },
      py::arg("geometry"), py::arg("stiffness"), py::arg("tension"),
      py::arg("angles"));

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("residual_tolerance", &SolverOptions::residual_tolerance)
      .def_readwrite("max_iterations", &SolverOptions::max_iterations)
      .def_readwrite("fd_step", &SolverOptions::fd_step)
      .def_readwrite("fixed_point_damping", &SolverOptions::fixed_point_damping)
      .def_readwrite("continuation_step", &SolverOptions::continuation_step);

  py::class_<EquilibriumSolution>(m, "EquilibriumSolution")
      .def_readonly("angles", &EquilibriumSolution::angles)
      .def_readonly("iterations", &EquilibriumSolution::iterations)
      .def_readonly("residual_norm", &EquilibriumSolution::residual_norm)
      .def_readonly("boundary_active", &EquilibriumSolution::boundary_active);

  m.def(
      "solve_equilibrium",
      [](const FingerGeometry& geom, const Eigen::VectorXd& stiffness,
         double tension, const SolverOptions& opts) {
        return solveEquilibrium(geom, StiffnessVector(stiffness), tension, opts);
      },
      py::arg("geometry"), py::arg("stiffness"), py::arg("tension"),
      py::arg("options") = SolverOptions{});

  py::class_<RampPoint>(m, "RampPoint")
      .def_readonly("tension", &RampPoint::tension)
      .def_readonly("angles", &RampPoint::angles)
      .def_readonly("excursion", &RampPoint::excursion);
  py::class_<FlexionTrajectory>(m, "FlexionTrajectory")
      .def_readonly("points", &FlexionTrajectory::points);

  m.def(
      "force_ramp",
      [](const FingerGeometry& geom, const Eigen::VectorXd& stiffness,
         const std::vector<double>& schedule, const SolverOptions& opts) {
        return forceRamp(geom, StiffnessVector(stiffness), schedule, opts);
      },
      py::arg("geometry"), py::arg("stiffness"), py::arg("schedule"),
      py::arg("options") = SolverOptions{});

  py::class_<JointClamp>(m, "JointClamp")
      .def(py::init<int, double>(), py::arg("joint"), py::arg("angle"))
      .def_readwrite("joint", &JointClamp::joint)
      .def_readwrite("angle", &JointClamp::angle);

  py::class_<ClampedSolution>(m, "ClampedSolution")
      .def_readonly("angles", &ClampedSolution::angles)
      .def_readonly("reaction_torques", &ClampedSolution::reaction_torques)
      .def_readonly("residual_norm", &ClampedSolution::residual_norm);

  m.def(
      "solve_with_clamps",
      [](const FingerGeometry& geom, const Eigen::VectorXd& stiffness,
         double tension, const ClampSet& clamps, const SolverOptions& opts) {
        return solveWithClamps(geom, StiffnessVector(stiffness), tension,
                               clamps, opts);
      },
      py::arg("geometry"), py::arg("stiffness"), py::arg("tension"),
      py::arg("clamps"), py::arg("options") = SolverOptions{});

  m.def(
      "tendon_excursion",
      [](const FingerGeometry& geom, const Eigen::VectorXd& angles) {
        return tendonExcursion(geom, makeConfig(geom, angles));
      },
      py::arg("geometry"), py::arg("angles"));

  py::class_<FlexionSample>(m, "FlexionSample")
      .def(py::init([](double tension, const Eigen::VectorXd& angles, int cycle) {
             return FlexionSample{tension, angles, cycle};
           }),
           py::arg("tension"), py::arg("angles"), py::arg("cycle") = -1)
      .def_readwrite("tension", &FlexionSample::tension)
      .def_readwrite("angles", &FlexionSample::angles)
      .def_readwrite("cycle", &FlexionSample::cycle);

  py::class_<FlexionDataset>(m, "FlexionDataset")
      .def(py::init<int, std::vector<FlexionSample>>(), py::arg("joint_count"),
           py::arg("samples"))
      .def_property_readonly("joint_count", &FlexionDataset::jointCount)
      .def("__len__", &FlexionDataset::size)
      .def_property_readonly("samples", &FlexionDataset::samples);

  m.def("load_flexion_csv", &loadFlexionCsv, py::arg("path"),
        py::arg("radians") = false);
  m.def("write_flexion_csv", &writeFlexionCsv, py::arg("path"), py::arg("data"));

  m.def(
      "residual_objective",
      [](const FingerGeometry& geom, const Eigen::VectorXd& stiffness,
         const FlexionDataset& data) {
        return residualObjective(StiffnessVector(stiffness), data, geom);
      },
      py::arg("geometry"), py::arg("stiffness"), py::arg("data"));
  m.def(
      "residual_objective_gradient",
      [](const FingerGeometry& geom, const Eigen::VectorXd& stiffness,
         const FlexionDataset& data) {
        return residualObjectiveGradient(StiffnessVector(stiffness), data, geom);
      },
      py::arg("geometry"), py::arg("stiffness"), py::arg("data"));

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("stiffness", &FitResult::stiffness)
      .def_readonly("objective", &FitResult::objective)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("predicted_angles", &FitResult::predicted_angles)
      .def_readonly("angle_error_mean_deg", &FitResult::angle_error_mean_deg)
      .def_readonly("angle_error_std_deg", &FitResult::angle_error_std_deg)
      .def_readonly("identifiability_warning",
                    &FitResult::identifiability_warning);

  m.def(
      "fit_stiffness",
      [](const FlexionDataset& data, const FingerGeometry& geom,
         const Eigen::VectorXd& k_init) {
        return fitStiffness(data, geom, StiffnessVector(k_init));
      },
      py::arg("data"), py::arg("geometry"), py::arg("k_init"));

  py::class_<PredictionErrorReport>(m, "PredictionErrorReport")
      .def_readonly("predicted_angles", &PredictionErrorReport::predicted_angles)
      .def_readonly("errors_deg", &PredictionErrorReport::errors_deg)
      .def_readonly("mean_deg", &PredictionErrorReport::mean_deg)
      .def_readonly("std_deg", &PredictionErrorReport::std_deg)
      .def_readonly("failed_samples", &PredictionErrorReport::failed_samples)
      .def("formatted", &PredictionErrorReport::formatted);

  m.def(
      "prediction_errors",
      [](const FingerGeometry& geom, const Eigen::VectorXd& stiffness,
         const FlexionDataset& data) {
        return predictionErrors(StiffnessVector(stiffness), data, geom);
      },
      py::arg("geometry"), py::arg("stiffness"), py::arg("data"));

  m.def(
      "generate_synthetic_dataset",
      [](const FingerGeometry& geom, const Eigen::VectorXd& stiffness,
         const std::vector<double>& grid, double noise_std_deg,
         std::uint64_t seed, int cycles) {
        return generateSyntheticDataset(geom, StiffnessVector(stiffness), grid,
                                        noise_std_deg, seed, cycles);
      },
      py::arg("geometry"), py::arg("stiffness"), py::arg("tension_grid"),
      py::arg("noise_std_deg") = 0.0, py::arg("seed") = 0,
      py::arg("cycles") = 1);

  py::class_<HandLayout>(m, "HandLayout")
      .def(py::init<double>(), py::arg("base_radius"))
      .def_readwrite("base_radius", &HandLayout::base_radius);

  py::class_<HandModel>(m, "HandModel")
      .def_property_readonly("finger_count", &HandModel::fingerCount)
      .def("base_position", &HandModel::basePosition, py::arg("finger"))
      .def("fingertip_position", &HandModel::fingertipPosition,
           py::arg("finger"), py::arg("angles"));

  m.def(
      "assemble_hand",
      [](const FingerGeometry& geom, const Eigen::VectorXd& stiffness,
         int finger_count, const HandLayout& layout) {
        return assembleHand(geom, StiffnessVector(stiffness), finger_count,
                            layout);
      },
      py::arg("geometry"), py::arg("stiffness"), py::arg("finger_count"),
      py::arg("layout"));

  py::class_<HandState>(m, "HandState")
      .def_readonly("finger_angles", &HandState::finger_angles)
      .def_readonly("tensions", &HandState::tensions)
      .def_readonly("excursions", &HandState::excursions)
      .def_readonly("actuator_force", &HandState::actuator_force)
      .def_readonly("pull_loop_displacement", &HandState::pull_loop_displacement);

  m.def("solve_hand", &solveHand, py::arg("hand"), py::arg("actuator_force"),
        py::arg("clamps_per_finger") = std::vector<ClampSet>{},
        py::arg("options") = SolverOptions{});
  m.def("aperture", &aperture, py::arg("hand"), py::arg("state"));

  py::register_exception<ConvergenceFailure>(m, "ConvergenceError",
                                             PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "DatasetParseError", PyExc_ValueError);
}
