#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "flexhand/calibration.hpp"

namespace flexhand::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kParseFailure = 2,        // malformed files or command line
  kValidationFailure = 3,   // violated preconditions/invariants
  kConvergenceFailure = 4,  // solver or fit did not converge
  kIoFailure = 5,           // unreadable/unwritable paths
};

/// Clamp request as given on the command line (1-based indices, degrees).
struct ClampSpec {
  int finger = 1;
  int joint = 1;
  double angle_deg = 0.0;
};

struct RunConfig {
  std::filesystem::path geometry_path;
  std::vector<double> stiffness;      // k1..km [N m / rad]
  std::vector<double> schedule;       // tension or actuator-force schedule [N]
  std::vector<double> kappa_list;     // absolute scales for sweep
  std::vector<ClampSpec> clamps;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  bool radians = false;               // dataset angle columns in radians
  int fingers = 2;
  double base_radius_mm = 0.0;        // 0: half the finger length
  double noise_std_deg = 0.0;         // simulate: measurement noise on angles
  double min_tension = 0.0;           // calibrate: drop samples below this [N]
};

/// "start:stop:step" -> {start, start+step, ..., <= stop}
std::vector<double> parseRampSpec(const std::string& spec);

/// "finger:joint:angle_deg"
ClampSpec parseClampSpec(const std::string& spec);

/// Tension ramp on a single finger. Writes <out>/simulate.csv with header
/// f_in_N,theta1_deg,...,thetam_deg,excursion_mm. On a solver failure the
/// rows computed so far are flushed before the error propagates.
std::filesystem::path cmdSimulate(const RunConfig& config);

struct CalibrationOutput {
  FitResult fit;
  std::filesystem::path report;     // <out>/calibration_report.txt
  std::filesystem::path residuals;  // <out>/calibration_residuals.csv
};

/// Fits stiffnesses to a recorded dataset; --stiffness is the initial guess.
CalibrationOutput cmdCalibrate(const RunConfig& config,
                               const std::filesystem::path& dataset_path);

/// Scaling study over the kappa list. Writes <out>/sweep.csv with one row per
/// (kappa, tension): finger length, equilibrium angles, excursion and the
/// two-finger aperture.
std::filesystem::path cmdSweep(const RunConfig& config);

/// Actuator-force ramp on an n-finger hand with optional clamps. Writes
/// <out>/hand.csv: per-finger tensions and angles, aperture, pull-loop
/// displacement.
std::filesystem::path cmdHand(const RunConfig& config);

}  // namespace flexhand::cli
