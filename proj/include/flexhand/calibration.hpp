#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "flexhand/equilibrium.hpp"
#include "flexhand/geometry.hpp"
#include "flexhand/statics.hpp"

namespace flexhand {

/// One recorded flexion state: applied tension and measured joint angles.
struct FlexionSample {
  double tension = 0.0;       // f_in [N]
  Eigen::VectorXd angles;     // measured [rad]
  int cycle = -1;             // flexion-cycle id, -1 if unknown
};

/// Calibration data. Requires non-negative tensions, one joint count across
/// samples, and at least as many samples as joints.
class FlexionDataset {
 public:
  FlexionDataset(int joint_count, std::vector<FlexionSample> samples);

  int jointCount() const { return joint_count_; }
  int size() const { return static_cast<int>(samples_.size()); }
  const std::vector<FlexionSample>& samples() const { return samples_; }

 private:
  int joint_count_;
  std::vector<FlexionSample> samples_;
};

/// Sum of squared torque-balance residual norms over the dataset. Evaluated
/// directly at the measured angles, so no equilibrium solve is involved.
double residualObjective(const StiffnessVector& k, const FlexionDataset& data,
                         const FingerGeometry& geom);

/// Gradient of residualObjective with respect to the stiffness coefficients.
Eigen::VectorXd residualObjectiveGradient(const StiffnessVector& k,
                                          const FlexionDataset& data,
                                          const FingerGeometry& geom);

struct FitOptions {
  double gradient_tolerance = 1e-8;   // scaled by max(1, objective)
  int max_iterations = 200;
  SolverOptions solver;               // used for prediction-error evaluation
  bool evaluate_predictions = true;
  // Samples below this tension are dropped before fitting: the band tightens
  // from a loose state at low tension, which the model does not cover.
  double min_tension = 0.0;           // [N]
};

struct FitResult {
  Eigen::VectorXd stiffness;         // k* [N m / rad]
  double objective = 0.0;            // at k*
  int iterations = 0;
  Eigen::MatrixXd predicted_angles;  // N x m, equilibria at the sample tensions [rad]
  double angle_error_mean_deg = 0.0;
  double angle_error_std_deg = 0.0;
  bool identifiability_warning = false;
  Eigen::VectorXd curvature_eigenvalues;  // Gauss-Newton curvature spectrum
};

/// Identifies joint stiffnesses by quasi-Newton (BFGS) minimization of the
/// residual objective. Stiffness positivity is kept by optimizing in log
/// space. Near-singular curvature raises the identifiability warning instead
/// of failing.
FitResult fitStiffness(const FlexionDataset& data, const FingerGeometry& geom,
                       const StiffnessVector& k_init,
                       const FitOptions& opts = {});

struct PredictionErrorReport {
  Eigen::MatrixXd predicted_angles;  // N x m [rad], NaN rows for failed solves
  Eigen::MatrixXd errors_deg;        // N x m absolute angle errors [deg]
  double mean_deg = 0.0;
  double std_deg = 0.0;
  int failed_samples = 0;

  /// "1.04° ± 0.74°"
  std::string formatted() const;
};

/// Solves the model at each sample's tension and compares the equilibrium
/// angles with the measured ones, per joint. Samples whose solve fails are
/// counted and excluded from the aggregate.
PredictionErrorReport predictionErrors(const StiffnessVector& k,
                                       const FlexionDataset& data,
                                       const FingerGeometry& geom,
                                       const SolverOptions& opts = {});

std::string formatMeanStd(double mean_deg, double std_deg);

/// Model equilibria over a tension grid, repeated for the requested number of
/// flexion cycles, with i.i.d. Gaussian angle noise. Deterministic per seed.
FlexionDataset generateSyntheticDataset(const FingerGeometry& geom,
                                        const StiffnessVector& k,
                                        const std::vector<double>& tension_grid,
                                        double noise_std_deg,
                                        std::uint64_t seed, int cycles = 1,
                                        const SolverOptions& opts = {});

}  // namespace flexhand
