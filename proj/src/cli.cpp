#include "flexhand/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "flexhand/config.hpp"
#include "flexhand/dataset_io.hpp"
#include "flexhand/errors.hpp"
#include "flexhand/hand.hpp"

namespace flexhand::cli {

namespace {

std::string num(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

std::ofstream openOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write output file: " + path.string());
  }
  return out;
}

StiffnessVector stiffnessFromConfig(const RunConfig& config,
                                    const FingerGeometry& geom) {
  if (config.stiffness.empty()) {
    throw std::invalid_argument("--stiffness k1,k2,... is required");
  }
  if (static_cast<int>(config.stiffness.size()) != geom.joint_count) {
    throw std::invalid_argument("--stiffness needs one value per joint");
  }
  return StiffnessVector(Eigen::Map<const Eigen::VectorXd>(
      config.stiffness.data(), config.stiffness.size()));
}

std::vector<double> parseNumberList(const std::string& spec, char sep,
                                    const std::string& what) {
  std::vector<double> values;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad " + what + " value '" + item + "'");
    }
  }
  return values;
}

double defaultBaseRadius(const RunConfig& config, const FingerGeometry& geom) {
  return config.base_radius_mm > 0.0 ? config.base_radius_mm * 1e-3
                                     : 0.5 * geom.totalLength();
}

}  // namespace

std::vector<double> parseRampSpec(const std::string& spec) {
  const std::vector<double> parts = parseNumberList(spec, ':', "ramp");
  if (parts.size() != 3) {
    throw std::invalid_argument("--ramp expects start:stop:step");
  }
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0) || stop < start || start < 0.0) {
    throw std::invalid_argument("--ramp needs 0 <= start <= stop and step > 0");
  }
  std::vector<double> schedule;
  for (int i = 0;; ++i) {
    const double f = start + i * step;
    if (f > stop + 1e-9 * step) break;
    schedule.push_back(f);
  }
  return schedule;
}

ClampSpec parseClampSpec(const std::string& spec) {
  const std::vector<double> parts = parseNumberList(spec, ':', "clamp");
  if (parts.size() != 3) {
    throw std::invalid_argument("--clamp expects finger:joint:angle_deg");
  }
  ClampSpec clamp;
  clamp.finger = static_cast<int>(parts[0]);
  clamp.joint = static_cast<int>(parts[1]);
  clamp.angle_deg = parts[2];
  if (clamp.finger != parts[0] || clamp.joint != parts[1] ||
      clamp.finger < 1 || clamp.joint < 1) {
    throw std::invalid_argument("clamp finger and joint must be positive integers");
  }
  return clamp;
}

std::filesystem::path cmdSimulate(const RunConfig& config) {
  const FingerGeometry geom = loadGeometry(config.geometry_path);
  const StiffnessVector k = stiffnessFromConfig(config, geom);
  if (config.schedule.empty()) {
    throw std::invalid_argument("simulate needs a non-empty --ramp schedule");
  }
  if (config.noise_std_deg < 0.0) {
    throw std::invalid_argument("--noise-deg must be non-negative");
  }

  std::filesystem::create_directories(config.out_dir);
  const std::filesystem::path csv_path = config.out_dir / "simulate.csv";

  // Optional synthetic measurement noise on the written angles, so a single
  // run can stand in for a recorded flexion.
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> noise(0.0, degToRad(config.noise_std_deg));

  std::ostringstream rows;
  Eigen::VectorXd warm = Eigen::Map<const Eigen::VectorXd>(
      geom.rest_angles.data(), geom.rest_angles.size());
  const auto flush = [&] {
    auto out = openOutput(csv_path);
    out << "f_in_N";
    for (int j = 1; j <= geom.joint_count; ++j) out << ",theta" << j << "_deg";
    out << ",excursion_mm\n" << rows.str();
  };

  double prev = -1.0;
  for (std::size_t i = 0; i < config.schedule.size(); ++i) {
    const double f = config.schedule[i];
    if (f < 0.0 || f <= prev) {
      throw std::invalid_argument(
          "schedule must be non-negative and strictly increasing");
    }
    prev = f;
    try {
      const EquilibriumSolution sol = solveEquilibrium(geom, k, f, warm);
      warm = sol.angles;
      rows << num(f);
      for (int j = 0; j < geom.joint_count; ++j) {
        const double jitter = config.noise_std_deg > 0.0 ? noise(rng) : 0.0;
        rows << ',' << num(radToDeg(sol.angles[j] + jitter));
      }
      const JointConfiguration q(geom, sol.angles);
      rows << ',' << num(tendonExcursion(geom, q) * 1e3) << "\n";
    } catch (const ConvergenceFailure& failure) {
      flush();  // keep the rows computed so far
      throw ConvergenceFailure("ramp step " + std::to_string(i) + " (tension " +
                                   num(f) + " N): " + failure.what(),
                               failure.bestIterate(), failure.residualNorm());
    }
  }
  flush();
  return csv_path;
}

CalibrationOutput cmdCalibrate(const RunConfig& config,
                               const std::filesystem::path& dataset_path) {
  const FingerGeometry geom = loadGeometry(config.geometry_path);
  const FlexionDataset data = loadFlexionCsv(dataset_path, config.radians);
  if (data.jointCount() != geom.joint_count) {
    throw std::invalid_argument("dataset has " +
                                std::to_string(data.jointCount()) +
                                " joints, geometry has " +
                                std::to_string(geom.joint_count));
  }

  Eigen::VectorXd k_init =
      Eigen::VectorXd::Constant(geom.joint_count, 10.0);
  if (!config.stiffness.empty()) {
    if (static_cast<int>(config.stiffness.size()) != geom.joint_count) {
      throw std::invalid_argument("--stiffness needs one value per joint");
    }
    k_init = Eigen::Map<const Eigen::VectorXd>(config.stiffness.data(),
                                               config.stiffness.size());
  }

  FitOptions fit_opts;
  fit_opts.min_tension = config.min_tension;
  const FitResult fit =
      fitStiffness(data, geom, StiffnessVector(k_init), fit_opts);

  std::filesystem::create_directories(config.out_dir);
  CalibrationOutput output{fit, config.out_dir / "calibration_report.txt",
                           config.out_dir / "calibration_residuals.csv"};

  {
    auto report = openOutput(output.report);
    report << "stiffness_Nm_per_rad =";
    for (int j = 0; j < geom.joint_count; ++j) {
      report << (j ? ", " : " ") << num(fit.stiffness[j]);
    }
    report << "\nobjective_Nm2 = " << num(fit.objective) << "\n";
    report << "iterations = " << fit.iterations << "\n";
    report << "angle_error = "
           << formatMeanStd(fit.angle_error_mean_deg, fit.angle_error_std_deg)
           << "\n";
    report << "identifiability_warning = "
           << (fit.identifiability_warning ? "true" : "false") << "\n";
  }

  {
    auto csv = openOutput(output.residuals);
    csv << "sample_id,f_in_N";
    for (int j = 1; j <= geom.joint_count; ++j) csv << ",rho" << j << "_Nm";
    for (int j = 1; j <= geom.joint_count; ++j) csv << ",error" << j << "_deg";
    csv << "\n";
    const StiffnessVector k_star(fit.stiffness);
    for (int s = 0; s < data.size(); ++s) {
      const auto& sample = data.samples()[s];
      const JointConfiguration q(geom, sample.angles);
      const Eigen::VectorXd rho = torqueResiduals(sample.tension, q, k_star, geom);
      csv << sample.cycle << ',' << num(sample.tension);
      for (int j = 0; j < geom.joint_count; ++j) csv << ',' << num(rho[j]);
      for (int j = 0; j < geom.joint_count; ++j) {
        const double predicted = fit.predicted_angles(s, j);
        csv << ','
            << (std::isnan(predicted)
                    ? "nan"
                    : num(radToDeg(std::abs(predicted - sample.angles[j]))));
      }
      csv << "\n";
    }
  }

  if (fit.identifiability_warning) {
    std::fprintf(stderr,
                 "warning: dataset barely excites some joints; "
                 "stiffness estimates may be unreliable\n");
  }
  return output;
}

std::filesystem::path cmdSweep(const RunConfig& config) {
  const FingerGeometry geom = loadGeometry(config.geometry_path);
  const StiffnessVector k = stiffnessFromConfig(config, geom);
  if (config.kappa_list.empty()) {
    throw std::invalid_argument("sweep needs a non-empty --kappa list");
  }
  std::vector<double> schedule = config.schedule;
  if (schedule.empty()) {
    for (int i = 1; i <= 10; ++i) schedule.push_back(5.0 * i);
  }

  for (double kappa : config.kappa_list) {
    if (!(kappa > 0.0)) {
      throw std::invalid_argument("--kappa values must be positive");
    }
  }

  // Scales are independent; compute them in parallel and write in order.
  const auto sweepOneScale = [&](double kappa) {
    const FingerGeometry scaled = scaleGeometry(geom, kappa / geom.scale);
    const HandModel hand =
        assembleHand(scaled, k, 2, {defaultBaseRadius(config, scaled)});

    std::ostringstream block;
    Eigen::VectorXd warm = Eigen::Map<const Eigen::VectorXd>(
        scaled.rest_angles.data(), scaled.rest_angles.size());
    for (double f : schedule) {
      const EquilibriumSolution sol = solveEquilibrium(scaled, k, f, warm);
      warm = sol.angles;
      const JointConfiguration q(scaled, sol.angles);

      HandState mirrored;
      mirrored.finger_angles = {sol.angles, sol.angles};
      block << num(kappa) << ',' << num(scaled.totalLength() * 1e3) << ','
            << num(f);
      for (int j = 0; j < scaled.joint_count; ++j) {
        block << ',' << num(radToDeg(sol.angles[j]));
      }
      block << ',' << num(tendonExcursion(scaled, q) * 1e3) << ','
            << num(aperture(hand, mirrored) * 1e3) << "\n";
    }
    return block.str();
  };

  std::vector<std::future<std::string>> blocks;
  blocks.reserve(config.kappa_list.size());
  for (double kappa : config.kappa_list) {
    blocks.push_back(std::async(std::launch::async, sweepOneScale, kappa));
  }

  std::filesystem::create_directories(config.out_dir);
  const std::filesystem::path csv_path = config.out_dir / "sweep.csv";
  auto out = openOutput(csv_path);
  out << "kappa,finger_length_mm,f_in_N";
  for (int j = 1; j <= geom.joint_count; ++j) out << ",theta" << j << "_deg";
  out << ",excursion_mm,aperture_mm\n";
  for (auto& block : blocks) {
    out << block.get();
  }
  if (!out) {
    throw IoError("failed writing " + csv_path.string());
  }
  return csv_path;
}

std::filesystem::path cmdHand(const RunConfig& config) {
  const FingerGeometry geom = loadGeometry(config.geometry_path);
  const StiffnessVector k = stiffnessFromConfig(config, geom);
  if (config.schedule.empty()) {
    throw std::invalid_argument("hand needs a non-empty --ramp schedule");
  }
  const int n = config.fingers;
  const HandModel hand =
      assembleHand(geom, k, n, {defaultBaseRadius(config, geom)});

  std::vector<ClampSet> clamps(n);
  for (const auto& spec : config.clamps) {
    if (spec.finger > n) {
      throw std::invalid_argument("clamp finger index exceeds finger count");
    }
    clamps[spec.finger - 1].push_back(
        {spec.joint - 1, degToRad(spec.angle_deg)});
  }

  std::filesystem::create_directories(config.out_dir);
  const std::filesystem::path csv_path = config.out_dir / "hand.csv";
  auto out = openOutput(csv_path);
  out << "F_N";
  for (int f = 1; f <= n; ++f) out << ",tension" << f << "_N";
  for (int f = 1; f <= n; ++f) {
    for (int j = 1; j <= geom.joint_count; ++j) {
      out << ",f" << f << "_theta" << j << "_deg";
    }
  }
  out << ",aperture_mm,pull_loop_mm\n";

  for (double force : config.schedule) {
    const HandState state = solveHand(hand, force, clamps);
    out << num(force);
    for (double t : state.tensions) out << ',' << num(t);
    for (const auto& angles : state.finger_angles) {
      for (int j = 0; j < geom.joint_count; ++j) {
        out << ',' << num(radToDeg(angles[j]));
      }
    }
    out << ',' << num(aperture(hand, state) * 1e3) << ','
        << num(state.pull_loop_displacement * 1e3) << "\n";
  }
  if (!out) {
    throw IoError("failed writing " + csv_path.string());
  }
  return csv_path;
}

}  // namespace flexhand::cli
