// Command-line front end: simulate, calibrate, sweep and hand subcommands
// over the flexhand library. Emits plot-ready CSV files.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flexhand/cli.hpp"
#include "flexhand/errors.hpp"

namespace {

using flexhand::cli::RunConfig;

void addCommonOptions(CLI::App* cmd, RunConfig& config, std::string& ramp_spec,
                      std::vector<std::string>& clamp_specs) {
  cmd->add_option("--geometry", config.geometry_path,
                  "geometry config file (key = value, mm/deg)")
      ->required();
  cmd->add_option("--stiffness", config.stiffness,
                  "joint stiffnesses k1,k2,... [N m/rad]")
      ->delimiter(',');
  cmd->add_option("--ramp", ramp_spec, "tension schedule start:stop:step [N]");
  cmd->add_option("--clamp", clamp_specs,
                  "hold a joint: finger:joint:angle_deg (repeatable)");
  cmd->add_option("--seed", config.seed, "random seed");
  cmd->add_option("--out", config.out_dir, "output directory")->required();
  cmd->add_flag("--radians", config.radians,
                "dataset angle columns are theta*_rad in radians");
}

int dispatch(const std::string& command, const RunConfig& config,
             const std::filesystem::path& dataset_path) {
  namespace cli = flexhand::cli;
  if (command == "simulate") {
    std::printf("%s\n", cli::cmdSimulate(config).c_str());
  } else if (command == "calibrate") {
    const cli::CalibrationOutput output = cli::cmdCalibrate(config, dataset_path);
    std::printf("stiffness_Nm_per_rad =");
    for (int j = 0; j < output.fit.stiffness.size(); ++j) {
      std::printf("%s %.6g", j ? "," : "", output.fit.stiffness[j]);
    }
    std::printf("\nangle_error = %s\n",
                flexhand::formatMeanStd(output.fit.angle_error_mean_deg,
                                        output.fit.angle_error_std_deg)
                    .c_str());
    std::printf("%s\n%s\n", output.report.c_str(), output.residuals.c_str());
  } else if (command == "sweep") {
    std::printf("%s\n", cli::cmdSweep(config).c_str());
  } else {
    std::printf("%s\n", cli::cmdHand(config).c_str());
  }
  return cli::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = flexhand::cli;

  CLI::App app{"Simulation, calibration and design analysis for tendon-driven "
               "compliant fingers and hands"};
  app.require_subcommand(1);

  RunConfig config;
  std::string ramp_spec;
  std::vector<std::string> clamp_specs;
  std::string kappa_spec;
  std::filesystem::path dataset_path;

  CLI::App* simulate =
      app.add_subcommand("simulate", "flex one finger along a tension ramp");
  addCommonOptions(simulate, config, ramp_spec, clamp_specs);
  simulate->add_option("--noise-deg", config.noise_std_deg,
                       "add seeded Gaussian noise to the written angles");

  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "fit joint stiffnesses to a recorded flexion dataset");
  addCommonOptions(calibrate, config, ramp_spec, clamp_specs);
  calibrate->add_option("dataset", dataset_path, "flexion dataset CSV")
      ->required();
  calibrate->add_option("--min-tension", config.min_tension,
                        "drop samples below this tension [N]");

  CLI::App* sweep =
      app.add_subcommand("sweep", "analyze scaled variants of the finger");
  addCommonOptions(sweep, config, ramp_spec, clamp_specs);
  sweep->add_option("--kappa", kappa_spec, "comma-separated scale factors");

  CLI::App* hand = app.add_subcommand(
      "hand", "solve an n-finger hand along an actuator-force ramp");
  addCommonOptions(hand, config, ramp_spec, clamp_specs);
  hand->add_option("--fingers", config.fingers, "number of fingers (>= 2)");
  hand->add_option("--base-radius-mm", config.base_radius_mm,
                   "finger base circle radius [mm]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? cli::kOk : cli::kParseFailure;
  }

  try {
    if (!ramp_spec.empty()) config.schedule = cli::parseRampSpec(ramp_spec);
    if (!kappa_spec.empty()) {
      std::stringstream ss(kappa_spec);
      std::string item;
      while (std::getline(ss, item, ',')) {
        config.kappa_list.push_back(std::stod(item));
      }
    }
    for (const auto& spec : clamp_specs) {
      config.clamps.push_back(cli::parseClampSpec(spec));
    }
    return dispatch(app.get_subcommands().front()->get_name(), config,
                    dataset_path);
  } catch (const flexhand::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return cli::kParseFailure;
  } catch (const flexhand::ConvergenceFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return cli::kConvergenceFailure;
  } catch (const flexhand::NumericalFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return cli::kConvergenceFailure;
  } catch (const flexhand::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return cli::kIoFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return cli::kIoFailure;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return cli::kValidationFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return cli::kValidationFailure;
  }
}
