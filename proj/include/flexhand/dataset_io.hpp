#pragma once

#include <filesystem>

#include "flexhand/calibration.hpp"

namespace flexhand {

/// Reads a flexion dataset from CSV.
///
/// The canonical header is `sample_id,f_in_N,theta1_deg,...,thetam_deg`;
/// sample_id is optional and extra columns are ignored, so simulation output
/// (`f_in_N,theta1_deg,...,excursion_mm`) loads directly. Instead of f_in_N
/// the pair `actuator_torque_Nm,pulley_radius_m` is accepted and converted as
/// tension = torque / radius. With radians = true the angle columns must be
/// named theta1_rad,... and carry radians.
///
/// Throws ParseError naming the offending row/column.
FlexionDataset loadFlexionCsv(const std::filesystem::path& path,
                              bool radians = false);

/// Writes the canonical dataset CSV (degrees, LF line endings).
void writeFlexionCsv(const std::filesystem::path& path,
                     const FlexionDataset& data);

}  // namespace flexhand
