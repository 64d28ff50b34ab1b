#pragma once

#include <filesystem>

#include "flexhand/geometry.hpp"

namespace flexhand {

/// Reads a finger geometry from a key = value file. Lengths are given in
/// millimeters and angles in degrees; comments start with '#'.
///
/// Required keys: joint_count, link_lengths_mm, rest_angles_deg.
/// Optional keys (defaults in parentheses, L_i the link length):
///   routing_along_mm (L_i/2), routing_lateral_mm (0.15 L_i),
///   anchor_along_mm (L_m/2), anchor_lateral_mm (0.15 L_m),
///   entry_along_mm (-routing_along_1), entry_lateral_mm (routing_lateral_1),
///   pad_offsets_mm (0.1 L_i), reference_length_mm (52),
///   scale (total length / reference length).
///
/// Throws ParseError with file and line on malformed input,
/// std::invalid_argument if the resulting geometry is invalid.
FingerGeometry loadGeometry(const std::filesystem::path& path);

/// Writes a geometry in the loadGeometry format.
void writeGeometry(const std::filesystem::path& path, const FingerGeometry& geom);

}  // namespace flexhand
