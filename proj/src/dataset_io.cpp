#include "flexhand/dataset_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "flexhand/errors.hpp"

namespace flexhand {

namespace {

std::vector<std::string> splitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto begin = field.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
      fields.push_back("");
      continue;
    }
    const auto end = field.find_last_not_of(" \t\r");
    fields.push_back(field.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parseNumber(const std::string& text, const std::string& column,
                   const std::string& file, int line) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ParseError("'" + text + "' is not a number (column " + column + ")",
                     file, line);
  }
}

}  // namespace

FlexionDataset loadFlexionCsv(const std::filesystem::path& path, bool radians) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open dataset: " + path.string());
  }
  const std::string file = path.string();

  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty dataset file", file, 1);
  }
  const std::vector<std::string> header = splitCsvLine(line);
  std::map<std::string, int> columns;
  for (std::size_t i = 0; i < header.size(); ++i) {
    columns[header[i]] = static_cast<int>(i);
  }

  const int tension_col = columns.count("f_in_N") ? columns["f_in_N"] : -1;
  const int torque_col =
      columns.count("actuator_torque_Nm") ? columns["actuator_torque_Nm"] : -1;
  const int radius_col =
      columns.count("pulley_radius_m") ? columns["pulley_radius_m"] : -1;
  if (tension_col < 0 && (torque_col < 0 || radius_col < 0)) {
    throw ParseError(
        "need either an f_in_N column or actuator_torque_Nm with pulley_radius_m",
        file, 1);
  }

  const std::string angle_suffix = radians ? "_rad" : "_deg";
  std::vector<int> angle_cols;
  for (int j = 1;; ++j) {
    const std::string name = "theta" + std::to_string(j) + angle_suffix;
    if (!columns.count(name)) break;
    angle_cols.push_back(columns[name]);
  }
  if (angle_cols.empty()) {
    throw ParseError("no theta1" + angle_suffix + ",... angle columns found",
                     file, 1);
  }
  const int sample_col = columns.count("sample_id") ? columns["sample_id"] : -1;
  const int m = static_cast<int>(angle_cols.size());

  std::vector<FlexionSample> samples;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = splitCsvLine(line);
    if (fields.size() < header.size()) {
      throw ParseError("row has " + std::to_string(fields.size()) +
                           " fields, header has " +
                           std::to_string(header.size()),
                       file, line_no);
    }

    FlexionSample sample;
    if (tension_col >= 0) {
      sample.tension = parseNumber(fields[tension_col], "f_in_N", file, line_no);
    } else {
      const double torque =
          parseNumber(fields[torque_col], "actuator_torque_Nm", file, line_no);
      const double radius =
          parseNumber(fields[radius_col], "pulley_radius_m", file, line_no);
      if (!(radius > 0.0)) {
        throw ParseError("pulley radius must be positive", file, line_no);
      }
      sample.tension = torque / radius;
    }
    if (sample.tension < 0.0) {
      throw ParseError("tension must be non-negative (column " +
                           std::string(tension_col >= 0 ? "f_in_N"
                                                        : "actuator_torque_Nm") +
                           ")",
                       file, line_no);
    }

    sample.angles.resize(m);
    for (int j = 0; j < m; ++j) {
      const std::string column = "theta" + std::to_string(j + 1) + angle_suffix;
      const double value = parseNumber(fields[angle_cols[j]], column, file, line_no);
      sample.angles[j] = radians ? value : degToRad(value);
    }
    if (sample_col >= 0) {
      sample.cycle = static_cast<int>(
          parseNumber(fields[sample_col], "sample_id", file, line_no));
    } else {
      sample.cycle = static_cast<int>(samples.size());
    }
    samples.push_back(std::move(sample));
  }

  try {
    return FlexionDataset(m, std::move(samples));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), file, 0);
  }
}

void writeFlexionCsv(const std::filesystem::path& path,
                     const FlexionDataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write dataset: " + path.string());
  }

  out << "sample_id,f_in_N";
  for (int j = 1; j <= data.jointCount(); ++j) {
    out << ",theta" << j << "_deg";
  }
  out << "\n";

  char buf[32];
  for (const auto& sample : data.samples()) {
    out << sample.cycle;
    std::snprintf(buf, sizeof(buf), "%.10g", sample.tension);
    out << ',' << buf;
    for (int j = 0; j < data.jointCount(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.10g", radToDeg(sample.angles[j]));
      out << ',' << buf;
    }
    out << "\n";
  }
  if (!out) {
    throw IoError("failed writing dataset: " + path.string());
  }
}

}  // namespace flexhand
