#include "flexhand/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "flexhand/errors.hpp"

namespace flexhand {

namespace {

struct ConfigEntry {
  std::vector<double> values;
  int line = 0;
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::map<std::string, ConfigEntry> parseFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open geometry file: " + path.string());
  }

  std::map<std::string, ConfigEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected key = value", path.string(), line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ParseError("empty key or value", path.string(), line_no);
    }
    if (entries.count(key)) {
      throw ParseError("duplicate key '" + key + "'", path.string(), line_no);
    }

    ConfigEntry entry;
    entry.line = line_no;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      try {
        std::size_t used = 0;
        entry.values.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ParseError("'" + item + "' is not a number (key '" + key + "')",
                         path.string(), line_no);
      }
    }
    if (entry.values.empty()) {
      throw ParseError("no values for key '" + key + "'", path.string(), line_no);
    }
    entries[key] = std::move(entry);
  }
  return entries;
}

class GeometryReader {
 public:
  GeometryReader(std::map<std::string, ConfigEntry> entries, std::string file)
      : entries_(std::move(entries)), file_(std::move(file)) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::vector<double> list(const std::string& key, std::size_t expected) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
      throw ParseError("missing required key '" + key + "'", file_, 0);
    }
    if (it->second.values.size() != expected) {
      throw ParseError("key '" + key + "' needs " + std::to_string(expected) +
                           " values, got " +
                           std::to_string(it->second.values.size()),
                       file_, it->second.line);
    }
    consumed_.insert(key);
    return it->second.values;
  }

  double scalar(const std::string& key) { return list(key, 1)[0]; }

  double scalarOr(const std::string& key, double fallback) {
    return has(key) ? scalar(key) : fallback;
  }

  std::vector<double> listOr(const std::string& key, std::size_t expected,
                             std::vector<double> fallback) {
    return has(key) ? list(key, expected) : std::move(fallback);
  }

  void rejectUnknown() const {
    for (const auto& [key, entry] : entries_) {
      if (!consumed_.count(key)) {
        throw ParseError("unknown key '" + key + "'", file_, entry.line);
      }
    }
  }

 private:
  std::map<std::string, ConfigEntry> entries_;
  std::string file_;
  std::set<std::string> consumed_;
};

}  // namespace

FingerGeometry loadGeometry(const std::filesystem::path& path) {
  GeometryReader reader(parseFile(path), path.string());

  FingerGeometry g;
  const double m_raw = reader.scalar("joint_count");
  g.joint_count = static_cast<int>(m_raw);
  if (g.joint_count < 1 || m_raw != g.joint_count) {
    throw ParseError("joint_count must be a positive integer", path.string(), 0);
  }
  const auto m = static_cast<std::size_t>(g.joint_count);

  for (double len_mm : reader.list("link_lengths_mm", m)) {
    g.link_lengths.push_back(len_mm * 1e-3);
  }
  for (double deg : reader.list("rest_angles_deg", m)) {
    g.rest_angles.push_back(degToRad(deg));
  }

  std::vector<double> along_default, lateral_default, pads_default;
  for (double len : g.link_lengths) {
    along_default.push_back(0.5 * len * 1e3);
    lateral_default.push_back(0.15 * len * 1e3);
    pads_default.push_back(0.1 * len * 1e3);
  }

  std::vector<double> along(along_default.begin(), along_default.end() - 1);
  std::vector<double> lateral(lateral_default.begin(), lateral_default.end() - 1);
  if (m > 1) {
    along = reader.listOr("routing_along_mm", m - 1, std::move(along));
    lateral = reader.listOr("routing_lateral_mm", m - 1, std::move(lateral));
  }
  along.push_back(reader.scalarOr("anchor_along_mm", along_default.back()));
  lateral.push_back(reader.scalarOr("anchor_lateral_mm", lateral_default.back()));
  for (std::size_t i = 0; i < m; ++i) {
    g.band_routing.push_back({along[i] * 1e-3, lateral[i] * 1e-3});
  }

  g.band_entry.along = reader.scalarOr("entry_along_mm", -along[0]) * 1e-3;
  g.band_entry.lateral = reader.scalarOr("entry_lateral_mm", lateral[0]) * 1e-3;

  for (double pad_mm : reader.listOr("pad_offsets_mm", m, pads_default)) {
    g.pad_offsets.push_back(pad_mm * 1e-3);
  }

  g.reference_length =
      reader.scalarOr("reference_length_mm", kReferenceFingerLength * 1e3) * 1e-3;
  g.scale = reader.scalarOr("scale", g.totalLength() / g.reference_length);

  reader.rejectUnknown();
  g.validate();
  return g;
}

void writeGeometry(const std::filesystem::path& path,
                   const FingerGeometry& geom) {
  geom.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write geometry file: " + path.string());
  }

  const auto join = [](const auto& values, auto&& transform) {
    std::string s;
    char buf[32];
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.10g", transform(values[i]));
      if (i) s += ", ";
      s += buf;
    }
    return s;
  };
  const auto mm = [](double meters) { return meters * 1e3; };
  const auto deg = [](double rad) { return radToDeg(rad); };

  out << "joint_count = " << geom.joint_count << "\n";
  out << "link_lengths_mm = " << join(geom.link_lengths, mm) << "\n";
  out << "rest_angles_deg = " << join(geom.rest_angles, deg) << "\n";
  if (geom.joint_count > 1) {
    std::vector<double> along, lateral;
    for (std::size_t i = 0; i + 1 < geom.band_routing.size(); ++i) {
      along.push_back(geom.band_routing[i].along);
      lateral.push_back(geom.band_routing[i].lateral);
    }
    out << "routing_along_mm = " << join(along, mm) << "\n";
    out << "routing_lateral_mm = " << join(lateral, mm) << "\n";
  }
  out << "anchor_along_mm = " << mm(geom.band_routing.back().along) << "\n";
  out << "anchor_lateral_mm = " << mm(geom.band_routing.back().lateral) << "\n";
  out << "entry_along_mm = " << mm(geom.band_entry.along) << "\n";
  out << "entry_lateral_mm = " << mm(geom.band_entry.lateral) << "\n";
  out << "pad_offsets_mm = " << join(geom.pad_offsets, mm) << "\n";
  out << "scale = " << geom.scale << "\n";
  out << "reference_length_mm = " << mm(geom.reference_length) << "\n";
  if (!out) {
    throw IoError("failed writing geometry file: " + path.string());
  }
}

}  // namespace flexhand
