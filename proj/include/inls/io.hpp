#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace inls {

/// Fixed 17-significant-digit float formatting; replay checks compare bytes.
std::string format_float(double v);

/// One CSV row from already-formatted cells.
std::string csv_row(const std::vector<std::string>& cells);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// FNV-1a 64-bit checksum of a file's bytes, as lowercase hex.
std::string file_checksum(const std::string& path);

/// Reproducibility record for a CLI run.
struct RunManifest {
  std::string tool = "inls-lab";
  std::string version = "1.0.0";
  std::string subcommand;
  std::map<std::string, std::string> config;  // effective configuration, stringified
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::pair<std::string, std::string>> outputs;  // (relative path, checksum)
  double wall_clock_seconds = 0;

  std::string to_json() const;
  static RunManifest from_json_file(const std::string& path);
  void write(const std::string& path) const;
};

}  // namespace inls
