#include "inls/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace inls {

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string file_checksum(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for checksum: " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 14];
  while (is) {
    is.read(buf, sizeof(buf));
    const std::streamsize got = is.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = tool;
  j["version"] = version;
  j["subcommand"] = subcommand;
  j["config"] = config;
  j["seed"] = seed;
  j["inputs"] = inputs;
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& [p, c] : outputs) outs.push_back({{"path", p}, {"fnv1a64", c}});
  j["outputs"] = outs;
  j["wall_clock_seconds"] = wall_clock_seconds;
  return j.dump(2);
}

RunManifest RunManifest::from_json_file(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(path));
  RunManifest m;
  m.tool = j.value("tool", "");
  m.version = j.value("version", "");
  m.subcommand = j.at("subcommand").get<std::string>();
  if (j.contains("config"))
    for (auto it = j["config"].begin(); it != j["config"].end(); ++it)
      m.config[it.key()] = it.value().get<std::string>();
  m.seed = j.value("seed", 0ull);
  if (j.contains("inputs")) m.inputs = j["inputs"].get<std::vector<std::string>>();
  if (j.contains("outputs"))
    for (const auto& o : j["outputs"])
      m.outputs.emplace_back(o.at("path").get<std::string>(), o.at("fnv1a64").get<std::string>());
  m.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
  return m;
}

void RunManifest::write(const std::string& path) const { write_text_file(path, to_json() + "\n"); }

}  // namespace inls
