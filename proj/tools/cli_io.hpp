#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace arbgas_cli {

// 17 significant digits: decimal round-trips to the same double.
inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvWriter {
  std::ostringstream out;
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ",";
      out << cells[i];
    }
    out << "\n";
  }
  std::string str() const { return out.str(); }
};

// write-then-rename so readers never observe a partial file
inline void write_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + tmp);
    f << content;
    if (!f.good()) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

inline uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// run manifest: configuration echo, its hash, seed, timing, output paths
inline void write_manifest(const std::string& out_path, const std::string& command,
                           const nlohmann::json& config, uint64_t seed, double wall_seconds,
                           const std::vector<std::string>& outputs) {
  nlohmann::json m;
  m["schema_version"] = 1;
  m["tool"] = "arbgas";
  m["command"] = command;
  m["config"] = config;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(config.dump())));
  m["config_hash"] = hash;
  m["seed"] = seed;
  m["wall_time_s"] = wall_seconds;
  m["outputs"] = outputs;
  write_atomic(out_path, m.dump(2) + "\n");
}

}  // namespace arbgas_cli
