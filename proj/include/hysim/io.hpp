#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hysim/dynamics.hpp"
#include "hysim/ensemble.hpp"

#include "json.hpp"

namespace hysim {

// Shortest decimal form that round-trips the exact double value.
std::string fmt_double(double v);

std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

std::string read_text_file(const std::filesystem::path& path);

// Formats with every numeric column in round-trip precision.
std::string trajectory_csv(const Trajectory& traj);
std::string ensemble_csv(const HybridEnsemble& ens);
std::string marginal_csv(const Marginal& m);

// Collects output files and their checksums, writes them on the way, and
// produces the run manifest at the end.
class OutputWriter {
 public:
  explicit OutputWriter(std::filesystem::path dir);
  void write(const std::string& filename, const std::string& content);
  // Writes <dir>/run_manifest.json listing every file written so far.
  void write_manifest(const nlohmann::json& run_info);
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<nlohmann::json> entries_;
};

}  // namespace hysim
