#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hysim {

inline constexpr const char* kToolName = "hysim";
inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 2 configuration error, 3 numeric failure or failed
// scenario checks, 4 I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

enum class Command {
  Simulate,
  Ensemble,
  Bracket,
  Classify,
  ScenarioToy,
  ScenarioPeresTerno,
  ClosureProbe,
};

struct RunConfig {
  Command command = Command::Classify;
  std::optional<std::filesystem::path> config_path;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed_override;
  // Expression commands carry dimensions and operands inline.
  int n_cl = 0;
  int n_qm = 1;
  int depth = 3;
  std::string bracket_kind = "hybrid";  // hybrid | cl | qm
  std::vector<std::string> expressions;
};

// Runs the selected command, writes artifacts and the run manifest, prints a
// short summary to stdout, and maps failures to the documented exit codes
// (machine-readable error JSON goes to stderr).
int dispatch(const RunConfig& cfg);

}  // namespace hysim
