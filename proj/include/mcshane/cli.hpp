#pragma once

// Verification campaigns behind the command-line tool. Each command is a
// pure function of its RunConfig and returns the report files it would
// write, so reruns can be compared byte for byte.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "mcshane/halfpants.hpp"
#include "mcshane/surface.hpp"

namespace mcshane {

enum class PrecisionMode { Double, Extended };

struct RunConfig {
  std::string surface = "octagon";  // "octagon" or "custom"
  std::vector<FenchelNielsen> fenchel_nielsen;
  double length_bound = 5.0;
  std::int64_t rays = 100'000;
  std::vector<double> cutoffs{5.0, 10.0, 20.0};
  std::uint64_t seed = 1;
  PrecisionMode precision = PrecisionMode::Double;
  std::string output_dir = ".";
  unsigned threads = 0;
  std::size_t max_candidates = 20'000'000;
  int grid_size = 1000;
  bool inject_failure = false;  // twz-checks self-test: perturb one formula
  HalfPantsParams gap_params;   // input of the gap command

  /// Throws InvalidConfig on out-of-range fields.
  void validate() const;
};

/// The config as embedded in reports. Thread count and output directory do
/// not affect results and are left out.
nlohmann::json to_json(const RunConfig& config);
/// Overlays the keys present in j (either the config itself or a report
/// with a "config" member) onto base.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});

SurfaceGroup build_surface(const RunConfig& config);

struct CommandResult {
  int exit_code = 0;                          // 0 pass, 1 assertion failure, 2 budget/config error
  std::map<std::string, std::string> files;  // file name -> contents
  std::string summary;                        // human-readable, for stdout
};

CommandResult cmd_verify_identity(const RunConfig& config);
CommandResult cmd_markov(const RunConfig& config);
CommandResult cmd_twz_checks(const RunConfig& config);
CommandResult cmd_sparsity(const RunConfig& config);
CommandResult cmd_gap(const RunConfig& config);
CommandResult cmd_enumerate(const RunConfig& config);

const std::vector<std::string>& command_names();
/// Dispatches by name. Budget and config errors become exit code 2 with a
/// checkpoint.json holding the resolved config, so the run can be resumed
/// with adjusted limits.
CommandResult run_command(const std::string& name, const RunConfig& config);

/// Key-sorted JSON text with a trailing newline.
std::string dump_report(const nlohmann::json& j);

}  // namespace mcshane
