#pragma once

#include "franson/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace franson {

/// A complete run description: engine, mode, every module's configuration
/// and the output location.
///
/// On disk it is a flat sectioned key=value file:
///
///     # comment
///     [scenario]
///     engine = monte-carlo
///     mode = quantum-pair
///     seed = 42
///     [pulse]
///     repetition_rate_mhz = 4
///
/// Sections: scenario, pulse, spdc, upconversion, interferometer, detector,
/// analysis, scan, histogram, profile, classical. Unknown sections or keys
/// are errors.
struct Scenario {
  Engine engine = Engine::monte_carlo;
  Mode mode = Mode::quantum_pair;
  std::optional<std::uint64_t> seed;
  std::string output_dir = "out";

  PipelineConfig pipeline;
  ScanSettings scan;
  int histogram_phase_points = 1;
  bool dump_tags = false;
  ProfileSettings profile;
  double target_coincidence_rate = 2000.0; ///< used by `calibrate` for qe
};

/// Every violated invariant of the scenario, empty when valid.
std::vector<std::string> validate(const Scenario& s);

/// Parses and validates. Throws ValidationError listing every problem
/// (syntax, unknown keys, bad values, violated invariants).
Scenario parse_scenario(std::string_view text);

/// Reads a file and parses it; I/O failures raise IoError.
Scenario load_scenario(const std::filesystem::path& path);

/// Serialises a scenario back to the key=value format; parse_scenario of the
/// result reproduces the scenario.
std::string to_config_text(const Scenario& s);

std::string_view to_string(Engine e);
std::string_view to_string(Mode m);

/// Built-in scenarios reproducing the published figures and table.
enum class Command {
  simulate_histogram,
  scan_fringe,
  classical_fringe,
  pulse_profile,
  report_table1,
  calibrate,
};

std::string_view to_string(Command c);

struct Preset {
  std::string name;
  Command command;
  std::string description;
  std::string config_text;
};

const std::vector<Preset>& presets();

/// Throws ValidationError for unknown names.
const Preset& find_preset(std::string_view name);

/// Calibrated operating point shared by the presets.
inline constexpr double kCalibratedEdgeFraction = 0.15;
inline constexpr double kCalibratedBeta = 4.5504;
inline constexpr double kCalibratedModeOverlap = 0.8209;
inline constexpr double kCalibratedQuantumEfficiency = 0.3153;
/// Per-detector jitter FWHM such that the coincidence (t2 - t1) jitter is 50 ps FWHM.
inline constexpr double kCalibratedJitterFwhm_ps = 35.3553;

} // namespace franson
