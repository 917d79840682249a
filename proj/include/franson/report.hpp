#pragma once

#include "franson/scenario.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace franson {

/// One row of the multi-photon interference comparison table.
struct Table1Row {
  std::string experiment;
  int interfering_photons = 2;
  double fringe_period_nm = 0.0;
  double event_rate_per_s = 0.0;
  double repetition_mhz = 0.0;          ///< 0 for cw sources
  double published_probability = 0.0;   ///< 0 when not listed
};

/// Published rows, including the up-converted-pair experiment itself.
const std::vector<Table1Row>& table1_rows();

/// Formats a probability with two significant digits, e.g. "6.3e-05".
std::string format_probability(double p);

/// Ordered key/value summary written to summary.txt.
using Summary = std::vector<std::pair<std::string, std::string>>;

struct RunResult {
  std::vector<std::filesystem::path> files;
  Summary summary;
};

/// Executes one command for a validated scenario and writes its CSV and
/// report files into scenario.output_dir. `jobs` only changes speed.
/// Throws ValidationError for invalid scenarios, IoError for unwritable output.
RunResult run_scenario(const Scenario& scenario, Command command, int jobs = 1);

} // namespace franson
