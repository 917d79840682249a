#include "doctest.h"

#include "franson/errors.hpp"
#include "franson/report.hpp"
#include "franson/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace franson;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool mentions(const ValidationError& e, std::string_view needle) {
  for (const auto& p : e.problems())
    if (p.find(needle) != std::string::npos) return true;
  return false;
}

fs::path scratch(std::string_view name) {
  auto p = fs::temp_directory_path() / "franson_tests" / std::string(name);
  fs::remove_all(p);
  return p;
}

} // namespace

TEST_CASE("empty scenario is a validation error") {
  try {
    parse_scenario("");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(mentions(e, "empty"));
  }
  CHECK_THROWS_AS(parse_scenario("# only a comment\n\n"), ValidationError);
}

TEST_CASE("every problem is reported at once") {
  const char* text = "[scenario]\nengine = monte-carlo\nmode = quantum-pair\nbogus = 1\n"
                     "[pulse]\nrepetition_rate_mhz = -4\n[nowhere]\nx = 1\n";
  try {
    parse_scenario(text);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.problems().size() >= 4);
    CHECK(mentions(e, "bogus"));
    CHECK(mentions(e, "nowhere"));
    CHECK(mentions(e, "repetition_rate_mhz"));
    CHECK(mentions(e, "seed"));
  }
}

TEST_CASE("engine and mode are required; seed only for Monte-Carlo") {
  CHECK_THROWS_AS(parse_scenario("[scenario]\nmode = quantum-pair\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("[scenario]\nengine = analytic\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("[scenario]\nengine = warp\nmode = quantum-pair\n"), ValidationError);
  const auto s = parse_scenario("[scenario]\nengine = analytic\nmode = classical-beam\n");
  CHECK(s.engine == Engine::analytic);
  CHECK(s.mode == Mode::classical_beam);
  CHECK_FALSE(s.seed.has_value());
  const auto m = parse_scenario("[scenario]\nengine = monte-carlo\nmode = quantum-pair\nseed = 18446744073709551615\n");
  CHECK(*m.seed == 18446744073709551615ULL);
}

TEST_CASE("values, comments, and scientific integers") {
  const auto s = parse_scenario("; header\n[scenario]\nengine = analytic # trailing\nmode = quantum-pair\n"
                                "[scan]\npulses_per_point = 1e5\nstep_nm = 12\n"
                                "[interferometer]\ntwo_photon_law = squared\n");
  CHECK(s.scan.pulses_per_point == 100000);
  CHECK(s.scan.step_nm == 12.0);
  CHECK(s.pipeline.interferometer.two_photon_law == ModeOverlapLaw::squared);
  CHECK_THROWS_AS(parse_scenario("[scenario]\nengine = analytic\nmode = quantum-pair\n[scan]\npulses_per_point = 1.5\n"),
                  ValidationError);
}

TEST_CASE("config text round trip") {
  for (const auto& p : presets()) {
    const auto a = parse_scenario(p.config_text);
    const auto text = to_config_text(a);
    const auto b = parse_scenario(text);
    CHECK(to_config_text(b) == text);
    CHECK(b.pipeline.pulse.edge_swing_beta == a.pipeline.pulse.edge_swing_beta);
    CHECK(b.pipeline.detector.quantum_efficiency == a.pipeline.detector.quantum_efficiency);
    CHECK(b.seed == a.seed);
  }
}

TEST_CASE("presets") {
  for (const char* name : {"fig2", "fig3a", "fig3b", "fig4", "table1", "calibration"}) {
    const auto& p = find_preset(name);
    const auto s = parse_scenario(p.config_text);
    CHECK(validate(s).empty());
    CHECK(s.pipeline.pulse.edge_swing_beta == kCalibratedBeta);
    CHECK(s.pipeline.interferometer.mode_overlap_visibility == kCalibratedModeOverlap);
  }
  CHECK_THROWS_AS(find_preset("fig9"), ValidationError);
}

TEST_CASE("table rows and probability formatting") {
  CHECK(format_probability(event_probability(2000.0, 4.0)) == "5.0e-04");
  CHECK(format_probability(event_probability(4800.0, 76.0)) == "6.3e-05");
  bool found = false;
  for (const auto& r : table1_rows())
    if (r.event_rate_per_s == 4800.0 && r.repetition_mhz == 76.0) {
      found = true;
      CHECK(std::abs(event_probability(r.event_rate_per_s, r.repetition_mhz) - r.published_probability) <= 0.1e-5 + 1e-12);
    }
  CHECK(found);
}

TEST_CASE("runs are byte-identical for any job count") {
  auto s = parse_scenario(find_preset("fig3a").config_text);
  s.scan.stop_nm = s.scan.start_nm + 300.0;
  s.scan.pulses_per_point = 5000;
  const auto d1 = scratch("jobs1"), d4 = scratch("jobs4");
  s.output_dir = d1.string();
  const auto r1 = run_scenario(s, Command::scan_fringe, 1);
  s.output_dir = d4.string();
  const auto r4 = run_scenario(s, Command::scan_fringe, 4);
  REQUIRE(r1.files.size() == r4.files.size());
  CHECK(fs::exists(d1 / "fringe.csv"));
  CHECK(fs::exists(d1 / "summary.txt"));
  for (const auto& f : r1.files) CHECK(slurp(f) == slurp(d4 / f.filename()));

  auto h = parse_scenario(find_preset("fig2").config_text);
  h.pipeline.pulse.pulse_count = 40000;
  h.dump_tags = true;
  h.output_dir = scratch("h1").string();
  const auto a = run_scenario(h, Command::simulate_histogram, 1);
  const auto h3 = scratch("h3");
  h.output_dir = h3.string();
  run_scenario(h, Command::simulate_histogram, 3);
  for (const auto& f : a.files) CHECK(slurp(f) == slurp(h3 / f.filename()));
}

TEST_CASE("summary carries the calibration values") {
  auto s = parse_scenario(find_preset("fig4").config_text);
  s.output_dir = scratch("fig4").string();
  const auto r = run_scenario(s, Command::pulse_profile, 1);
  const auto text = slurp(fs::path(s.output_dir) / "summary.txt");
  CHECK(text.find("beta") != std::string::npos);
  CHECK(text.find("mode_overlap") != std::string::npos);
  CHECK(text.find("quantum_efficiency") != std::string::npos);
  CHECK(fs::exists(fs::path(s.output_dir) / "profile_A.csv"));
  CHECK(fs::exists(fs::path(s.output_dir) / "profile_B.csv"));
}

TEST_CASE("invalid scenarios produce no output") {
  auto s = parse_scenario(find_preset("fig3a").config_text);
  s.seed.reset();
  s.output_dir = scratch("invalid").string();
  CHECK_THROWS_AS(run_scenario(s, Command::scan_fringe, 1), ValidationError);
  CHECK_FALSE(fs::exists(s.output_dir));
}

TEST_CASE("unwritable output is an I/O error") {
  auto s = parse_scenario(find_preset("table1").config_text);
  const auto blocker = scratch("blocker");
  fs::create_directories(blocker.parent_path());
  std::ofstream(blocker) << "file, not a directory";
  s.output_dir = (blocker / "sub").string();
  CHECK_THROWS_AS(run_scenario(s, Command::report_table1, 1), IoError);
  fs::remove(blocker);
}
