#include "doctest.h"
#include "oracles.hpp"

#include "franson/pipeline.hpp"
#include "franson/scenario.hpp"

#include <cmath>

using namespace franson;

namespace {

PipelineConfig calibrated() { return parse_scenario(find_preset("fig3a").config_text).pipeline; }

} // namespace

TEST_CASE("tag streams do not depend on the job count") {
  const auto cfg = calibrated();
  const auto a = simulate_tag_streams(cfg, 0, 30000, 99, 1);
  const auto b = simulate_tag_streams(cfg, 0, 30000, 99, 3);
  CHECK(a.det1 == b.det1);
  CHECK(a.det2 == b.det2);
  CHECK(a.size() > 0);
  const auto c = simulate_tag_streams(cfg, 0, 30000, 100, 1);
  CHECK(a.det1 != c.det1);
}

TEST_CASE("analytic scan of an ideal interferometer is an exact sinusoid") {
  PipelineConfig cfg;
  cfg.upconversion.noise_rate_per_pulse = 0.0;
  cfg.detector.dark_rate_per_s = 0.0;
  ScanSettings sc;
  const auto q = scan_fringe(cfg, sc, Engine::analytic, Mode::quantum_pair, 0, 1);
  const auto fq = fit_fringe(q);
  CHECK(fq.period_nm == doctest::Approx(1550.0 / 6.0).epsilon(1e-4));
  CHECK(fq.residual_rms < 1e-5 * fq.offset);

  const auto c = scan_fringe(cfg, sc, Engine::analytic, Mode::classical_beam, 0, 1);
  const auto fc = fit_fringe(c);
  CHECK(fc.period_nm == doctest::Approx(1550.0 / 3.0).epsilon(1e-4));
  CHECK(fc.visibility == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("Monte-Carlo scan scatters around the analytic curve") {
  const auto cfg = calibrated();
  ScanSettings sc;
  sc.stop_nm = sc.start_nm + 174.0;
  const auto mc = scan_fringe(cfg, sc, Engine::monte_carlo, Mode::quantum_pair, 4242, 2);
  const auto an = scan_fringe(cfg, sc, Engine::analytic, Mode::quantum_pair, 0, 1);
  REQUIRE(mc.samples.size() == an.samples.size());
  int outliers = 0;
  double chi = 0.0;
  for (std::size_t i = 0; i < mc.samples.size(); ++i) {
    const double e = an.samples[i].coincidences;
    const double d = mc.samples[i].coincidences - e;
    chi += d * d / e;
    outliers += std::abs(d) > 3.0 * std::sqrt(e);
  }
  CHECK(outliers <= 1);
  CHECK(chi / static_cast<double>(mc.samples.size()) < 1.8);
}

TEST_CASE("MC singles do not follow the fringe") {
  auto cfg = calibrated();
  std::vector<double> counts;
  for (int k = 0; k < 12; ++k) {
    cfg.interferometer.delta_L_nm = 36e6 + 1550.0 / 6.0 * k / 12.0;
    counts.push_back(static_cast<double>(simulate_tag_streams(cfg, 0, 100000, 7000 + static_cast<std::uint64_t>(k)).size()));
  }
  double mean = 0.0;
  for (double c : counts) mean += c;
  mean /= counts.size();
  for (double c : counts) CHECK(std::abs(c - mean) < 3.0 * std::sqrt(mean));
}

TEST_CASE("calibration reproduces the preset operating point") {
  const auto cfg = calibrated();
  const auto cal = calibrate_visibility(cfg, ProfileSettings{});
  CHECK(cal.beta == doctest::Approx(kCalibratedBeta).epsilon(1e-3));
  CHECK(cal.mode_overlap_visibility == doctest::Approx(kCalibratedModeOverlap).epsilon(1e-3));
  CHECK(cal.achieved.classical_full == doctest::Approx(0.69).epsilon(2e-3));
  CHECK(cal.achieved.classical_window == doctest::Approx(0.82).epsilon(2e-3));
  CHECK(cal.candidate_betas.size() >= 1);
  CHECK(calibrate_quantum_efficiency(cfg, 2000.0) == doctest::Approx(kCalibratedQuantumEfficiency).epsilon(2e-3));
  CHECK(analytic_coincidence_rate(cfg) == doctest::Approx(2000.0).epsilon(0.01));
}

TEST_CASE("visibility model at the calibrated point") {
  const auto m = visibility_model(calibrated(), ProfileSettings{});
  CHECK(std::abs(m.classical_full - 0.69) < 0.02);
  CHECK(std::abs(m.classical_window - 0.82) < 0.02);
  CHECK(std::abs(m.classical_fringe - 0.70) < 0.02);
  CHECK(std::abs(m.two_photon - 0.70) < 0.05);
}

TEST_CASE("without edge phase the profiles and fringes share V_mode") {
  auto cfg = calibrated();
  cfg.pulse.edge_swing_beta = 0.0;
  const auto m = visibility_model(cfg, ProfileSettings{});
  const double v = cfg.interferometer.mode_overlap_visibility;
  CHECK(m.classical_full == doctest::Approx(v).epsilon(1e-3));
  CHECK(m.classical_window == doctest::Approx(v).epsilon(1e-3));
  CHECK(m.two_photon == doctest::Approx(v).epsilon(1e-3));
}

TEST_CASE("emission grid is normalised") {
  const auto g = emission_grid(PulseTrainConfig{});
  double s = 0.0;
  for (double w : g.weight) s += w;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("histogram run has peaks at 0 and +-dtau") {
  auto cfg = calibrated();
  cfg.detector.quantum_efficiency = 1.0;
  const auto run = run_histogram(cfg, 300000, 6, 17, 2);
  const auto peaks = find_histogram_peaks(run.signal, oracle::delay_ps(36e6));
  REQUIRE(peaks.size() == 3);
  CHECK(std::abs(peaks[0] + 120.08) < 12.5);
  CHECK(std::abs(peaks[1]) < 12.5);
  CHECK(std::abs(peaks[2] - 120.08) < 12.5);
  CHECK(run.window_coincidences == coincidences_in_window(run.tags, 46.0));
}
