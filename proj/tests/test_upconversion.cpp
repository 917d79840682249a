#include "doctest.h"
#include "oracles.hpp"

#include "franson/errors.hpp"
#include "franson/pipeline.hpp"
#include "franson/upconversion.hpp"

#include <cmath>

using namespace franson;

namespace {

PairRecord pair_at(double t_in_pulse, const PulseTrainConfig& train, std::int64_t pulse = 0) {
  PairRecord p;
  p.pulse_index = pulse;
  p.emission_time_ps = train.pulse_start_ps(pulse) + t_in_pulse;
  p.signal = PhotonRecord{p.emission_time_ps, kFundamentalWavelength, 0.0, PhotonOrigin::signal};
  p.idler = PhotonRecord{p.emission_time_ps, kFundamentalWavelength, 0.0, PhotonOrigin::idler};
  p.sum_phase = 2.0 * pump_phase(t_in_pulse, train);
  return p;
}

} // namespace

TEST_CASE("conversion outcomes follow the binomial law") {
  const UpconversionConfig cfg;
  PulseTrainConfig train;
  const double eta = cfg.internal_efficiency;
  const int n = 400000;
  double both = 0, one = 0, none = 0;
  RandomStream rng(2024);
  for (int i = 0; i < n; ++i) {
    switch (upconvert_pair(pair_at(5000.0, train), cfg, train, rng).result) {
    case ConversionResult::both: ++both; break;
    case ConversionResult::one: ++one; break;
    case ConversionResult::none: ++none; break;
    }
  }
  const double p_both = eta * eta;
  CHECK(p_both == doctest::Approx(0.9216));
  CHECK(std::abs(both / n - p_both) < 3.0 * std::sqrt(p_both * (1 - p_both) / n));
  const double p_one = 2.0 * eta * (1.0 - eta);
  CHECK(std::abs(one / n - p_one) < 3.0 * std::sqrt(p_one * (1 - p_one) / n));
  const double p_none = (1.0 - eta) * (1.0 - eta);
  CHECK(std::abs(none / n - p_none) < 3.0 * std::sqrt(p_none * (1 - p_none) / n));
}

TEST_CASE("efficiency extremes") {
  PulseTrainConfig train;
  UpconversionConfig cfg;
  RandomStream rng(1);
  cfg.internal_efficiency = 1.0;
  for (int i = 0; i < 100; ++i) CHECK(upconvert_pair(pair_at(4000.0, train), cfg, train, rng).result == ConversionResult::both);
  cfg.internal_efficiency = 0.0;
  for (int i = 0; i < 100; ++i) CHECK(upconvert_pair(pair_at(4000.0, train), cfg, train, rng).result == ConversionResult::none);
}

TEST_CASE("converted pair carries six times the pump phase") {
  PulseTrainConfig train;
  train.edge_swing_beta = 1.7;
  UpconversionConfig cfg;
  cfg.internal_efficiency = 1.0;
  RandomStream rng(9);
  // steepest rising edge: pump phase equals +beta
  const double t_edge = train.center_ns * 1e3 - 0.5 * train.pulse_duration_ns * 1e3;
  const auto out = upconvert_pair(pair_at(t_edge, train, 3), cfg, train, rng);
  REQUIRE(out.result == ConversionResult::both);
  CHECK(out.pair.sum_phase == doctest::Approx(6.0 * train.edge_swing_beta));
  CHECK(out.pair.signal.wavelength.nm == doctest::Approx(1550.0 / 3.0).epsilon(1e-12));
  CHECK(out.pair.idler.wavelength.nm == doctest::Approx(516.6667).epsilon(1e-6));
  CHECK(out.pair.emission_time_ps == doctest::Approx(train.pulse_start_ps(3) + t_edge));

  const auto flat = upconvert_pair(pair_at(5000.0, train), cfg, train, rng);
  CHECK(flat.pair.sum_phase == 0.0);
}

TEST_CASE("one-photon survivors are up-converted and keep their origin") {
  PulseTrainConfig train;
  UpconversionConfig cfg;
  cfg.internal_efficiency = 0.5;
  RandomStream rng(4);
  int seen = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto out = upconvert_pair(pair_at(5000.0, train), cfg, train, rng);
    if (out.result != ConversionResult::one) continue;
    ++seen;
    REQUIRE(out.survivor.has_value());
    CHECK(out.survivor->wavelength.nm == doctest::Approx(1550.0 / 3.0));
    CHECK((out.survivor->origin == PhotonOrigin::signal || out.survivor->origin == PhotonOrigin::idler));
  }
  CHECK(seen > 800);
}

TEST_CASE("pairs at the wrong wavelength are rejected") {
  PulseTrainConfig train;
  UpconversionConfig cfg;
  RandomStream rng(1);
  auto p = pair_at(5000.0, train);
  p.signal.wavelength = Length::nanometers(1310.0);
  CHECK_THROWS_AS(upconvert_pair(p, cfg, train, rng), ConfigError);
}

TEST_CASE("noise photons") {
  PulseTrainConfig train;
  UpconversionConfig cfg;
  RandomStream rng(8);

  cfg.noise_rate_per_pulse = 0.0;
  CHECK(sample_noise_photons(cfg, 0, train, rng).empty());

  cfg.noise_rate_per_pulse = 0.01;
  const int pulses = 1'000'000;
  double count = 0.0;
  for (int i = 0; i < pulses; ++i) {
    for (const auto& ph : sample_noise_photons(cfg, i, train, rng)) {
      count += 1.0;
      CHECK(ph.origin == PhotonOrigin::noise);
      CHECK(ph.wavelength.nm == doctest::Approx(1550.0 / 3.0));
      const double t = ph.emission_time_ps - train.pulse_start_ps(i);
      CHECK(pump_envelope(t, train) > 0.0);
    }
  }
  CHECK(std::abs(count / pulses - 0.01) < 3.0 * std::sqrt(0.01 / pulses));
}

TEST_CASE("noise-only stream shows no fringe") {
  PipelineConfig cfg;
  cfg.spdc.pump_power_mw = 0.0;
  cfg.upconversion.noise_rate_per_pulse = 0.5;
  cfg.detector.quantum_efficiency = 1.0;
  cfg.detector.dark_rate_per_s = 0.0;
  cfg.interferometer.mode_overlap_visibility = 1.0;

  FringeScan scan;
  scan.step_nm = 6.0;
  for (int k = 0; k < 100; ++k) {
    cfg.interferometer.delta_L_nm = 36e6 + 6.0 * k;
    const auto tags = simulate_tag_streams(cfg, 0, 20000, 555 + static_cast<std::uint64_t>(k));
    scan.samples.push_back({cfg.interferometer.delta_L_nm, static_cast<double>(tags.size()), 0.0});
  }
  try {
    CHECK(fit_fringe(scan).visibility < 0.05);
  } catch (const FitError&) {
    CHECK(true);
  }
}
