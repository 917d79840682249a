#include "franson/source.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace franson {

namespace {

constexpr double kGaussA = 2.772588722239781; // 4 ln 2

struct FlatTop {
  double rise_begin, edge, flat_end;
};

FlatTop flat_top(const PulseTrainConfig& cfg) {
  const double fwhm = cfg.pulse_duration_ns * 1e3;
  const double edge = cfg.edge_fraction * fwhm;
  const double begin = cfg.center_ns * 1e3 - 0.5 * (fwhm + edge);
  return {begin, edge, begin + fwhm};
}

} // namespace

double PulseTrainConfig::support_begin_ps() const {
  if (envelope_shape == EnvelopeShape::gaussian)
    return std::max(0.0, center_ns * 1e3 - 2.0 * pulse_duration_ns * 1e3);
  return std::max(0.0, flat_top(*this).rise_begin);
}

double PulseTrainConfig::support_end_ps() const {
  if (envelope_shape == EnvelopeShape::gaussian)
    return std::min(period_ps(), center_ns * 1e3 + 2.0 * pulse_duration_ns * 1e3);
  const auto ft = flat_top(*this);
  return std::min(period_ps(), ft.flat_end + ft.edge);
}

std::vector<std::string> validate(const PulseTrainConfig& cfg) {
  std::vector<std::string> errs;
  if (!(cfg.repetition_rate_mhz > 0.0)) errs.emplace_back("pulse.repetition_rate_mhz must be > 0");
  if (!(cfg.pulse_duration_ns > 0.0)) errs.emplace_back("pulse.pulse_duration_ns must be > 0");
  if (cfg.repetition_rate_mhz > 0.0 && cfg.pulse_duration_ns > 0.0 &&
      !(cfg.period_ns() > cfg.pulse_duration_ns))
    errs.emplace_back("pulse: repetition period must exceed the pulse duration");
  if (!(cfg.edge_swing_beta >= 0.0)) errs.emplace_back("pulse.edge_swing_beta must be >= 0");
  if (!(cfg.edge_fraction > 0.0 && cfg.edge_fraction <= 1.0))
    errs.emplace_back("pulse.edge_fraction must be in (0, 1]");
  if (cfg.pulse_count < 0) errs.emplace_back("pulse.pulse_count must be >= 0");
  if (errs.empty() && cfg.envelope_shape == EnvelopeShape::raised_cosine_flattop) {
    const auto ft = flat_top(cfg);
    if (ft.rise_begin < 0.0 || ft.flat_end + ft.edge > cfg.period_ps())
      errs.emplace_back("pulse: envelope does not fit inside one repetition period (check center_ns)");
  }
  return errs;
}

std::vector<std::string> validate(const SpdcConfig& cfg) {
  std::vector<std::string> errs;
  if (!(cfg.pump_power_mw >= 0.0)) errs.emplace_back("spdc.pump_power_mw must be >= 0");
  if (!(cfg.pair_yield_per_mw_s > 0.0)) errs.emplace_back("spdc.pair_yield_per_mw_s must be > 0");
  if (!(cfg.signal_wavelength_nm > 0.0)) errs.emplace_back("spdc.signal_wavelength_nm must be > 0");
  if (!(cfg.single_photon_coherence_ps > 0.0))
    errs.emplace_back("spdc.single_photon_coherence_ps must be > 0");
  return errs;
}

double pump_envelope(double t, const PulseTrainConfig& cfg) {
  if (cfg.envelope_shape == EnvelopeShape::gaussian) {
    const double x = (t - cfg.center_ns * 1e3) / (cfg.pulse_duration_ns * 1e3);
    return std::exp(-kGaussA * x * x);
  }
  const auto ft = flat_top(cfg);
  const double s = t - ft.rise_begin;
  if (s <= 0.0) return 0.0;
  if (s < ft.edge) return 0.5 * (1.0 - std::cos(kPi * s / ft.edge));
  const double u = t - ft.flat_end;
  if (u <= 0.0) return 1.0;
  if (u < ft.edge) return 0.5 * (1.0 + std::cos(kPi * u / ft.edge));
  return 0.0;
}

double pump_envelope_slope(double t, const PulseTrainConfig& cfg) {
  if (cfg.envelope_shape == EnvelopeShape::gaussian) {
    const double fwhm = cfg.pulse_duration_ns * 1e3;
    const double dx = t - cfg.center_ns * 1e3;
    return -2.0 * kGaussA * dx / (fwhm * fwhm) * pump_envelope(t, cfg);
  }
  const auto ft = flat_top(cfg);
  const double s = t - ft.rise_begin;
  if (s <= 0.0) return 0.0;
  if (s < ft.edge) return 0.5 * kPi / ft.edge * std::sin(kPi * s / ft.edge);
  const double u = t - ft.flat_end;
  if (u <= 0.0) return 0.0;
  if (u < ft.edge) return -0.5 * kPi / ft.edge * std::sin(kPi * u / ft.edge);
  return 0.0;
}

double pump_envelope_max_slope(const PulseTrainConfig& cfg) {
  if (cfg.envelope_shape == EnvelopeShape::gaussian) {
    const double fwhm = cfg.pulse_duration_ns * 1e3;
    const double a = kGaussA / (fwhm * fwhm);
    return std::sqrt(2.0 * a) * std::exp(-0.5);
  }
  return 0.5 * kPi / (cfg.edge_fraction * cfg.pulse_duration_ns * 1e3);
}

double pump_phase(double t, const PulseTrainConfig& cfg) {
  if (cfg.edge_swing_beta == 0.0) return 0.0;
  return cfg.edge_swing_beta * pump_envelope_slope(t, cfg) / pump_envelope_max_slope(cfg);
}

double pump_phase_rate(double t, const PulseTrainConfig& cfg, double step_ps) {
  return (pump_phase(t + step_ps, cfg) - pump_phase(t - step_ps, cfg)) / (2.0 * step_ps);
}

double mean_pairs_per_pulse(const SpdcConfig& cfg, const PulseTrainConfig& train) {
  return cfg.pair_yield_per_mw_s * cfg.pump_power_mw / (train.repetition_rate_mhz * 1e6);
}

double sample_emission_time(const PulseTrainConfig& train, RandomStream& rng) {
  const double a = train.support_begin_ps();
  const double b = train.support_end_ps();
  for (;;) {
    const double t = a + (b - a) * rng.uniform();
    const double e = pump_envelope(t, train);
    if (e > 0.0 && rng.uniform() < e * e) return t;
  }
}

std::vector<PairRecord> sample_pairs(std::int64_t pulse_index, const SpdcConfig& spdc,
                                     const PulseTrainConfig& train, RandomStream& rng) {
  std::vector<PairRecord> pairs;
  const double mu = mean_pairs_per_pulse(spdc, train);
  if (mu <= 0.0) return pairs;
  const int n = std::poisson_distribution<int>(mu)(rng);
  pairs.reserve(static_cast<std::size_t>(n));
  const double t0 = train.pulse_start_ps(pulse_index);
  const Length lambda = Length::nanometers(spdc.signal_wavelength_nm);
  for (int i = 0; i < n; ++i) {
    const double t = sample_emission_time(train, rng);
    PairRecord p;
    p.emission_time_ps = t0 + t;
    p.pulse_index = pulse_index;
    p.signal = PhotonRecord{p.emission_time_ps, lambda, 0.0, PhotonOrigin::signal};
    p.idler = PhotonRecord{p.emission_time_ps, lambda, 0.0, PhotonOrigin::idler};
    p.sum_phase = 2.0 * pump_phase(t, train);
    p.sum_coherence_time_ns = train.pulse_duration_ns;
    pairs.push_back(p);
  }
  return pairs;
}

std::string_view to_string(PhotonOrigin origin) {
  switch (origin) {
  case PhotonOrigin::signal: return "signal";
  case PhotonOrigin::idler: return "idler";
  case PhotonOrigin::noise: return "noise";
  case PhotonOrigin::dark: return "dark";
  }
  return "unknown";
}

} // namespace franson
