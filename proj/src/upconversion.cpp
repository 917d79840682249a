#include "franson/upconversion.hpp"

#include "franson/errors.hpp"

#include <cmath>
#include <random>

namespace franson {

namespace {

constexpr double kWavelengthTolerance_nm = 1e-6;

bool at_wavelength(const PhotonRecord& p, Length target) {
  return std::abs(p.wavelength.nm - target.nm) <= kWavelengthTolerance_nm;
}

} // namespace

std::vector<std::string> validate(const UpconversionConfig& cfg) {
  std::vector<std::string> errs;
  if (!(cfg.internal_efficiency >= 0.0 && cfg.internal_efficiency <= 1.0))
    errs.emplace_back("upconversion.internal_efficiency must be in [0, 1]");
  if (!(cfg.noise_rate_per_pulse >= 0.0))
    errs.emplace_back("upconversion.noise_rate_per_pulse must be >= 0");
  if (!(cfg.pump_wavelength_nm > 0.0))
    errs.emplace_back("upconversion.pump_wavelength_nm must be > 0");
  return errs;
}

ConversionOutcome upconvert_pair(const PairRecord& pair, const UpconversionConfig& cfg,
                                 const PulseTrainConfig& train, RandomStream& rng) {
  if (!at_wavelength(pair.signal, kFundamentalWavelength) ||
      !at_wavelength(pair.idler, kFundamentalWavelength))
    throw ConfigError("upconvert_pair: photons are not at the 1550 nm design wavelength");

  const Length out_lambda =
      sum_frequency_wavelength(kFundamentalWavelength, Length::nanometers(cfg.pump_wavelength_nm));
  const double t_in_pulse = pair.emission_time_ps - train.pulse_start_ps(pair.pulse_index);
  const double sh_phase = 2.0 * pump_phase(t_in_pulse, train);

  const bool signal_ok = rng.uniform() < cfg.internal_efficiency;
  const bool idler_ok = rng.uniform() < cfg.internal_efficiency;

  auto convert = [&](PhotonRecord p) {
    p.wavelength = out_lambda;
    p.phase += sh_phase;
    return p;
  };

  ConversionOutcome out;
  if (signal_ok && idler_ok) {
    out.result = ConversionResult::both;
    out.pair = pair;
    out.pair.signal = convert(pair.signal);
    out.pair.idler = convert(pair.idler);
    out.pair.sum_phase = pair.sum_phase + 2.0 * sh_phase;
  } else if (signal_ok || idler_ok) {
    out.result = ConversionResult::one;
    out.survivor = convert(signal_ok ? pair.signal : pair.idler);
  }
  return out;
}

std::vector<PhotonRecord> sample_noise_photons(const UpconversionConfig& cfg,
                                               std::int64_t pulse_index,
                                               const PulseTrainConfig& train,
                                               RandomStream& rng) {
  std::vector<PhotonRecord> photons;
  if (cfg.noise_rate_per_pulse <= 0.0) return photons;
  const int n = std::poisson_distribution<int>(cfg.noise_rate_per_pulse)(rng);
  const Length lambda =
      sum_frequency_wavelength(kFundamentalWavelength, Length::nanometers(cfg.pump_wavelength_nm));
  const double t0 = train.pulse_start_ps(pulse_index);
  photons.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = sample_emission_time(train, rng);
    photons.push_back(PhotonRecord{t0 + t, lambda, kTwoPi * rng.uniform(), PhotonOrigin::noise});
  }
  return photons;
}

} // namespace franson
