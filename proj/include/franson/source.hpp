#pragma once

#include "franson/photon.hpp"
#include "franson/random.hpp"

#include <cstdint>
#include <vector>

namespace franson {

enum class EnvelopeShape { raised_cosine_flattop, gaussian };

/// Intensity-modulated pump pulse train.
///
/// Times inside a pulse ("t_in_pulse") run from 0 to the repetition period;
/// the envelope is centred at `center_ns`. For the flat-top shape the
/// amplitude rises and falls with raised-cosine edges of width
/// `edge_fraction * pulse_duration_ns`, and the half-amplitude points are
/// `pulse_duration_ns` apart.
struct PulseTrainConfig {
  double repetition_rate_mhz = 4.0;
  double pulse_duration_ns = 7.5;
  EnvelopeShape envelope_shape = EnvelopeShape::raised_cosine_flattop;
  double edge_fraction = 0.2;
  double center_ns = 5.0;
  double edge_swing_beta = 0.0; ///< peak transient phase at the edges (rad)
  std::int64_t pulse_count = 1'000'000;

  double period_ps() const { return 1e6 / repetition_rate_mhz; }
  double period_ns() const { return 1e3 / repetition_rate_mhz; }
  double pulse_start_ps(std::int64_t pulse_index) const {
    return static_cast<double>(pulse_index) * period_ps();
  }
  /// Earliest and latest in-pulse time with non-zero envelope (gaussian: +-4 FWHM, clipped).
  double support_begin_ps() const;
  double support_end_ps() const;
};

/// Collects every violated invariant, empty when valid.
std::vector<std::string> validate(const PulseTrainConfig& cfg);

/// SPDC source parameters.
struct SpdcConfig {
  double pump_power_mw = 9.0;
  double pair_yield_per_mw_s = 4.0e4; ///< generated pairs per second per mW of pump
  double signal_wavelength_nm = 1550.0;
  double single_photon_coherence_ps = 1.0;
  // Crystal poling periods; informational only.
  double spdc_poling_period_um = 18.4;
  double upconversion_poling_period_um = 6.6;
};

std::vector<std::string> validate(const SpdcConfig& cfg);

/// Unit-peak pump amplitude envelope.
double pump_envelope(double t_in_pulse_ps, const PulseTrainConfig& cfg);

/// Time derivative of the envelope (per ps).
double pump_envelope_slope(double t_in_pulse_ps, const PulseTrainConfig& cfg);

/// Largest |de/dt| over the pulse.
double pump_envelope_max_slope(const PulseTrainConfig& cfg);

/// Transient phase of the modulator switching edges:
/// beta * e'(t) / max|e'|, zero on the flat top and outside the pulse.
double pump_phase(double t_in_pulse_ps, const PulseTrainConfig& cfg);

/// Central-difference derivative of pump_phase (rad/ps).
double pump_phase_rate(double t_in_pulse_ps, const PulseTrainConfig& cfg,
                       double step_ps = 1.0);

/// Mean generated pairs per pulse, yield * power / repetition rate.
double mean_pairs_per_pulse(const SpdcConfig& cfg, const PulseTrainConfig& train);

/// Emission time within a pulse drawn with density proportional to envelope^2.
double sample_emission_time(const PulseTrainConfig& train, RandomStream& rng);

/// Poisson number of pairs for one pulse, emission times ~ envelope^2, both
/// photons at the signal wavelength (degenerate), sum phase = 2 * pump phase.
std::vector<PairRecord> sample_pairs(std::int64_t pulse_index, const SpdcConfig& spdc,
                                     const PulseTrainConfig& train, RandomStream& rng);

} // namespace franson
