#pragma once

#include "franson/source.hpp"

#include <vector>

namespace franson {

/// How the residual mode-overlap visibility enters the two-photon fringe.
enum class ModeOverlapLaw {
  linear,  ///< V_eff = V_mode
  squared, ///< V_eff = V_mode^2 (both interfering amplitudes degraded)
};

/// Folded (Michelson) Franson interferometer.
struct InterferometerConfig {
  double delta_L_nm = 36.0e6;
  double mode_overlap_visibility = 1.0;
  double splitting_ratio = 0.5;
  ModeOverlapLaw two_photon_law = ModeOverlapLaw::linear;
};

std::vector<std::string> validate(const InterferometerConfig& cfg);

/// Outcome probabilities for one up-converted pair entering the interferometer.
///
/// p_undetected covers every case where fewer than two photons reach the
/// output port; p_single_exit is the part of it where exactly one does
/// (either photon), kept so that singles can be simulated faithfully.
struct PairOutcomeDistribution {
  double p_central = 0.0;
  double p_side_plus = 0.0;
  double p_side_minus = 0.0;
  double p_undetected = 0.0;
  double p_single_exit = 0.0;
};

/// A photon leaving the output port.
struct Arrival {
  PhotonRecord photon;
  double time_ps = 0.0;
};

/// Probability that one photon leaves through the output port, 2 r (1 - r).
double output_port_probability(const InterferometerConfig& ifm);

/// Visibility applied to the SS/LL two-photon interference term.
double two_photon_visibility(const InterferometerConfig& ifm);

/// Classical up-converted intensity after the interferometer at one instant,
/// e(t)^2 [1 + V cos(phase_3(dL) + 3 dtau_L phi_p'(t))]; peak value 2.
double classical_intensity(Length delta_L, double t_in_pulse_ps, const PulseTrainConfig& train,
                           const InterferometerConfig& ifm);

/// Time-integrated classical intensity over [t0, t1] (ps), trapezoid rule.
double classical_pulse_energy(Length delta_L, const PulseTrainConfig& train,
                              const InterferometerConfig& ifm, double t0_ps, double t1_ps,
                              double step_ps = 2.0);

/// Outcome distribution for a pair emitted at t_in_pulse.
PairOutcomeDistribution pair_outcome_distribution(double t_in_pulse_ps,
                                                  const InterferometerConfig& ifm,
                                                  const PulseTrainConfig& train);

/// Same, for an up-converted pair. Throws ConfigError if the pair is not at
/// the sum-frequency wavelength.
PairOutcomeDistribution pair_outcome_distribution(const PairRecord& pair,
                                                  const InterferometerConfig& ifm,
                                                  const PulseTrainConfig& train);

enum class RouteOutcome { central, side_plus, side_minus, single_signal, single_idler, none };

/// Draws an outcome from the distribution.
RouteOutcome sample_route_outcome(const PairOutcomeDistribution& dist, RandomStream& rng);

/// Photons at the output port for one pair. Central: both at the emission
/// time. Side events: one photon delayed by dtau_L relative to the other.
/// Single exits leave through either arm with equal probability.
std::vector<Arrival> route_pair(const PairRecord& pair, const InterferometerConfig& ifm,
                                const PulseTrainConfig& train, RandomStream& rng);

/// Lone photon (noise, broken pair): exits with output_port_probability via a
/// random arm, or is lost.
std::vector<Arrival> route_single(const PhotonRecord& photon, const InterferometerConfig& ifm,
                                  RandomStream& rng);

/// False when the single-photon coherence time is not much shorter than
/// dtau_L, in which case side amplitudes would not be time-distinguishable.
bool single_photon_coherence_ok(const SpdcConfig& spdc, const InterferometerConfig& ifm);

} // namespace franson
