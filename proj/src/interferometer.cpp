#include "franson/interferometer.hpp"

#include "franson/errors.hpp"

#include <cmath>

namespace franson {

std::vector<std::string> validate(const InterferometerConfig& cfg) {
  std::vector<std::string> errs;
  if (!std::isfinite(cfg.delta_L_nm)) errs.emplace_back("interferometer.delta_L_nm must be finite");
  if (!(cfg.mode_overlap_visibility >= 0.0 && cfg.mode_overlap_visibility <= 1.0))
    errs.emplace_back("interferometer.mode_overlap_visibility must be in [0, 1]");
  if (!(cfg.splitting_ratio > 0.0 && cfg.splitting_ratio < 1.0))
    errs.emplace_back("interferometer.splitting_ratio must be in (0, 1)");
  return errs;
}

double output_port_probability(const InterferometerConfig& ifm) {
  const double r = ifm.splitting_ratio;
  return 2.0 * r * (1.0 - r);
}

double two_photon_visibility(const InterferometerConfig& ifm) {
  const double v = ifm.mode_overlap_visibility;
  return ifm.two_photon_law == ModeOverlapLaw::squared ? v * v : v;
}

double classical_intensity(Length delta_L, double t, const PulseTrainConfig& train,
                           const InterferometerConfig& ifm) {
  const double e = pump_envelope(t, train);
  if (e == 0.0) return 0.0;
  const double dtau = time_delay(delta_L).ps;
  const double phase = fringe_phase(delta_L, kFundamentalWavelength, PhaseModel::upconverted_beam()) +
                       3.0 * dtau * pump_phase_rate(t, train);
  return e * e * (1.0 + ifm.mode_overlap_visibility * std::cos(phase));
}

double classical_pulse_energy(Length delta_L, const PulseTrainConfig& train,
                              const InterferometerConfig& ifm, double t0, double t1,
                              double step) {
  if (!(t1 > t0)) return 0.0;
  const auto n = static_cast<long>(std::ceil((t1 - t0) / step));
  const double h = (t1 - t0) / static_cast<double>(n);
  double sum = 0.5 * (classical_intensity(delta_L, t0, train, ifm) +
                      classical_intensity(delta_L, t1, train, ifm));
  for (long i = 1; i < n; ++i)
    sum += classical_intensity(delta_L, t0 + h * static_cast<double>(i), train, ifm);
  return sum * h;
}

PairOutcomeDistribution pair_outcome_distribution(double t, const InterferometerConfig& ifm,
                                                  const PulseTrainConfig& train) {
  // Each photon reaches the output port through either arm with amplitude
  // magnitude sqrt(r(1-r)) (one reflection, one transmission).
  const double r = ifm.splitting_ratio;
  const double arm = r * (1.0 - r);
  const double per_path = arm * arm; // |amplitude|^2 of one two-photon path

  const Length dl = Length::nanometers(ifm.delta_L_nm);
  const double dtau = time_delay(dl).ps;
  const double phase = fringe_phase(dl, kFundamentalWavelength, PhaseModel::pair_sum()) +
                       6.0 * dtau * pump_phase_rate(t, train);

  PairOutcomeDistribution d;
  d.p_central = 2.0 * per_path * (1.0 + two_photon_visibility(ifm) * std::cos(phase));
  d.p_side_plus = per_path;
  d.p_side_minus = per_path;
  const double both = d.p_central + d.p_side_plus + d.p_side_minus;
  d.p_undetected = 1.0 - both;
  // Each photon exits with probability 2r(1-r) regardless of dL.
  d.p_single_exit = 2.0 * (output_port_probability(ifm) - both);
  return d;
}

PairOutcomeDistribution pair_outcome_distribution(const PairRecord& pair,
                                                  const InterferometerConfig& ifm,
                                                  const PulseTrainConfig& train) {
  const Length expected = upconverted_wavelength();
  if (std::abs(pair.signal.wavelength.nm - expected.nm) > 1e-6 ||
      std::abs(pair.idler.wavelength.nm - expected.nm) > 1e-6)
    throw ConfigError("pair_outcome_distribution: pair is not at the up-converted wavelength");
  return pair_outcome_distribution(pair.emission_time_ps - train.pulse_start_ps(pair.pulse_index),
                                   ifm, train);
}

RouteOutcome sample_route_outcome(const PairOutcomeDistribution& d, RandomStream& rng) {
  double u = rng.uniform();
  if ((u -= d.p_central) < 0.0) return RouteOutcome::central;
  if ((u -= d.p_side_plus) < 0.0) return RouteOutcome::side_plus;
  if ((u -= d.p_side_minus) < 0.0) return RouteOutcome::side_minus;
  if ((u -= 0.5 * d.p_single_exit) < 0.0) return RouteOutcome::single_signal;
  if ((u -= 0.5 * d.p_single_exit) < 0.0) return RouteOutcome::single_idler;
  return RouteOutcome::none;
}

std::vector<Arrival> route_pair(const PairRecord& pair, const InterferometerConfig& ifm,
                                const PulseTrainConfig& train, RandomStream& rng) {
  const auto dist = pair_outcome_distribution(pair, ifm, train);
  const double t = pair.emission_time_ps;
  const double dtau = time_delay(Length::nanometers(ifm.delta_L_nm)).ps;
  auto random_arm = [&] { return rng.uniform() < 0.5 ? 0.0 : dtau; };

  switch (sample_route_outcome(dist, rng)) {
  case RouteOutcome::central: return {{pair.signal, t}, {pair.idler, t}};
  case RouteOutcome::side_plus: return {{pair.signal, t}, {pair.idler, t + dtau}};
  case RouteOutcome::side_minus: return {{pair.signal, t + dtau}, {pair.idler, t}};
  case RouteOutcome::single_signal: return {{pair.signal, t + random_arm()}};
  case RouteOutcome::single_idler: return {{pair.idler, t + random_arm()}};
  case RouteOutcome::none: break;
  }
  return {};
}

std::vector<Arrival> route_single(const PhotonRecord& photon, const InterferometerConfig& ifm,
                                  RandomStream& rng) {
  if (rng.uniform() >= output_port_probability(ifm)) return {};
  const double dtau = time_delay(Length::nanometers(ifm.delta_L_nm)).ps;
  const double offset = rng.uniform() < 0.5 ? 0.0 : dtau;
  return {{photon, photon.emission_time_ps + offset}};
}

bool single_photon_coherence_ok(const SpdcConfig& spdc, const InterferometerConfig& ifm) {
  const double dtau = std::abs(time_delay(Length::nanometers(ifm.delta_L_nm)).ps);
  return spdc.single_photon_coherence_ps * 10.0 <= dtau;
}

} // namespace franson
