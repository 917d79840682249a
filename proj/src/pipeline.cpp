#include "franson/pipeline.hpp"

#include "franson/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <thread>

namespace franson {

std::vector<std::string> validate(const PipelineConfig& cfg) {
  std::vector<std::string> errs;
  auto append = [&](std::vector<std::string> more) {
    errs.insert(errs.end(), more.begin(), more.end());
  };
  append(validate(cfg.pulse));
  append(validate(cfg.spdc));
  append(validate(cfg.upconversion));
  append(validate(cfg.interferometer));
  append(validate(cfg.detector));
  if (!(cfg.analysis.coincidence_half_window_ps > 0.0))
    errs.emplace_back("analysis.coincidence_half_window_ps must be > 0");
  if (!(cfg.analysis.histogram_span_ps > 0.0))
    errs.emplace_back("analysis.histogram_span_ps must be > 0");
  if (cfg.analysis.accidental_offsets < 1) errs.emplace_back("analysis.accidental_offsets must be >= 1");
  if (!(cfg.classical_photons_per_pulse >= 0.0))
    errs.emplace_back("classical.photons_per_pulse must be >= 0");
  return errs;
}

namespace {

template <class Fn>
void parallel_for(std::int64_t n, int jobs, Fn&& fn) {
  jobs = std::max(1, static_cast<int>(std::min<std::int64_t>(jobs, n)));
  if (jobs <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (std::int64_t i = w; i < n; i += jobs) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

void sense_all(const std::vector<Arrival>& arrivals, const ApdConfig& apd, RandomStream& rng,
               std::vector<TimeTag>& out) {
  for (const auto& a : arrivals)
    if (auto tag = sense(a, apd, rng)) out.push_back(*tag);
}

// Raw clicks for pulses [first, first + count), concatenated in pulse order.
std::vector<TimeTag> simulate_clicks(const PipelineConfig& cfg, std::int64_t first,
                                     std::int64_t count, std::uint64_t seed, int jobs) {
  const std::int64_t chunks = std::max<std::int64_t>(1, std::min<std::int64_t>(jobs, count));
  std::vector<std::vector<TimeTag>> parts(static_cast<std::size_t>(chunks));
  parallel_for(chunks, jobs, [&](std::int64_t c) {
    const std::int64_t lo = first + count * c / chunks;
    const std::int64_t hi = first + count * (c + 1) / chunks;
    auto& out = parts[static_cast<std::size_t>(c)];
    for (std::int64_t k = lo; k < hi; ++k) simulate_pulse_clicks(k, cfg, seed, out);
  });
  std::vector<TimeTag> all;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  all.reserve(total);
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
  return RandomStream(seed, StreamTag::scan_point, index).fork();
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

} // namespace

void simulate_pulse_clicks(std::int64_t k, const PipelineConfig& cfg, std::uint64_t seed,
                           std::vector<TimeTag>& out) {
  RandomStream rng(seed, StreamTag::pulse, static_cast<std::uint64_t>(k));
  const auto& ifm = cfg.interferometer;
  for (const auto& pair : sample_pairs(k, cfg.spdc, cfg.pulse, rng)) {
    const auto conv = upconvert_pair(pair, cfg.upconversion, cfg.pulse, rng);
    if (conv.result == ConversionResult::both)
      sense_all(route_pair(conv.pair, ifm, cfg.pulse, rng), cfg.detector, rng, out);
    else if (conv.result == ConversionResult::one)
      sense_all(route_single(*conv.survivor, ifm, rng), cfg.detector, rng, out);
  }
  for (const auto& photon : sample_noise_photons(cfg.upconversion, k, cfg.pulse, rng))
    sense_all(route_single(photon, ifm, rng), cfg.detector, rng, out);
  const double t0 = cfg.pulse.pulse_start_ps(k);
  const auto darks = generate_dark_counts(cfg.detector, t0, t0 + cfg.pulse.period_ps(), rng);
  out.insert(out.end(), darks.begin(), darks.end());
}

TagStreams simulate_tag_streams(const PipelineConfig& cfg, std::int64_t first_pulse,
                                std::int64_t count, std::uint64_t seed, int jobs) {
  return assemble_streams(simulate_clicks(cfg, first_pulse, count, seed, jobs),
                          cfg.detector.dead_time_ns);
}

HistogramRun run_histogram(const PipelineConfig& cfg, std::int64_t pulses, int phase_points,
                           std::uint64_t seed, int jobs) {
  phase_points = std::max(1, phase_points);
  const double period6 = fringe_period(kFundamentalWavelength, PhaseModel::pair_sum()).nm;
  std::vector<TimeTag> clicks;
  std::int64_t first = 0;
  for (int j = 0; j < phase_points; ++j) {
    const std::int64_t n = pulses * (j + 1) / phase_points - pulses * j / phase_points;
    PipelineConfig block = cfg;
    block.interferometer.delta_L_nm += period6 * j / phase_points;
    auto part = simulate_clicks(block, first, n, seed, jobs);
    clicks.insert(clicks.end(), part.begin(), part.end());
    first += n;
  }

  HistogramRun run;
  run.pulses = pulses;
  run.tags = assemble_streams(std::move(clicks), cfg.detector.dead_time_ns);
  const auto shift = period_shift_ps(cfg.pulse.period_ns());
  run.signal = correlate(run.tags, cfg.analysis.histogram_span_ps);
  run.accidental = correlate(run.tags, cfg.analysis.histogram_span_ps, kTiaBinWidth_ps, shift);
  run.window_coincidences = coincidences_in_window(run.tags, cfg.analysis.coincidence_half_window_ps);
  run.window_accidentals =
      estimate_accidentals(run.tags, cfg.pulse.period_ns(), cfg.analysis.coincidence_half_window_ps);
  return run;
}

std::vector<double> ScanSettings::points() const {
  std::vector<double> pts;
  if (!(step_nm > 0.0)) return pts;
  const auto n = static_cast<std::size_t>(std::floor((stop_nm - start_nm) / step_nm + 1e-9)) + 1;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(start_nm + step_nm * static_cast<double>(i));
  return pts;
}

FringeScan scan_fringe(const PipelineConfig& cfg, const ScanSettings& scan, Engine engine,
                       Mode mode, std::uint64_t seed, int jobs) {
  if (!(scan.step_nm > 0.0)) throw ContractError("scan_fringe: step must be positive");
  const auto xs = scan.points();
  FringeScan out;
  out.step_nm = scan.step_nm;
  out.samples.resize(xs.size());
  const auto pulses = static_cast<double>(scan.pulses_per_point);
  const auto grid = emission_grid(cfg.pulse);
  const double hw = cfg.analysis.coincidence_half_window_ps;

  parallel_for(static_cast<std::int64_t>(xs.size()), jobs, [&](std::int64_t i) {
    const auto idx = static_cast<std::size_t>(i);
    PipelineConfig point = cfg;
    point.interferometer.delta_L_nm = xs[idx];
    FringeSample& s = out.samples[idx];
    s.delta_L_nm = xs[idx];

    if (mode == Mode::classical_beam) {
      const double mean = pulses * analytic_classical_point(point);
      if (engine == Engine::analytic) {
        s.coincidences = mean;
      } else {
        RandomStream rng(seed, StreamTag::classical, idx);
        s.coincidences = mean > 0.0 ? static_cast<double>(std::poisson_distribution<std::int64_t>(mean)(rng)) : 0.0;
      }
      return;
    }

    if (engine == Engine::analytic) {
      const auto a = analytic_quantum_point(point, grid);
      s.coincidences = pulses * a.coincidences;
      s.accidentals = pulses * a.accidentals;
      return;
    }
    const auto tags = simulate_tag_streams(point, 0, scan.pulses_per_point, point_seed(seed, idx), 1);
    s.coincidences = static_cast<double>(coincidences_in_window(tags, hw));
    s.accidentals = cfg.analysis.accidental_offsets > 1
                        ? estimate_accidentals_averaged(tags, cfg.pulse.period_ns(), hw,
                                                        cfg.analysis.accidental_offsets)
                        : static_cast<double>(estimate_accidentals(tags, cfg.pulse.period_ns(), hw));
  });
  return out;
}

EmissionGrid emission_grid(const PulseTrainConfig& train, double step) {
  EmissionGrid g;
  const double a = train.support_begin_ps();
  const double b = train.support_end_ps();
  const auto n = static_cast<std::size_t>(std::ceil((b - a) / step)) + 1;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::min(b, a + step * static_cast<double>(i));
    const double e = pump_envelope(t, train);
    g.t_ps.push_back(t);
    g.weight.push_back(e * e);
    sum += e * e;
  }
  for (auto& w : g.weight) w /= sum;
  return g;
}

double mean_central_probability(const PipelineConfig& cfg, const EmissionGrid& grid) {
  double p = 0.0;
  for (std::size_t i = 0; i < grid.t_ps.size(); ++i)
    p += grid.weight[i] * pair_outcome_distribution(grid.t_ps[i], cfg.interferometer, cfg.pulse).p_central;
  return p;
}

double window_fraction(double centre, double hw, const ApdConfig& apd) {
  const double sigma = std::sqrt(2.0) * apd.jitter_sigma_ps();
  if (sigma == 0.0) return std::abs(centre) < hw ? 1.0 : 0.0;
  return normal_cdf((hw - centre) / sigma) - normal_cdf((-hw - centre) / sigma);
}

namespace {

// Probability that two independent emission times fall within +-hw.
double emission_overlap(const EmissionGrid& g, double hw) {
  if (g.t_ps.size() < 2) return 0.0;
  const double step = g.t_ps[1] - g.t_ps[0];
  const auto reach = static_cast<std::ptrdiff_t>(std::ceil(hw / step));
  const auto n = static_cast<std::ptrdiff_t>(g.t_ps.size());
  double o = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - reach); j <= std::min(n - 1, i + reach); ++j) {
      if (std::abs(g.t_ps[static_cast<std::size_t>(i)] - g.t_ps[static_cast<std::size_t>(j)]) < hw)
        o += g.weight[static_cast<std::size_t>(i)] * g.weight[static_cast<std::size_t>(j)];
    }
  }
  return o;
}

} // namespace

AnalyticPoint analytic_quantum_point(const PipelineConfig& cfg, const EmissionGrid& grid) {
  const double mu = mean_pairs_per_pulse(cfg.spdc, cfg.pulse);
  const double eta = cfg.upconversion.internal_efficiency;
  const double qe = cfg.detector.quantum_efficiency;
  const double q = output_port_probability(cfg.interferometer);
  const double hw = cfg.analysis.coincidence_half_window_ps;
  const double r = cfg.interferometer.splitting_ratio;
  const double per_path = (r * (1.0 - r)) * (r * (1.0 - r));
  const double dtau = time_delay(Length::nanometers(cfg.interferometer.delta_L_nm)).ps;

  const double pc = mean_central_probability(cfg, grid);
  const double signal = mu * eta * eta * qe * qe * 0.5 *
                        (pc * window_fraction(0.0, hw, cfg.detector) +
                         per_path * (window_fraction(dtau, hw, cfg.detector) +
                                     window_fraction(-dtau, hw, cfg.detector)));

  const double dark_per_ps = cfg.detector.dark_rate_per_s * 1e-12;
  const double photon_singles =
      0.5 * qe * q * (2.0 * mu * eta + cfg.upconversion.noise_rate_per_pulse);
  const double overlap = emission_overlap(grid, hw);
  const double accidental = photon_singles * photon_singles * overlap +
                            2.0 * photon_singles * dark_per_ps * 2.0 * hw +
                            dark_per_ps * dark_per_ps * 2.0 * hw * cfg.pulse.period_ps();

  AnalyticPoint p;
  p.accidentals = accidental;
  p.coincidences = signal + accidental;
  p.singles_per_detector = photon_singles + dark_per_ps * cfg.pulse.period_ps();
  return p;
}

double analytic_classical_point(const PipelineConfig& cfg) {
  const Length dl = Length::nanometers(cfg.interferometer.delta_L_nm);
  const double a = cfg.pulse.support_begin_ps();
  const double b = cfg.pulse.support_end_ps();
  InterferometerConfig flat = cfg.interferometer;
  flat.mode_overlap_visibility = 0.0;
  const double norm = classical_pulse_energy(dl, cfg.pulse, flat, a, b);
  return cfg.classical_photons_per_pulse * classical_pulse_energy(dl, cfg.pulse, cfg.interferometer, a, b) / norm;
}

double analytic_coincidence_rate(const PipelineConfig& cfg) {
  const double mu = mean_pairs_per_pulse(cfg.spdc, cfg.pulse);
  const double eta = cfg.upconversion.internal_efficiency;
  const double qe = cfg.detector.quantum_efficiency;
  const double hw = cfg.analysis.coincidence_half_window_ps;
  const double r = cfg.interferometer.splitting_ratio;
  const double per_path = (r * (1.0 - r)) * (r * (1.0 - r));
  const double dtau = time_delay(Length::nanometers(cfg.interferometer.delta_L_nm)).ps;
  const double per_pulse = mu * eta * eta * qe * qe * 0.5 *
                           (2.0 * per_path * window_fraction(0.0, hw, cfg.detector) +
                            per_path * (window_fraction(dtau, hw, cfg.detector) +
                                        window_fraction(-dtau, hw, cfg.detector)));
  return per_pulse * cfg.pulse.repetition_rate_mhz * 1e6;
}

ProfilePair pulse_profiles(const PipelineConfig& cfg, const ProfileSettings& ps) {
  const auto n = static_cast<std::size_t>(std::llround((ps.t_end_ns - ps.t_begin_ns) / ps.step_ns)) + 1;
  std::vector<double> t_ns(n);
  for (std::size_t i = 0; i < n; ++i) t_ns[i] = ps.t_begin_ns + ps.step_ns * static_cast<double>(i);

  const double dl0 = cfg.interferometer.delta_L_nm;
  const double dtau = time_delay(Length::nanometers(dl0)).ps;
  std::complex<double> z{0.0, 0.0};
  for (const double t : t_ns) {
    const double e = pump_envelope(t * 1e3, cfg.pulse);
    z += e * e * std::polar(1.0, 3.0 * dtau * pump_phase_rate(t * 1e3, cfg.pulse));
  }
  // Bright fringe where 3-phase(dL) + arg z = 0 (mod 2 pi), at or above dl0.
  const double period3 = fringe_period(kFundamentalWavelength, PhaseModel::upconverted_beam()).nm;
  const double fringes0 = std::fmod(dl0 / period3, 1.0);
  double target = -std::arg(z) / kTwoPi - fringes0;
  target -= std::floor(target);

  ProfilePair out;
  out.delta_L_bright_nm = dl0 + target * period3;
  out.delta_L_dark_nm = out.delta_L_bright_nm + 0.5 * period3;
  out.bright.t_ns = t_ns;
  out.dark.t_ns = t_ns;
  for (const double t : t_ns) {
    out.bright.intensity.push_back(
        classical_intensity(Length::nanometers(out.delta_L_bright_nm), t * 1e3, cfg.pulse, cfg.interferometer));
    out.dark.intensity.push_back(
        classical_intensity(Length::nanometers(out.delta_L_dark_nm), t * 1e3, cfg.pulse, cfg.interferometer));
  }
  out.visibility_full = visibility_from_profiles(out.bright, out.dark, ps.t_begin_ns, ps.t_end_ns);
  out.visibility_window =
      visibility_from_profiles(out.bright, out.dark, ps.window_begin_ns, ps.window_end_ns);
  return out;
}

VisibilityModel visibility_model(const PipelineConfig& cfg, const ProfileSettings& ps) {
  VisibilityModel m;
  const auto prof = pulse_profiles(cfg, ps);
  m.classical_full = prof.visibility_full;
  m.classical_window = prof.visibility_window;

  const auto grid = emission_grid(cfg.pulse);
  const double dtau = time_delay(Length::nanometers(cfg.interferometer.delta_L_nm)).ps;
  std::complex<double> z3{0.0, 0.0}, z6{0.0, 0.0};
  for (std::size_t i = 0; i < grid.t_ps.size(); ++i) {
    const double rate = pump_phase_rate(grid.t_ps[i], cfg.pulse);
    z3 += grid.weight[i] * std::polar(1.0, 3.0 * dtau * rate);
    z6 += grid.weight[i] * std::polar(1.0, 6.0 * dtau * rate);
  }
  m.classical_fringe = cfg.interferometer.mode_overlap_visibility * std::abs(z3);

  // Net central-window counts: side-peak leakage adds a flat offset.
  const double hw = cfg.analysis.coincidence_half_window_ps;
  const double fc = window_fraction(0.0, hw, cfg.detector);
  const double fs = 0.5 * (window_fraction(dtau, hw, cfg.detector) + window_fraction(-dtau, hw, cfg.detector));
  m.two_photon = two_photon_visibility(cfg.interferometer) * std::abs(z6) * fc / (fc + fs);
  return m;
}

CalibrationResult calibrate_visibility(const PipelineConfig& cfg, const ProfileSettings& ps,
                                       const CalibrationTargets& targets) {
  // With V_mode = 1 the profile visibilities scale linearly with V_mode, so
  // beta is fixed by the ratio full / window alone.
  auto unit = cfg;
  unit.interferometer.mode_overlap_visibility = 1.0;
  auto ratio_gap = [&](double beta) {
    unit.pulse.edge_swing_beta = beta;
    const auto p = pulse_profiles(unit, ps);
    return p.visibility_full / p.visibility_window - targets.classical_full / targets.classical_window;
  };

  CalibrationResult result;
  double prev_b = 0.0;
  double prev_f = ratio_gap(0.0);
  for (double b = targets.beta_grid; b <= targets.beta_max + 1e-12; b += targets.beta_grid) {
    const double f = ratio_gap(b);
    if (prev_f == 0.0) {
      result.candidate_betas.push_back(prev_b);
    } else if ((prev_f < 0.0) != (f < 0.0)) {
      double lo = prev_b, hi = b, flo = prev_f;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = ratio_gap(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      result.candidate_betas.push_back(0.5 * (lo + hi));
    }
    prev_b = b;
    prev_f = f;
  }
  if (result.candidate_betas.empty())
    throw FitError("calibrate_visibility: no edge phase swing reproduces the full-pulse target");

  double best_gap = std::numeric_limits<double>::infinity();
  for (const double beta : result.candidate_betas) {
    auto trial = cfg;
    trial.pulse.edge_swing_beta = beta;
    trial.interferometer.mode_overlap_visibility = 1.0;
    const double window = pulse_profiles(trial, ps).visibility_window;
    trial.interferometer.mode_overlap_visibility = std::min(1.0, targets.classical_window / window);
    const auto model = visibility_model(trial, ps);
    const double gap = std::abs(model.two_photon - targets.two_photon);
    if (gap < best_gap) {
      best_gap = gap;
      result.beta = beta;
      result.mode_overlap_visibility = trial.interferometer.mode_overlap_visibility;
      result.achieved = model;
    }
  }
  return result;
}

double calibrate_quantum_efficiency(const PipelineConfig& cfg, double target_rate) {
  auto unit = cfg;
  unit.detector.quantum_efficiency = 1.0;
  const double full = analytic_coincidence_rate(unit);
  if (!(full > 0.0)) throw FitError("calibrate_quantum_efficiency: zero coincidence rate at qe = 1");
  return std::min(1.0, std::sqrt(target_rate / full));
}

} // namespace franson
