#pragma once

#include "franson/analysis.hpp"
#include "franson/upconversion.hpp"

#include <cstdint>
#include <vector>

namespace franson {

enum class Engine { analytic, monte_carlo };
enum class Mode { quantum_pair, classical_beam };

/// Coincidence-analysis settings shared by every run.
struct AnalysisConfig {
  double coincidence_half_window_ps = 46.0;
  double histogram_span_ps = 400.0;
  int accidental_offsets = 1; ///< 1 = single +1-period shift; n > 1 averages +-1..+-n
};

/// Everything needed to simulate the setup end to end.
struct PipelineConfig {
  PulseTrainConfig pulse;
  SpdcConfig spdc;
  UpconversionConfig upconversion;
  InterferometerConfig interferometer;
  ApdConfig detector;
  AnalysisConfig analysis;
  double classical_photons_per_pulse = 0.05; ///< fringe-averaged detected photons, classical mode
};

std::vector<std::string> validate(const PipelineConfig& cfg);

/// Raw detector clicks (before dead time) for one pulse: SPDC pairs,
/// up-conversion, interferometer routing, detector fan-out/efficiency/jitter,
/// noise photons and dark counts over the pulse period. Draws come from the
/// pulse's own random stream, so the result depends only on (seed, index).
void simulate_pulse_clicks(std::int64_t pulse_index, const PipelineConfig& cfg,
                           std::uint64_t seed, std::vector<TimeTag>& out);

/// Monte-Carlo tag streams for pulses [first, first + count), split across
/// `jobs` threads. Output is identical for any job count.
TagStreams simulate_tag_streams(const PipelineConfig& cfg, std::int64_t first_pulse,
                                std::int64_t count, std::uint64_t seed, int jobs = 1);

struct HistogramRun {
  CorrelationHistogram signal;     ///< t2 - t1
  CorrelationHistogram accidental; ///< detector 2 shifted by one pump period
  TagStreams tags;
  std::int64_t pulses = 0;
  std::uint64_t window_coincidences = 0;
  std::uint64_t window_accidentals = 0;
};

/// Correlation histogram at the configured dL. With phase_points > 1 the
/// pulses are split into equal blocks whose dL is stepped across one
/// two-photon fringe period, averaging the central peak over fringe phase.
HistogramRun run_histogram(const PipelineConfig& cfg, std::int64_t pulses, int phase_points,
                           std::uint64_t seed, int jobs = 1);

struct ScanSettings {
  double start_nm = 36.0e6;
  double stop_nm = 36.0e6 + 1600.0;
  double step_nm = 6.0;
  std::int64_t pulses_per_point = 100'000;

  std::vector<double> points() const;
};

/// One fringe scan. Quantum mode counts central-window coincidences and
/// one-period-shifted accidentals per point; classical mode counts
/// photons of the up-converted laser pulse (no accidentals). The analytic
/// engine returns expectation values, the Monte-Carlo engine sampled counts.
/// Points are independent and may run concurrently.
FringeScan scan_fringe(const PipelineConfig& cfg, const ScanSettings& scan, Engine engine,
                       Mode mode, std::uint64_t seed, int jobs = 1);

// --- closed-form engine -------------------------------------------------

/// Normalised pair emission density on a uniform grid over the pulse support.
struct EmissionGrid {
  std::vector<double> t_ps;
  std::vector<double> weight; ///< sums to 1
};

EmissionGrid emission_grid(const PulseTrainConfig& train, double step_ps = 2.0);

/// Central-outcome probability averaged over the emission density.
double mean_central_probability(const PipelineConfig& cfg, const EmissionGrid& grid);

/// Fraction of a Gaussian-jittered peak at `centre_ps` that falls in |dtau| < half_window.
double window_fraction(double centre_ps, double half_window_ps, const ApdConfig& apd);

struct AnalyticPoint {
  double coincidences = 0.0; ///< expected raw central-window coincidences per pulse
  double accidentals = 0.0;  ///< expected shifted-window coincidences per pulse
  double singles_per_detector = 0.0;
};

/// Per-pulse expectations at the configured dL (dead time neglected).
AnalyticPoint analytic_quantum_point(const PipelineConfig& cfg, const EmissionGrid& grid);

/// Expected classical photon count per pulse at the configured dL.
double analytic_classical_point(const PipelineConfig& cfg);

/// Fringe-phase-averaged central-window coincidence rate (counts/s) from pairs.
double analytic_coincidence_rate(const PipelineConfig& cfg);

// --- calibration --------------------------------------------------------

/// Visibilities derived from the time-resolved classical profiles and the
/// emission-weighted two-photon interference term.
struct VisibilityModel {
  double classical_full = 0.0;   ///< pulse-area visibility, whole pulse
  double classical_window = 0.0; ///< pulse-area visibility, edge-free window
  double classical_fringe = 0.0; ///< fringe visibility of the time-integrated signal
  double two_photon = 0.0;       ///< fringe visibility of central coincidences
};

struct ProfileSettings {
  double t_begin_ns = 0.0;
  double t_end_ns = 10.0;
  double step_ns = 0.01;
  double window_begin_ns = 2.5;
  double window_end_ns = 7.5;
};

struct ProfilePair {
  double delta_L_bright_nm = 0.0; ///< "A": integrated-intensity maximum
  double delta_L_dark_nm = 0.0;   ///< "B": half a classical period further
  Profile bright;
  Profile dark;
  double visibility_full = 0.0;
  double visibility_window = 0.0;
};

/// Classical pulse profiles at the bright and dark fringe positions nearest
/// (at or above) the configured dL.
ProfilePair pulse_profiles(const PipelineConfig& cfg, const ProfileSettings& ps);

VisibilityModel visibility_model(const PipelineConfig& cfg, const ProfileSettings& ps);

struct CalibrationTargets {
  double classical_full = 0.69;
  double classical_window = 0.82;
  double two_photon = 0.70;
  double beta_max = 20.0;
  double beta_grid = 0.02;
};

struct CalibrationResult {
  double beta = 0.0;
  double mode_overlap_visibility = 0.0;
  VisibilityModel achieved;
  std::vector<double> candidate_betas; ///< every root of the classical condition
};

/// Solves for the edge phase swing beta and mode-overlap visibility V_mode:
/// V_mode fixes the edge-free window visibility, beta the full-pulse
/// visibility. The classical condition has several roots in beta; the one
/// whose predicted two-photon visibility is closest to the target is taken.
CalibrationResult calibrate_visibility(const PipelineConfig& cfg, const ProfileSettings& ps,
                                       const CalibrationTargets& targets = {});

/// APD efficiency that gives `target_rate` central-window coincidences per
/// second (fringe-averaged); clamped to 1.
double calibrate_quantum_efficiency(const PipelineConfig& cfg, double target_rate_per_s);

} // namespace franson
