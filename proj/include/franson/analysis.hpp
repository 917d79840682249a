#pragma once

#include "franson/detection.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace franson {

/// Local maxima of a correlation histogram that rise above a robust noise
/// floor, refined to sub-bin precision. The floor is
/// median + k * max(1.4826 * MAD, sqrt(max(median, 1))), so a Poisson-flat
/// histogram yields no peaks even when its MAD is zero. Maxima closer than
/// half the expected separation to a stronger one are dropped.
std::vector<double> find_histogram_peaks(const CorrelationHistogram& hist,
                                         double expected_separation_ps, double k = 5.0);

/// Counts in bins whose centre satisfies |dtau| < half_window.
std::uint64_t coincidences_in_window(const CorrelationHistogram& hist, double half_window_ps);

/// Exact number of (detector-1, detector-2) click pairs with
/// |t2 - shift - t1| < half_window.
std::uint64_t coincidences_in_window(const TagStreams& tags, double half_window_ps,
                                     std::int64_t shift_ps = 0);

/// Uncorrelated-background estimate: coincidences with detector 2 shifted by
/// exactly one pump period.
std::uint64_t estimate_accidentals(const TagStreams& tags, double pulse_period_ns,
                                   double half_window_ps);

/// Average of the shifted-coincidence estimator over offsets +-1..+-n periods.
double estimate_accidentals_averaged(const TagStreams& tags, double pulse_period_ns,
                                     double half_window_ps, int offsets);

/// raw - accidental, negative values kept.
double subtract_accidentals(double raw, double accidental);

/// Integer period shift used by the accidental estimator.
std::int64_t period_shift_ps(double pulse_period_ns);

struct FringeSample {
  double delta_L_nm = 0.0;
  double coincidences = 0.0;
  double accidentals = 0.0;

  double net() const { return subtract_accidentals(coincidences, accidentals); }
};

struct FringeScan {
  std::vector<FringeSample> samples;
  double step_nm = 0.0;
};

/// Result of fitting a + b cos(2 pi x / P + phase) to a scan. x is measured
/// from the first sample of the scan, so `phase_rad` refers to that origin.
struct FringeFit {
  double period_nm = 0.0;
  double visibility = 0.0;
  double phase_rad = 0.0;
  double offset = 0.0;
  double amplitude = 0.0;
  double residual_rms = 0.0;
};

struct FringeFitOptions {
  double min_period_nm = 1.0;
  double max_period_nm = 2000.0;
  double grid_step_nm = 1.0;
};

/// Least-squares sinusoid fit of the net counts. The period is initialised
/// from a discrete least-squares periodogram (candidates below the Nyquist
/// period 2*step are skipped) and refined by golden-section search; offset
/// and quadrature amplitudes are solved linearly at every trial period.
/// Throws FitError on constant or too-short scans.
FringeFit fit_fringe(const FringeScan& scan, const FringeFitOptions& opts = {});

/// Linear least squares for fixed period; returns residual sum of squares.
double fringe_rss(const FringeScan& scan, double period_nm, FringeFit* out = nullptr);

/// Intensity sampled on a time grid (ns).
struct Profile {
  std::vector<double> t_ns;
  std::vector<double> intensity;
};

/// (int A - int B) / (int A + int B) over [t0, t1], trapezoidal rule with
/// linear interpolation at the window edges. Throws ContractError when the
/// grids differ or t0 >= t1.
double visibility_from_profiles(const Profile& a, const Profile& b, double t0_ns, double t1_ns);

/// Trapezoidal integral of a profile over [t0, t1].
double integrate_profile(const Profile& p, double t0_ns, double t1_ns);

/// Event probability per pulse, rate / repetition rate.
double event_probability(double rate_per_s, double repetition_mhz);

void write_fringe_csv(std::ostream& out, const FringeScan& scan);
void write_fit_report(std::ostream& out, const FringeFit& fit);
void write_profile_csv(std::ostream& out, const Profile& p);

} // namespace franson
