#pragma once

#include "franson/interferometer.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace franson {

/// Avalanche photodiode parameters, shared by both detectors.
struct ApdConfig {
  double quantum_efficiency = 0.31;
  double jitter_fwhm_ps = 50.0; ///< Gaussian FWHM of one detector's timing error
  double dead_time_ns = 50.0;
  double dark_rate_per_s = 100.0;

  double jitter_sigma_ps() const { return jitter_fwhm_ps / kFwhmPerSigma; }
};

std::vector<std::string> validate(const ApdConfig& cfg);

/// One detector click. Detectors are numbered 1 and 2.
struct TimeTag {
  int detector = 1;
  std::int64_t time_ps = 0;

  friend bool operator==(const TimeTag&, const TimeTag&) = default;
};

/// Per-detector, time-sorted click streams.
struct TagStreams {
  std::vector<std::int64_t> det1;
  std::vector<std::int64_t> det2;

  std::vector<std::int64_t>& operator[](int detector) { return detector == 1 ? det1 : det2; }
  const std::vector<std::int64_t>& operator[](int detector) const {
    return detector == 1 ? det1 : det2;
  }
  std::size_t size() const { return det1.size() + det2.size(); }
};

/// Start-stop histogram of dtau = t2 - t1.
struct CorrelationHistogram {
  double bin_width_ps = 25.0;
  double origin_ps = 0.0; ///< lower edge of bin 0
  std::vector<std::uint64_t> counts;

  double bin_center(std::size_t i) const {
    return origin_ps + (static_cast<double>(i) + 0.5) * bin_width_ps;
  }
  std::uint64_t total() const;
};

inline constexpr double kTiaBinWidth_ps = 25.0;

/// Detector fan-out, efficiency and jitter for one arrival (no dead time):
/// detector 1 or 2 with probability 1/2, kept with probability qe, time
/// smeared by a Gaussian of the configured FWHM and rounded to integer ps.
std::optional<TimeTag> sense(const Arrival& arrival, const ApdConfig& apd, RandomStream& rng);

/// Keeps the last accepted click of each detector and rejects clicks that fall
/// within the dead time. Expects clicks in non-decreasing time per detector.
class DeadTimeFilter {
public:
  explicit DeadTimeFilter(double dead_time_ns);

  bool accept(const TimeTag& tag);

private:
  std::int64_t dead_ps_;
  std::array<std::optional<std::int64_t>, 2> last_{};
};

/// Stateful two-detector readout: sense() followed by dead-time filtering.
class ApdPair {
public:
  explicit ApdPair(ApdConfig cfg) : cfg_(cfg), dead_(cfg.dead_time_ns) {}

  std::optional<TimeTag> detect(const Arrival& arrival, RandomStream& rng);

  const ApdConfig& config() const { return cfg_; }

private:
  ApdConfig cfg_;
  DeadTimeFilter dead_;
};

/// Drops clicks closer than dead_time to the previously accepted one.
/// The stream must be sorted; the first click is always kept.
std::vector<std::int64_t> apply_dead_time(std::span<const std::int64_t> sorted_times,
                                          double dead_time_ns);

/// Homogeneous Poisson dark counts on both detectors over [begin, end) ps,
/// returned detector 1 first, then detector 2, each time-sorted.
std::vector<TimeTag> generate_dark_counts(const ApdConfig& apd, double begin_ps, double end_ps,
                                          RandomStream& rng);

/// Sorts raw clicks into per-detector streams (stable by time) and applies
/// the dead time.
TagStreams assemble_streams(std::vector<TimeTag> clicks, double dead_time_ns);

/// Histogram of t2 - t1 for every detector-2 click within +-window of a
/// detector-1 click. `shift_ps` is subtracted from detector-2 times first
/// (one pump period gives the accidental histogram). Bins are centred on
/// multiples of bin_width. Throws ContractError on unsorted streams.
CorrelationHistogram correlate(const TagStreams& tags, double window_span_ps,
                               double bin_width_ps = kTiaBinWidth_ps, std::int64_t shift_ps = 0);

void write_tags_text(std::ostream& out, const TagStreams& tags);
TagStreams read_tags_text(std::istream& in);
void write_histogram_csv(std::ostream& out, const CorrelationHistogram& hist);

/// Throws ContractError unless the stream is non-decreasing.
void require_sorted(std::span<const std::int64_t> times, const char* what);

} // namespace franson
