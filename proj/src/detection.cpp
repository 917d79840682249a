#include "franson/detection.hpp"

#include "franson/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace franson {

std::vector<std::string> validate(const ApdConfig& cfg) {
  std::vector<std::string> errs;
  if (!(cfg.quantum_efficiency >= 0.0 && cfg.quantum_efficiency <= 1.0))
    errs.emplace_back("detector.quantum_efficiency must be in [0, 1]");
  if (!(cfg.jitter_fwhm_ps >= 0.0)) errs.emplace_back("detector.jitter_fwhm_ps must be >= 0");
  if (!(cfg.dead_time_ns >= 0.0)) errs.emplace_back("detector.dead_time_ns must be >= 0");
  if (!(cfg.dark_rate_per_s >= 0.0)) errs.emplace_back("detector.dark_rate_per_s must be >= 0");
  return errs;
}

std::uint64_t CorrelationHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::optional<TimeTag> sense(const Arrival& arrival, const ApdConfig& apd, RandomStream& rng) {
  const int detector = rng.uniform() < 0.5 ? 1 : 2;
  if (rng.uniform() >= apd.quantum_efficiency) return std::nullopt;
  double t = arrival.time_ps;
  if (apd.jitter_fwhm_ps > 0.0) t += std::normal_distribution<double>(0.0, apd.jitter_sigma_ps())(rng);
  return TimeTag{detector, std::llround(t)};
}

DeadTimeFilter::DeadTimeFilter(double dead_time_ns)
    : dead_ps_(std::llround(dead_time_ns * 1e3)) {}

bool DeadTimeFilter::accept(const TimeTag& tag) {
  auto& last = last_[tag.detector == 1 ? 0 : 1];
  if (last && tag.time_ps - *last < dead_ps_) return false;
  last = tag.time_ps;
  return true;
}

std::optional<TimeTag> ApdPair::detect(const Arrival& arrival, RandomStream& rng) {
  auto tag = sense(arrival, cfg_, rng);
  if (tag && !dead_.accept(*tag)) return std::nullopt;
  return tag;
}

std::vector<std::int64_t> apply_dead_time(std::span<const std::int64_t> times,
                                          double dead_time_ns) {
  std::vector<std::int64_t> kept;
  kept.reserve(times.size());
  const auto dead_ps = std::llround(dead_time_ns * 1e3);
  for (const auto t : times) {
    if (kept.empty() || t - kept.back() >= dead_ps) kept.push_back(t);
  }
  return kept;
}

std::vector<TimeTag> generate_dark_counts(const ApdConfig& apd, double begin_ps, double end_ps,
                                          RandomStream& rng) {
  std::vector<TimeTag> tags;
  if (apd.dark_rate_per_s <= 0.0 || !(end_ps > begin_ps)) return tags;
  const double rate_per_ps = apd.dark_rate_per_s * 1e-12;
  std::exponential_distribution<double> gap(rate_per_ps);
  for (int detector = 1; detector <= 2; ++detector) {
    for (double t = begin_ps + gap(rng); t < end_ps; t += gap(rng))
      tags.push_back(TimeTag{detector, std::llround(t)});
  }
  return tags;
}

TagStreams assemble_streams(std::vector<TimeTag> clicks, double dead_time_ns) {
  std::stable_sort(clicks.begin(), clicks.end(),
                   [](const TimeTag& a, const TimeTag& b) { return a.time_ps < b.time_ps; });
  TagStreams raw;
  for (const auto& c : clicks) raw[c.detector].push_back(c.time_ps);
  return TagStreams{apply_dead_time(raw.det1, dead_time_ns), apply_dead_time(raw.det2, dead_time_ns)};
}

void require_sorted(std::span<const std::int64_t> times, const char* what) {
  if (!std::is_sorted(times.begin(), times.end()))
    throw ContractError(std::string(what) + ": time tags are not sorted");
}

CorrelationHistogram correlate(const TagStreams& tags, double window, double bin_width,
                               std::int64_t shift) {
  require_sorted(tags.det1, "correlate (detector 1)");
  require_sorted(tags.det2, "correlate (detector 2)");
  if (!(bin_width > 0.0)) throw ContractError("correlate: bin width must be positive");

  const auto half_bins = static_cast<std::size_t>(std::ceil(window / bin_width));
  CorrelationHistogram hist;
  hist.bin_width_ps = bin_width;
  hist.origin_ps = -(static_cast<double>(half_bins) + 0.5) * bin_width;
  hist.counts.assign(2 * half_bins + 1, 0);

  const auto& a = tags.det1;
  const auto& b = tags.det2;
  const auto w = static_cast<std::int64_t>(std::floor(window));
  std::size_t lo = 0;
  for (const auto t1 : a) {
    while (lo < b.size() && b[lo] - shift < t1 - w) ++lo;
    for (std::size_t j = lo; j < b.size() && b[j] - shift <= t1 + w; ++j) {
      const double dtau = static_cast<double>(b[j] - shift - t1);
      const auto idx = static_cast<std::size_t>(std::floor((dtau - hist.origin_ps) / bin_width));
      ++hist.counts[idx];
    }
  }
  return hist;
}

void write_tags_text(std::ostream& out, const TagStreams& tags) {
  // Merge both detectors by time; detector 1 first on ties.
  std::size_t i = 0, j = 0;
  while (i < tags.det1.size() || j < tags.det2.size()) {
    if (j == tags.det2.size() || (i < tags.det1.size() && tags.det1[i] <= tags.det2[j]))
      out << 1 << '\t' << tags.det1[i++] << '\n';
    else
      out << 2 << '\t' << tags.det2[j++] << '\n';
  }
}

TagStreams read_tags_text(std::istream& in) {
  TagStreams tags;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int det = 0;
    std::int64_t t = 0;
    if (!(ls >> det >> t) || (det != 1 && det != 2))
      throw ContractError("tag dump line " + std::to_string(lineno) + ": expected 'detector<TAB>time_ps'");
    tags[det].push_back(t);
  }
  require_sorted(tags.det1, "tag dump (detector 1)");
  require_sorted(tags.det2, "tag dump (detector 2)");
  return tags;
}

void write_histogram_csv(std::ostream& out, const CorrelationHistogram& hist) {
  out << "dtau_ps,counts\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i)
    out << hist.bin_center(i) << ',' << hist.counts[i] << '\n';
}

} // namespace franson
