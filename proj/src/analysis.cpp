#include "franson/analysis.hpp"

#include "franson/errors.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <ostream>

namespace franson {

namespace {

double median_of(std::vector<double> v) {
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

// Sub-bin offset (in bins) of the vertex through three samples. Uses the
// log-parabola when all samples are positive (exact for Gaussian peaks).
double vertex_offset(double left, double centre, double right) {
  if (left > 0.0 && centre > 0.0 && right > 0.0) {
    left = std::log(left);
    centre = std::log(centre);
    right = std::log(right);
  }
  const double denom = left - 2.0 * centre + right;
  if (denom >= 0.0) return 0.0;
  return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

} // namespace

std::vector<double> find_histogram_peaks(const CorrelationHistogram& hist,
                                         double expected_separation, double k) {
  const auto& c = hist.counts;
  if (c.empty()) throw ContractError("find_histogram_peaks: empty histogram");
  std::vector<double> v(c.begin(), c.end());
  const double med = median_of(v);
  for (auto& x : v) x = std::abs(x - med);
  const double mad = median_of(v);
  const double floor = med + k * std::max(1.4826 * mad, std::sqrt(std::max(med, 1.0)));

  struct Candidate {
    double centre;
    double height;
  };
  std::vector<Candidate> found;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double h = static_cast<double>(c[i]);
    if (h <= floor) continue;
    const double left = i > 0 ? static_cast<double>(c[i - 1]) : 0.0;
    const double right = i + 1 < c.size() ? static_cast<double>(c[i + 1]) : 0.0;
    if (!(h > left && h >= right)) continue;
    found.push_back({hist.bin_center(i) + vertex_offset(left, h, right) * hist.bin_width_ps, h});
  }

  // Strongest first; suppress neighbours inside half the expected separation.
  std::stable_sort(found.begin(), found.end(),
                   [](const Candidate& a, const Candidate& b) { return a.height > b.height; });
  std::vector<double> peaks;
  for (const auto& cand : found) {
    const bool close = std::any_of(peaks.begin(), peaks.end(), [&](double p) {
      return std::abs(p - cand.centre) < 0.5 * expected_separation;
    });
    if (!close) peaks.push_back(cand.centre);
  }
  std::sort(peaks.begin(), peaks.end());
  return peaks;
}

std::uint64_t coincidences_in_window(const CorrelationHistogram& hist, double half_window) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < hist.counts.size(); ++i)
    if (std::abs(hist.bin_center(i)) < half_window) n += hist.counts[i];
  return n;
}

std::uint64_t coincidences_in_window(const TagStreams& tags, double half_window,
                                     std::int64_t shift) {
  require_sorted(tags.det1, "coincidences_in_window (detector 1)");
  require_sorted(tags.det2, "coincidences_in_window (detector 2)");
  const auto& a = tags.det1;
  const auto& b = tags.det2;
  std::uint64_t n = 0;
  std::size_t lo = 0;
  for (const auto t1 : a) {
    while (lo < b.size() && static_cast<double>(b[lo] - shift - t1) <= -half_window) ++lo;
    for (std::size_t j = lo; j < b.size() && static_cast<double>(b[j] - shift - t1) < half_window; ++j)
      ++n;
  }
  return n;
}

std::int64_t period_shift_ps(double pulse_period_ns) { return std::llround(pulse_period_ns * 1e3); }

std::uint64_t estimate_accidentals(const TagStreams& tags, double pulse_period_ns,
                                   double half_window) {
  return coincidences_in_window(tags, half_window, period_shift_ps(pulse_period_ns));
}

double estimate_accidentals_averaged(const TagStreams& tags, double pulse_period_ns,
                                     double half_window, int offsets) {
  if (offsets < 1) throw ContractError("estimate_accidentals_averaged: offsets must be >= 1");
  const auto p = period_shift_ps(pulse_period_ns);
  double sum = 0.0;
  for (int k = 1; k <= offsets; ++k) {
    sum += static_cast<double>(coincidences_in_window(tags, half_window, k * p));
    sum += static_cast<double>(coincidences_in_window(tags, half_window, -k * p));
  }
  return sum / (2.0 * offsets);
}

double subtract_accidentals(double raw, double accidental) { return raw - accidental; }

double fringe_rss(const FringeScan& scan, double period, FringeFit* out) {
  // Normal equations for y = a + A cos(wx) + B sin(wx).
  const double w = kTwoPi / period;
  const double x0 = scan.samples.front().delta_L_nm;
  std::array<double, 9> m{};
  std::array<double, 3> r{};
  for (const auto& s : scan.samples) {
    const double x = s.delta_L_nm - x0;
    const std::array<double, 3> f{1.0, std::cos(w * x), std::sin(w * x)};
    const double y = s.net();
    for (int i = 0; i < 3; ++i) {
      r[i] += f[i] * y;
      for (int j = 0; j < 3; ++j) m[3 * i + j] += f[i] * f[j];
    }
  }
  // Cramer's rule on the symmetric 3x3 system.
  auto det3 = [](const std::array<double, 9>& a) {
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
  };
  const double d = det3(m);
  if (std::abs(d) < 1e-12 * std::pow(static_cast<double>(scan.samples.size()), 3))
    return std::numeric_limits<double>::infinity();
  std::array<double, 3> coef{};
  for (int k = 0; k < 3; ++k) {
    auto mk = m;
    for (int i = 0; i < 3; ++i) mk[3 * i + k] = r[i];
    coef[k] = det3(mk) / d;
  }
  double rss = 0.0;
  for (const auto& s : scan.samples) {
    const double x = s.delta_L_nm - x0;
    const double e = s.net() - (coef[0] + coef[1] * std::cos(w * x) + coef[2] * std::sin(w * x));
    rss += e * e;
  }
  if (out) {
    out->period_nm = period;
    out->offset = coef[0];
    out->amplitude = std::hypot(coef[1], coef[2]);
    out->phase_rad = std::atan2(-coef[2], coef[1]);
    out->visibility = coef[0] != 0.0 ? out->amplitude / coef[0] : 0.0;
    out->residual_rms = std::sqrt(rss / static_cast<double>(scan.samples.size()));
  }
  return rss;
}

FringeFit fit_fringe(const FringeScan& scan, const FringeFitOptions& opts) {
  const auto& s = scan.samples;
  if (s.size() < 4) throw FitError("fit_fringe: need at least 4 samples, got " + std::to_string(s.size()));
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i].delta_L_nm > s[i - 1].delta_L_nm))
      throw FitError("fit_fringe: delta_L must be strictly increasing");

  double lo = s.front().net(), hi = lo, scale = 0.0;
  for (const auto& p : s) {
    lo = std::min(lo, p.net());
    hi = std::max(hi, p.net());
    scale = std::max(scale, std::abs(p.net()));
  }
  if (hi - lo <= 1e-12 * std::max(scale, 1.0))
    throw FitError(fmt::format("fit_fringe: degenerate scan, all {} samples equal {}", s.size(), lo));

  const double step = (s.back().delta_L_nm - s.front().delta_L_nm) / static_cast<double>(s.size() - 1);
  const double p_min = std::max(opts.min_period_nm, 2.0 * step);

  double best_p = 0.0, best_rss = std::numeric_limits<double>::infinity();
  for (double p = p_min; p <= opts.max_period_nm; p += opts.grid_step_nm) {
    const double rss = fringe_rss(scan, p);
    if (rss < best_rss) {
      best_rss = rss;
      best_p = p;
    }
  }
  if (!std::isfinite(best_rss)) throw FitError("fit_fringe: no candidate period produced a solvable fit");

  // Golden-section refinement around the best grid point.
  constexpr double inv_phi = 0.6180339887498949;
  double a = std::max(p_min, best_p - opts.grid_step_nm);
  double b = std::min(opts.max_period_nm, best_p + opts.grid_step_nm);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fringe_rss(scan, c), fd = fringe_rss(scan, d);
  while (b - a > 1e-7 * best_p) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fringe_rss(scan, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fringe_rss(scan, d);
    }
  }

  FringeFit fit;
  fringe_rss(scan, 0.5 * (a + b), &fit);
  if (!(fit.offset > 0.0))
    throw FitError(fmt::format("fit_fringe: non-positive fitted offset {}", fit.offset));
  return fit;
}

double integrate_profile(const Profile& p, double t0, double t1) {
  const auto& t = p.t_ns;
  const auto& y = p.intensity;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double a = std::max(t[i], t0);
    const double b = std::min(t[i + 1], t1);
    if (!(b > a)) continue;
    const double slope = (y[i + 1] - y[i]) / (t[i + 1] - t[i]);
    const double ya = y[i] + slope * (a - t[i]);
    const double yb = y[i] + slope * (b - t[i]);
    sum += 0.5 * (ya + yb) * (b - a);
  }
  return sum;
}

double visibility_from_profiles(const Profile& a, const Profile& b, double t0, double t1) {
  if (!(t0 < t1)) throw ContractError("visibility_from_profiles: need t0 < t1");
  if (a.t_ns.size() != b.t_ns.size() || a.t_ns.size() != a.intensity.size() ||
      b.t_ns.size() != b.intensity.size() || a.t_ns.size() < 2)
    throw ContractError("visibility_from_profiles: profiles are not on a common grid");
  for (std::size_t i = 0; i < a.t_ns.size(); ++i)
    if (std::abs(a.t_ns[i] - b.t_ns[i]) > 1e-9)
      throw ContractError("visibility_from_profiles: profiles are not on a common grid");
  if (t1 <= a.t_ns.front() || t0 >= a.t_ns.back())
    throw ContractError("visibility_from_profiles: window does not overlap the grid");
  const double ia = integrate_profile(a, t0, t1);
  const double ib = integrate_profile(b, t0, t1);
  if (ia + ib == 0.0) return 0.0;
  return (ia - ib) / (ia + ib);
}

double event_probability(double rate, double repetition_mhz) {
  if (!(repetition_mhz > 0.0)) throw DomainError("event_probability: repetition rate must be > 0");
  return rate / (repetition_mhz * 1e6);
}

void write_fringe_csv(std::ostream& out, const FringeScan& scan) {
  out << "delta_L_nm,coincidences,accidentals,net\n";
  for (const auto& s : scan.samples)
    fmt::print(out, "{},{},{},{}\n", s.delta_L_nm, s.coincidences, s.accidentals, s.net());
}

void write_fit_report(std::ostream& out, const FringeFit& fit) {
  fmt::print(out, "period_nm = {:.4f}\n", fit.period_nm);
  fmt::print(out, "visibility = {:.4f}\n", fit.visibility);
  fmt::print(out, "phase_rad = {:.4f}\n", fit.phase_rad);
  fmt::print(out, "offset = {:.4f}\n", fit.offset);
  fmt::print(out, "residual_rms = {:.4f}\n", fit.residual_rms);
}

void write_profile_csv(std::ostream& out, const Profile& p) {
  out << "t_ns,intensity\n";
  for (std::size_t i = 0; i < p.t_ns.size(); ++i) fmt::print(out, "{},{}\n", p.t_ns[i], p.intensity[i]);
}

} // namespace franson
