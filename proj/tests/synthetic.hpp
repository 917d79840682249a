#pragma once

// Labelled synthetic tag streams for estimator tests. Every click remembers
// which pair (or noise photon) produced it, so the true accidental count is
// known exactly.

#include "franson/detection.hpp"
#include "franson/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace synthetic {

struct Click {
  std::int64_t t;
  std::int64_t label;
};

struct Labelled {
  std::vector<Click> det1, det2;

  franson::TagStreams streams() const {
    franson::TagStreams s;
    for (const auto& c : det1) s.det1.push_back(c.t);
    for (const auto& c : det2) s.det2.push_back(c.t);
    return s;
  }
};

struct Params {
  std::int64_t pulses = 100000;
  double period_ps = 250000.0;
  double emission_span_ps = 7500.0;
  double pairs_per_pulse = 0.09;
  double noise_per_pulse = 0.0;
  double efficiency = 0.3;
  double jitter_sigma_ps = 15.0;
  bool at_most_one_pair = false;
};

inline Labelled generate(const Params& p, std::uint64_t seed) {
  franson::RandomStream rng(seed, franson::StreamTag::test, 0);
  std::normal_distribution<double> jitter(0.0, p.jitter_sigma_ps);
  Labelled out;
  std::int64_t label = 0;
  auto emit = [&](double t, std::int64_t id) {
    if (rng.uniform() >= p.efficiency) return;
    const int det = rng.uniform() < 0.5 ? 1 : 2;
    const double tj = p.jitter_sigma_ps > 0 ? t + jitter(rng) : t;
    (det == 1 ? out.det1 : out.det2).push_back({std::llround(tj), id});
  };
  for (std::int64_t k = 0; k < p.pulses; ++k) {
    const double t0 = static_cast<double>(k) * p.period_ps;
    int n = std::poisson_distribution<int>(p.pairs_per_pulse)(rng);
    if (p.at_most_one_pair) n = std::min(n, 1);
    for (int i = 0; i < n; ++i) {
      const double t = t0 + std::floor(rng.uniform() * p.emission_span_ps);
      const auto id = label++;
      emit(t, id);
      emit(t, id);
    }
    const int m = p.noise_per_pulse > 0 ? std::poisson_distribution<int>(p.noise_per_pulse)(rng) : 0;
    for (int i = 0; i < m; ++i) emit(t0 + std::floor(rng.uniform() * p.emission_span_ps), label++);
  }
  auto by_time = [](const Click& a, const Click& b) { return a.t < b.t; };
  std::stable_sort(out.det1.begin(), out.det1.end(), by_time);
  std::stable_sort(out.det2.begin(), out.det2.end(), by_time);
  return out;
}

/// In-window coincidences, split into same-label (true) and different-label (accidental).
struct Split {
  std::uint64_t same = 0;
  std::uint64_t different = 0;
};

inline Split split_coincidences(const Labelled& s, double half_window) {
  Split r;
  std::size_t lo = 0;
  for (const auto& a : s.det1) {
    while (lo < s.det2.size() && static_cast<double>(s.det2[lo].t - a.t) <= -half_window) ++lo;
    for (std::size_t j = lo; j < s.det2.size() && static_cast<double>(s.det2[j].t - a.t) < half_window; ++j)
      (s.det2[j].label == a.label ? r.same : r.different)++;
  }
  return r;
}

} // namespace synthetic
