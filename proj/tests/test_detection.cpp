#include "doctest.h"
#include "oracles.hpp"

#include "franson/detection.hpp"
#include "franson/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace franson;

namespace {

Arrival arrival_at(double t) {
  return Arrival{PhotonRecord{t, upconverted_wavelength(), 0.0, PhotonOrigin::signal}, t};
}

ApdConfig perfect() {
  ApdConfig apd;
  apd.quantum_efficiency = 1.0;
  apd.jitter_fwhm_ps = 0.0;
  apd.dead_time_ns = 0.0;
  apd.dark_rate_per_s = 0.0;
  return apd;
}

} // namespace

TEST_CASE("perfect detector reports the arrival time") {
  ApdPair det(perfect());
  RandomStream rng(1);
  int d1 = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto tag = det.detect(arrival_at(1000.0 + 7.0 * i), rng);
    REQUIRE(tag.has_value());
    CHECK(tag->time_ps == 1000 + 7 * i);
    d1 += tag->detector == 1;
  }
  CHECK(std::abs(d1 - 500) < 3 * std::sqrt(250.0));
}

TEST_CASE("jitter of 50 ps FWHM gives sigma 21.2 ps") {
  ApdConfig apd = perfect();
  apd.jitter_fwhm_ps = 50.0;
  CHECK(apd.jitter_sigma_ps() == doctest::Approx(21.23).epsilon(1e-3));
  RandomStream rng(2);
  const int n = 100000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto tag = sense(arrival_at(1e6), apd, rng);
    REQUIRE(tag.has_value());
    const double d = static_cast<double>(tag->time_ps) - 1e6;
    s += d;
    s2 += d * d;
  }
  const double mean = s / n;
  const double sd = std::sqrt(s2 / n - mean * mean);
  // integer rounding adds 1/12 ps^2 of variance; standard error of sigma is sigma/sqrt(2n)
  const double expect = std::sqrt(std::pow(50.0 / 2.35482, 2) + 1.0 / 12.0);
  CHECK(std::abs(sd - expect) < 3.0 * expect / std::sqrt(2.0 * n));
  CHECK(std::abs(mean) < 3.0 * expect / std::sqrt(n));
}

TEST_CASE("quantum efficiency thins arrivals binomially") {
  ApdConfig apd = perfect();
  apd.quantum_efficiency = 0.31;
  RandomStream rng(3);
  const int n = 100000;
  int kept = 0;
  for (int i = 0; i < n; ++i) kept += sense(arrival_at(0.0), apd, rng).has_value();
  CHECK(std::abs(kept - 0.31 * n) < 3.0 * std::sqrt(n * 0.31 * 0.69));
}

TEST_CASE("dead time") {
  ApdConfig apd = perfect();
  apd.dead_time_ns = 50.0;
  DeadTimeFilter f(apd.dead_time_ns);
  CHECK(f.accept({1, 1000}));
  CHECK_FALSE(f.accept({1, 2000}));  // 1 ns later, same detector
  CHECK(f.accept({2, 2000}));        // other detector unaffected
  CHECK(f.accept({1, 1000 + 50000}));

  const std::vector<std::int64_t> times{5, 10, 40'000, 60'000, 200'000};
  const auto kept = apply_dead_time(times, 50.0);
  CHECK(kept == std::vector<std::int64_t>{5, 60'000, 200'000});
  RandomStream rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::int64_t> t;
    std::int64_t x = static_cast<std::int64_t>(rng() % 1000);
    for (int i = 0; i < 100; ++i) t.push_back(x += static_cast<std::int64_t>(rng() % 80000));
    const auto k = apply_dead_time(t, 50.0);
    REQUIRE_FALSE(k.empty());
    CHECK(k.front() == t.front());
    for (std::size_t i = 1; i < k.size(); ++i) CHECK(k[i] - k[i - 1] >= 50000);
  }
  CHECK(apply_dead_time(std::vector<std::int64_t>{}, 50.0).empty());
}

TEST_CASE("dark counts: Poisson total and exponential gaps") {
  ApdConfig apd;
  apd.dark_rate_per_s = 0.0;
  RandomStream rng(6);
  CHECK(generate_dark_counts(apd, 0.0, 1e14, rng).empty());

  apd.dark_rate_per_s = 100.0;
  const auto tags = generate_dark_counts(apd, 0.0, 100e12, rng);
  std::vector<double> gaps;
  std::int64_t prev = 0;
  int n1 = 0;
  for (const auto& t : tags) {
    if (t.detector != 1) continue;
    gaps.push_back(static_cast<double>(t.time_ps - prev));
    prev = t.time_ps;
    ++n1;
  }
  const int n2 = static_cast<int>(tags.size()) - n1;
  CHECK(std::abs(n1 - 10000) < 300);
  CHECK(std::abs(n2 - 10000) < 300);

  std::sort(gaps.begin(), gaps.end());
  const double lambda = 100.0 * 1e-12;
  double dmax = 0.0;
  const double n = static_cast<double>(gaps.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double cdf = 1.0 - std::exp(-lambda * gaps[i]);
    dmax = std::max({dmax, std::abs(cdf - i / n), std::abs((i + 1) / n - cdf)});
  }
  // Kolmogorov-Smirnov critical value at 1%
  CHECK(dmax < 1.628 / std::sqrt(n));
}

TEST_CASE("correlate: single pair lands in the zero bin") {
  const TagStreams tags{{1000}, {1000}};
  const auto h = correlate(tags, 400.0);
  CHECK(h.total() == 1);
  const auto it = std::find(h.counts.begin(), h.counts.end(), 1u);
  CHECK(h.bin_center(static_cast<std::size_t>(it - h.counts.begin())) == doctest::Approx(0.0));
  CHECK(h.bin_width_ps == 25.0);
}

TEST_CASE("correlate agrees with brute-force pairing") {
  RandomStream rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    TagStreams tags;
    std::int64_t t = 0;
    for (int i = 0; i < 300; ++i) {
      t += static_cast<std::int64_t>(rng() % 500);
      tags[1 + static_cast<int>(rng() % 2)].push_back(t);
    }
    const double w = 50.0 + static_cast<double>(rng() % 400);
    const auto h = correlate(tags, w);
    // every pair with |dtau| <= w, binned on multiples of 25 ps
    std::vector<std::uint64_t> expect(h.counts.size(), 0);
    for (auto a : tags.det1)
      for (auto b : tags.det2) {
        const double d = static_cast<double>(b - a);
        if (std::abs(d) > w) continue;
        const auto bin = static_cast<std::size_t>(std::floor((d - h.origin_ps) / 25.0));
        REQUIRE(bin < expect.size());
        ++expect[bin];
      }
    CHECK(h.counts == expect);
  }
}

TEST_CASE("correlate with perfect detection preserves arrival differences") {
  ApdConfig apd = perfect();
  RandomStream rng(8);
  std::vector<TimeTag> clicks;
  // detector assignment is random; keep only pulses split across both
  int split = 0;
  for (int i = 0; i < 200; ++i) {
    const double t0 = 1e6 * i;
    const auto a = sense(arrival_at(t0), apd, rng);
    const auto b = sense(arrival_at(t0 + 75.0), apd, rng);
    if (a->detector == b->detector) continue;
    clicks.push_back(*a);
    clicks.push_back(*b);
    ++split;
  }
  const auto tags = assemble_streams(clicks, 0.0);
  const auto h = correlate(tags, 400.0);
  CHECK(h.total() == static_cast<std::uint64_t>(split));
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    if (h.counts[i]) CHECK(std::abs(std::abs(h.bin_center(i)) - 75.0) < 0.5);
}

TEST_CASE("unsorted streams violate the contract") {
  const TagStreams tags{{10, 5}, {1}};
  CHECK_THROWS_AS(correlate(tags, 100.0), ContractError);
}

TEST_CASE("tag and histogram text formats") {
  const TagStreams tags{{1, 5, 99}, {2, 3}};
  std::stringstream ss;
  write_tags_text(ss, tags);
  const auto back = read_tags_text(ss);
  CHECK(back.det1 == tags.det1);
  CHECK(back.det2 == tags.det2);

  std::ostringstream h;
  write_histogram_csv(h, correlate(tags, 50.0));
  CHECK(h.str().rfind("dtau_ps,counts\n", 0) == 0);
}
