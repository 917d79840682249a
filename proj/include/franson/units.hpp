#pragma once

#include <compare>

namespace franson {

/// Speed of light in vacuum, exact SI value.
inline constexpr double kSpeedOfLight_m_per_s = 299'792'458.0;
/// Same constant in the artifact's native units (nm per ps).
inline constexpr double kSpeedOfLight_nm_per_ps = kSpeedOfLight_m_per_s * 1e-3;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// FWHM of a Gaussian divided by its standard deviation, 2*sqrt(2 ln 2).
inline constexpr double kFwhmPerSigma = 2.3548200450309493;

/// Optical length in nanometres. Path-length differences may be negative.
struct Length {
  double nm = 0.0;

  static constexpr Length nanometers(double v) { return Length{v}; }
  static constexpr Length micrometers(double v) { return Length{v * 1e3}; }
  static constexpr Length millimeters(double v) { return Length{v * 1e6}; }

  constexpr Length operator+(Length o) const { return Length{nm + o.nm}; }
  constexpr Length operator-(Length o) const { return Length{nm - o.nm}; }
  constexpr Length operator*(double k) const { return Length{nm * k}; }
  constexpr Length operator/(double k) const { return Length{nm / k}; }
  constexpr auto operator<=>(const Length&) const = default;
};

/// Time interval in picoseconds.
struct TimeInterval {
  double ps = 0.0;

  static constexpr TimeInterval picoseconds(double v) { return TimeInterval{v}; }
  static constexpr TimeInterval nanoseconds(double v) { return TimeInterval{v * 1e3}; }

  constexpr double ns() const { return ps * 1e-3; }
  constexpr TimeInterval operator+(TimeInterval o) const { return TimeInterval{ps + o.ps}; }
  constexpr TimeInterval operator-(TimeInterval o) const { return TimeInterval{ps - o.ps}; }
  constexpr TimeInterval operator*(double k) const { return TimeInterval{ps * k}; }
  constexpr auto operator<=>(const TimeInterval&) const = default;
};

/// Phase multiplier relative to the 1550 nm fundamental field.
/// m = 3 for the up-converted classical beam, m = 6 for the pair sum phase.
class PhaseModel {
public:
  /// Throws DomainError unless order is one of 1, 2, 3, 6.
  explicit PhaseModel(int harmonic_order);

  static PhaseModel fundamental() { return PhaseModel{1}; }
  static PhaseModel second_harmonic() { return PhaseModel{2}; }
  static PhaseModel upconverted_beam() { return PhaseModel{3}; }
  static PhaseModel pair_sum() { return PhaseModel{6}; }

  int order() const noexcept { return order_; }

private:
  int order_;
};

/// Nominal wavelengths of the setup.
inline constexpr Length kFundamentalWavelength = Length::nanometers(1550.0);
inline constexpr Length kSecondHarmonicWavelength = Length::nanometers(775.0);

/// Arrival-time offset produced by an optical path difference, dL / c.
/// Sign is preserved. Throws DomainError on non-finite input.
TimeInterval time_delay(Length delta_L);

/// Inverse of time_delay.
Length path_difference(TimeInterval delay);

/// Energy-conserving sum-frequency wavelength, 1 / (1/a + 1/b).
Length sum_frequency_wavelength(Length lambda_a, Length lambda_b);

/// Interference phase m * 2pi * dL / base_wavelength. The implied fringe
/// period along dL is base_wavelength / m.
double fringe_phase(Length delta_L, Length base_wavelength, PhaseModel model);

/// Fringe period base_wavelength / m.
Length fringe_period(Length base_wavelength, PhaseModel model);

/// Wavelength of an up-converted 1550 nm photon (1550 + 775 -> 516.67 nm).
Length upconverted_wavelength();

} // namespace franson
