#include "franson/units.hpp"

#include "franson/errors.hpp"

#include <cmath>
#include <string>

namespace franson {

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::runtime_error([&] {
        std::string msg = "invalid scenario:";
        for (const auto& p : problems) {
          msg += "\n  - ";
          msg += p;
        }
        return msg;
      }()),
      problems_(std::move(problems)) {}

PhaseModel::PhaseModel(int harmonic_order) : order_(harmonic_order) {
  if (order_ != 1 && order_ != 2 && order_ != 3 && order_ != 6)
    throw DomainError("harmonic order must be one of 1, 2, 3, 6; got " +
                      std::to_string(order_));
}

namespace {

void require_positive_wavelength(Length l, const char* what) {
  if (!std::isfinite(l.nm) || l.nm <= 0.0)
    throw DomainError(std::string(what) + " must be a finite positive length");
}

} // namespace

TimeInterval time_delay(Length delta_L) {
  if (!std::isfinite(delta_L.nm))
    throw DomainError("time_delay: path difference is not finite");
  return TimeInterval{delta_L.nm / kSpeedOfLight_nm_per_ps};
}

Length path_difference(TimeInterval delay) {
  if (!std::isfinite(delay.ps))
    throw DomainError("path_difference: delay is not finite");
  return Length{delay.ps * kSpeedOfLight_nm_per_ps};
}

Length sum_frequency_wavelength(Length lambda_a, Length lambda_b) {
  require_positive_wavelength(lambda_a, "first wavelength");
  require_positive_wavelength(lambda_b, "second wavelength");
  return Length{1.0 / (1.0 / lambda_a.nm + 1.0 / lambda_b.nm)};
}

double fringe_phase(Length delta_L, Length base_wavelength, PhaseModel model) {
  require_positive_wavelength(base_wavelength, "base wavelength");
  if (!std::isfinite(delta_L.nm))
    throw DomainError("fringe_phase: path difference is not finite");
  return model.order() * kTwoPi * delta_L.nm / base_wavelength.nm;
}

Length fringe_period(Length base_wavelength, PhaseModel model) {
  require_positive_wavelength(base_wavelength, "base wavelength");
  return Length{base_wavelength.nm / model.order()};
}

Length upconverted_wavelength() {
  return sum_frequency_wavelength(kFundamentalWavelength, kSecondHarmonicWavelength);
}

} // namespace franson
