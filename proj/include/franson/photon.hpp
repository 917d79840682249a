#pragma once

#include "franson/units.hpp"

#include <cstdint>
#include <string_view>

namespace franson {

enum class PhotonOrigin : std::uint8_t { signal, idler, noise, dark };

std::string_view to_string(PhotonOrigin origin);

/// One photon travelling through the setup.
struct PhotonRecord {
  double emission_time_ps = 0.0; ///< absolute, from the start of pulse 0
  Length wavelength = kFundamentalWavelength;
  double phase = 0.0; ///< carried optical phase (radians)
  PhotonOrigin origin = PhotonOrigin::signal;
};

/// A down-converted pair. Both photons share the emission time; the pair's
/// sum phase is inherited from the pump that created (and later up-converted) it.
struct PairRecord {
  double emission_time_ps = 0.0;
  std::int64_t pulse_index = 0;
  PhotonRecord signal;
  PhotonRecord idler;
  double sum_phase = 0.0;          ///< radians
  double sum_coherence_time_ns = 0.0; ///< two-photon coherence time, ~ pump duration
};

} // namespace franson
