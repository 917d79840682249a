#pragma once

#include "franson/source.hpp"

#include <optional>
#include <vector>

namespace franson {

struct UpconversionConfig {
  double internal_efficiency = 0.96;
  double noise_rate_per_pulse = 0.01; ///< mean noise photons per pulse
  double pump_wavelength_nm = 775.0;
};

std::vector<std::string> validate(const UpconversionConfig& cfg);

enum class ConversionResult { both, one, none };

/// Result of sending a pair through the up-conversion crystal. Photons that
/// did not convert are removed by the dichroic optics and are not returned.
struct ConversionOutcome {
  ConversionResult result = ConversionResult::none;
  PairRecord pair;                      ///< valid when result == both
  std::optional<PhotonRecord> survivor; ///< valid when result == one
};

/// Each photon converts independently with the internal efficiency. Converted
/// photons move to the sum-frequency wavelength and pick up the SH pump phase
/// 2*phi_p(t), so a fully converted pair ends with sum phase 6*phi_p(t).
/// Throws ConfigError if the pair is not at the design wavelength.
ConversionOutcome upconvert_pair(const PairRecord& pair, const UpconversionConfig& cfg,
                                 const PulseTrainConfig& train, RandomStream& rng);

/// Incoherent background photons from the conversion stage: Poisson count,
/// envelope^2 timing, uniformly random phase.
std::vector<PhotonRecord> sample_noise_photons(const UpconversionConfig& cfg,
                                               std::int64_t pulse_index,
                                               const PulseTrainConfig& train,
                                               RandomStream& rng);

} // namespace franson
