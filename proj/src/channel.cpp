/*
 * Copyright 2026 The uwauth Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "uwauth/channel.hpp"

#include <cmath>
#include <string>

#include "uwauth/error.hpp"

namespace uwauth {

void ChannelParams::validate() const {
  if (!(frequency_khz > 0.0)) throw DomainError("frequency must be positive");
  if (!(sound_speed_mps > 0.0)) throw DomainError("sound speed must be positive");
  if (!(spreading_factor > 0.0)) throw DomainError("spreading factor must be positive");
  if (!(signal_design_gain > 0.0)) throw DomainError("signal design gain must be positive");
  if (!std::isfinite(transmit_power_db)) throw DomainError("transmit power must be finite");
}

double absorption_db_per_km(double frequency_khz) {
  if (!(frequency_khz > 0.0)) throw DomainError("frequency must be positive");
  const double f2 = frequency_khz * frequency_khz;
  return 0.11 * f2 / (1.0 + f2) + 44.0 * f2 / (4100.0 + f2) + 2.75e-4 * f2 + 0.003;
}

double pathloss_db(double distance_m, const ChannelParams& params) {
  if (!(distance_m > 0.0)) throw DomainError("distance must be positive");
  const double spreading = params.spreading_factor * 10.0 * std::log10(distance_m);
  const double absorption = distance_m * 1e-3 * absorption_db_per_km(params.frequency_khz);
  return spreading + absorption;
}

double distance_noise_variance(double distance_m, const ChannelParams& params) {
  params.validate();
  const double c = params.sound_speed_mps;
  // c^2 * 10^(PL/10) / (4 * 10^(P/10) * gain), with the two exponentials
  // merged to avoid overflow at extreme powers.
  const double exponent_db = pathloss_db(distance_m, params) - params.transmit_power_db;
  return c * c * std::pow(10.0, exponent_db / 10.0) / (4.0 * params.signal_design_gain);
}

}  // namespace uwauth
