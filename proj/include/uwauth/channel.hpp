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

#pragma once

namespace uwauth {

/// Acoustic link parameters shared by all anchors.
struct ChannelParams {
  double frequency_khz = 10.0;
  double sound_speed_mps = 1500.0;
  double spreading_factor = 1.5;
  /// Transmit power in dB re 1 pascal.
  double transmit_power_db = 60.0;
  /// Correlation gain of the ranging waveform against the noise covariance,
  /// a dimensionless scale on the estimator precision.
  double signal_design_gain = 1.0;

  /// Throws DomainError unless every positivity invariant holds.
  void validate() const;

  ChannelParams with_power(double power_db) const {
    ChannelParams copy = *this;
    copy.transmit_power_db = power_db;
    return copy;
  }
};

/// Thorp-style absorption coefficient in dB/km for a frequency in kHz.
double absorption_db_per_km(double frequency_khz);

/// Spreading plus absorption loss in dB. The spreading term uses a 1 m
/// reference distance, the absorption term converts the distance to km.
double pathloss_db(double distance_m, const ChannelParams& params);

/// Variance (m^2) of the time-of-arrival range estimate over one link:
/// c^2 * PL / (4 * P * gain), with PL and P converted from dB to linear.
double distance_noise_variance(double distance_m, const ChannelParams& params);

}  // namespace uwauth
