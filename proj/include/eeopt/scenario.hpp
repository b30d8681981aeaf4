// Copyright 2026 The eeopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EEOPT_SCENARIO_HPP_
#define EEOPT_SCENARIO_HPP_

#include <cstdint>
#include <optional>

#include "eeopt/network.hpp"

namespace eeopt {

/// Single-cell uplink with one cellular UE and D2D pairs reusing its resource
/// blocks. User 0 is the cellular UE (receiver: the BS at the origin); users
/// 1..n_d2d_pairs are D2D transmitters, each received by its own pair
/// receiver placed d2d_distance away at a uniformly random angle.
///
/// All fields are SI (W, Hz, m, W/Hz, bit/s); the noise figure and the
/// shadowing deviation are kept in dB.
struct ScenarioConfig {
  int n_d2d_pairs = 4;
  int n_blocks = 5;
  double d2d_distance = 20.0;
  double annulus_inner = 30.0;
  double annulus_outer = 100.0;
  double carrier_frequency = 5e9;
  double bandwidth_per_block = 500e3;
  double noise_figure_db = 3.0;
  double noise_density = 3.981071705534973e-21;  // -174 dBm/Hz
  double amp_inefficiency = 1.0;
  double static_power = 0.01;                 // 10 dBm
  double max_power = 0.19952623149688797;     // 23 dBm
  double min_rate = 0.0;
  double path_loss_exponent = 2.0;
  // Loss at 1 m in dB; free-space value for the carrier when unset.
  std::optional<double> reference_loss_db;
  double shadowing_sigma_db = 0.0;
  // Link distances are clamped below at this value.
  double min_link_distance = 1.0;

  int n_users() const { return 1 + n_d2d_pairs; }
  double noise_power() const;       // F * N0 * B_RB, W
  double reference_loss() const;    // dB
  // Linear power gain over `distance` metres (no shadowing).
  double path_gain(double distance) const;
  void validate() const;
};

// Deterministic in (config, seed).
NetworkInstance generate(const ScenarioConfig& config, std::uint64_t seed);

// Seed of trial `index` under master seed `master`:
//   splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15).
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index);

}  // namespace eeopt

#endif  // EEOPT_SCENARIO_HPP_
