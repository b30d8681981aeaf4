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

#include "eeopt/scenario.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "eeopt/errors.hpp"
#include "eeopt/units.hpp"

namespace eeopt {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// std::uniform_real_distribution and std::normal_distribution are not
// specified bit-for-bit across standard libraries, so draws are built from
// the raw engine output.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return (engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    // Box-Muller; u1 in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

struct Point {
  double x = 0.0, y = 0.0;
};

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

double ScenarioConfig::noise_power() const {
  return units::db_to_linear(noise_figure_db) * noise_density *
         bandwidth_per_block;
}

double ScenarioConfig::reference_loss() const {
  if (reference_loss_db) return *reference_loss_db;
  return 20.0 * std::log10(carrier_frequency) - 147.55;
}

double ScenarioConfig::path_gain(double d) const {
  const double loss_db =
      10.0 * path_loss_exponent * std::log10(std::max(d, min_link_distance)) +
      reference_loss();
  return units::db_to_linear(-loss_db);
}

void ScenarioConfig::validate() const {
  if (n_d2d_pairs < 0) throw DomainError("n_d2d_pairs must be >= 0");
  if (n_blocks < 1) throw DomainError("n_blocks must be >= 1");
  if (!(d2d_distance > 0.0)) throw DomainError("d2d_distance must be > 0");
  if (!(annulus_inner >= 0.0 && annulus_outer >= annulus_inner)) {
    throw DomainError("placement annulus must satisfy 0 <= inner <= outer");
  }
  if (!(carrier_frequency > 0.0 && bandwidth_per_block > 0.0 &&
        noise_density > 0.0 && static_power > 0.0 && max_power > 0.0)) {
    throw DomainError("frequencies, noise, and powers must be positive");
  }
  if (!(amp_inefficiency >= 1.0)) {
    throw DomainError("amp_inefficiency must be >= 1");
  }
  if (!(min_rate >= 0.0)) throw DomainError("min_rate must be >= 0");
  if (!(path_loss_exponent > 0.0)) {
    throw DomainError("path_loss_exponent must be > 0");
  }
  if (!(shadowing_sigma_db >= 0.0)) {
    throw DomainError("shadowing_sigma_db must be >= 0");
  }
  if (!(min_link_distance > 0.0)) {
    throw DomainError("min_link_distance must be > 0");
  }
}

NetworkInstance generate(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  const int n = config.n_users();
  const int nk = config.n_blocks;
  Draws draws(seed);

  std::vector<Point> tx(n), rx(n);
  for (int i = 0; i < n; ++i) {
    const double r = draws.uniform(config.annulus_inner, config.annulus_outer);
    const double theta = draws.uniform(0.0, 2.0 * std::numbers::pi);
    tx[i] = {r * std::cos(theta), r * std::sin(theta)};
    if (i == 0) {
      rx[i] = {0.0, 0.0};
    } else {
      const double phi = draws.uniform(0.0, 2.0 * std::numbers::pi);
      rx[i] = {tx[i].x + config.d2d_distance * std::cos(phi),
               tx[i].y + config.d2d_distance * std::sin(phi)};
    }
  }

  Eigen::MatrixXd link(n, n);  // link(j, i): tx j -> receiver of user i
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double g = config.path_gain(distance(tx[j], rx[i]));
      if (config.shadowing_sigma_db > 0.0) {
        g *= units::db_to_linear(config.shadowing_sigma_db * draws.normal());
      }
      link(j, i) = g;
    }
  }

  NetworkInstance::Parameters p;
  p.bandwidth_per_block = config.bandwidth_per_block;
  p.gains.assign(nk, link);
  p.noise = Eigen::MatrixXd::Constant(n, nk, config.noise_power());
  p.amp_inefficiency = Eigen::VectorXd::Constant(n, config.amp_inefficiency);
  p.static_power = Eigen::VectorXd::Constant(n, config.static_power);
  p.max_power = Eigen::VectorXd::Constant(n, config.max_power);
  p.min_rate = Eigen::VectorXd::Constant(n, config.min_rate);
  return NetworkInstance(std::move(p));
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

}  // namespace eeopt
