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

#ifndef EEOPT_UNITS_HPP_
#define EEOPT_UNITS_HPP_

#include <string_view>

namespace eeopt::units {

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double ratio);

enum class Quantity {
  Power,          // W, mW, dBm, dBW
  Frequency,      // Hz, kHz, MHz, GHz
  Ratio,          // dB or plain linear number
  Distance,       // m, km
  PowerDensity,   // W/Hz, dBm/Hz
  Rate,           // bit/s, kbit/s, Mbit/s
  Dimensionless,  // plain number only
};

std::string_view to_string(Quantity q);

// Parses "<number> <unit>" (or a bare number, taken as SI) into SI units.
// Throws ConfigError naming the offending text on failure.
double parse(std::string_view text, Quantity q);

}  // namespace eeopt::units

#endif  // EEOPT_UNITS_HPP_
