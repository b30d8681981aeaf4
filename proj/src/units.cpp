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

#include "eeopt/units.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "eeopt/errors.hpp"

namespace eeopt::units {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::Power:
      return "power";
    case Quantity::Frequency:
      return "frequency";
    case Quantity::Ratio:
      return "ratio";
    case Quantity::Distance:
      return "distance";
    case Quantity::PowerDensity:
      return "power density";
    case Quantity::Rate:
      return "rate";
    case Quantity::Dimensionless:
      return "number";
  }
  return "quantity";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void fail(std::string_view text, Quantity q, std::string_view why) {
  throw ConfigError("cannot read '" + std::string(text) + "' as a " +
                    std::string(to_string(q)) + ": " + std::string(why));
}

}  // namespace

double parse(std::string_view text, Quantity q) {
  const std::string_view s = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc()) fail(text, q, "expected a number");
  const std::string_view unit = trim(s.substr(ptr - s.data()));
  if (!std::isfinite(value)) fail(text, q, "value is not finite");
  if (unit.empty()) return value;

  switch (q) {
    case Quantity::Power:
      if (unit == "W") return value;
      if (unit == "mW") return value * 1e-3;
      if (unit == "dBm") return dbm_to_watts(value);
      if (unit == "dBW") return dbm_to_watts(value + 30.0);
      break;
    case Quantity::Frequency:
      if (unit == "Hz") return value;
      if (unit == "kHz" || unit == "KHz") return value * 1e3;
      if (unit == "MHz") return value * 1e6;
      if (unit == "GHz") return value * 1e9;
      break;
    case Quantity::Ratio:
      if (unit == "dB") return db_to_linear(value);
      break;
    case Quantity::Distance:
      if (unit == "m") return value;
      if (unit == "km") return value * 1e3;
      break;
    case Quantity::PowerDensity:
      if (unit == "W/Hz") return value;
      if (unit == "dBm/Hz") return dbm_to_watts(value);
      break;
    case Quantity::Rate:
      if (unit == "bit/s" || unit == "bps") return value;
      if (unit == "kbit/s") return value * 1e3;
      if (unit == "Mbit/s") return value * 1e6;
      break;
    case Quantity::Dimensionless:
      break;
  }
  fail(text, q, "unknown unit '" + std::string(unit) + "'");
}

}  // namespace eeopt::units
