#pragma once

#include <string>

namespace isosim {

// Positive dB means attenuation throughout this library.
[[nodiscard]] double db_to_fraction(double db);
[[nodiscard]] double fraction_to_db(double fraction);

[[nodiscard]] double watt_to_dbm(double watts);
[[nodiscard]] double dbm_to_watt(double dbm);

// Accepts "10", "10W", "10 W", "500mW", "250uW" (or the Unicode micro sign),
// "100nW". A bare number is watts. Throws ParseError otherwise.
double parse_power_w(const std::string& text);

// Fixed %.12g rendering so emitted CSV and reports are byte-stable.
std::string format_number(double value);

}  // namespace isosim
