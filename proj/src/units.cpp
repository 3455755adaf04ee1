#include "isosim/units.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "isosim/errors.hpp"

namespace isosim {

double db_to_fraction(double db) { return std::pow(10.0, -db / 10.0); }

double fraction_to_db(double fraction) {
  if (fraction <= 0.0) throw Error("fraction_to_db: fraction must be > 0");
  return -10.0 * std::log10(fraction);
}

double watt_to_dbm(double watts) {
  if (watts <= 0.0) throw Error("watt_to_dbm: power must be > 0");
  return 10.0 * std::log10(watts * 1e3);
}

double dbm_to_watt(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

double parse_power_w(const std::string& text) {
  size_t begin = text.find_first_not_of(" \t");
  size_t end = text.find_last_not_of(" \t");
  if (begin == std::string::npos)
    throw ParseError("empty power value");
  std::string trimmed = text.substr(begin, end - begin + 1);

  const char* cstr = trimmed.c_str();
  char* rest = nullptr;
  double value = std::strtod(cstr, &rest);
  if (rest == cstr)
    throw ParseError("bad power value '" + trimmed + "'");

  std::string suffix(rest);
  size_t s = suffix.find_first_not_of(" \t");
  suffix = (s == std::string::npos) ? "" : suffix.substr(s);

  double scale = 1.0;
  if (suffix.empty() || suffix == "W") {
    scale = 1.0;
  } else if (suffix == "mW") {
    scale = 1e-3;
  } else if (suffix == "uW" || suffix == "µW" || suffix == "μW") {
    scale = 1e-6;
  } else if (suffix == "nW") {
    scale = 1e-9;
  } else {
    throw ParseError("unknown power unit '" + suffix + "' in '" + trimmed + "'");
  }
  return value * scale;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

}  // namespace isosim
