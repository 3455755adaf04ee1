#include "isosim/magneto_optics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>

#include "isosim/errors.hpp"
#include "isosim/units.hpp"
#include "kv_util.hpp"

namespace isosim::magneto_optics {

namespace {

constexpr double kelvin_offset = 273.15;
constexpr double deg_to_rad = std::numbers::pi / 180.0;

}  // namespace

void MaterialParams::validate() const {
  if (lambda0_m <= 0.0)
    throw Error("material '" + name + "': lambda0_m must be > 0");
  if (t_valid_min_c >= t_valid_max_c)
    throw Error("material '" + name + "': empty validity range");
  double lo_k = t_valid_min_c + kelvin_offset;
  double hi_k = t_valid_max_c + kelvin_offset;
  // The pole of the 1/(T - Tw) terms may sit on either side of the window,
  // but never inside it.
  if (t_curie_k >= lo_k && t_curie_k <= hi_k)
    throw Error("material '" + name + "': t_curie_k " +
                format_number(t_curie_k) + " lies inside the validity range");
}

void FaradayStage::validate() const {
  material.validate();
  if (!(theta_ref_deg > 0.0 && theta_ref_deg < 90.0))
    throw Error("stage: theta_ref must be in (0, 90) degrees");
  if (!(beta_deg >= 0.0 && beta_deg <= 90.0))
    throw Error("stage: beta must be in [0, 90] degrees");
  if (cap_db <= 0.0) throw Error("stage: cap_db must be > 0");
  double t_ref = t_ref_c;
  if (t_ref < material.t_valid_min_c || t_ref > material.t_valid_max_c)
    throw Error("stage: t_ref outside the material validity range");
}

double verdet_constant(const MaterialParams& m, double temperature_k) {
  m.validate();
  double t_c = temperature_k - kelvin_offset;
  if (t_c < m.t_valid_min_c || t_c > m.t_valid_max_c) {
    throw TemperatureOutOfRange(
        "temperature " + format_number(t_c) + " C outside '" + m.name +
        "' validity [" + format_number(m.t_valid_min_c) + ", " +
        format_number(m.t_valid_max_c) + "] C");
  }
  double denom = temperature_k - m.t_curie_k;
  return -m.a_coef * m.lambda0_m * m.lambda0_m / denom + m.b_coef / denom +
         m.c_coef;
}

double rotation_angle(const FaradayStage& s, double temperature_c) {
  s.validate();
  double v = verdet_constant(s.material, temperature_c + kelvin_offset);
  double v_ref = verdet_constant(s.material, s.t_ref_c + kelvin_offset);
  return s.theta_ref_deg * (v / v_ref);
}

MalusValue malus_isolation(double beta_deg, double theta_deg, double cap_db) {
  double c = std::cos((beta_deg + theta_deg) * deg_to_rad);
  double db = -10.0 * std::log10(c * c);
  if (!(db < cap_db)) return {cap_db, true};
  return {db, false};
}

double malus_insertion_loss(double beta_deg, double theta_deg) {
  double c = std::cos((beta_deg - theta_deg) * deg_to_rad);
  return -10.0 * std::log10(c * c);
}

MalusValue stage_isolation(const FaradayStage& s, double temperature_c) {
  return malus_isolation(s.beta_deg, rotation_angle(s, temperature_c),
                         s.cap_db);
}

double stage_insertion_loss(const FaradayStage& s, double temperature_c) {
  return malus_insertion_loss(s.beta_deg, rotation_angle(s, temperature_c));
}

std::vector<CurvePoint> isolation_curve(const FaradayStage& s, double t_min_c,
                                        double t_max_c, double step_c) {
  s.validate();
  if (step_c <= 0.0) throw Error("isolation_curve: step must be > 0");
  if (t_min_c > t_max_c) throw Error("isolation_curve: empty range");

  std::vector<CurvePoint> out;
  for (int i = 0;; ++i) {
    double t = t_min_c + i * step_c;
    if (t > t_max_c + step_c * 1e-9) break;
    double theta = rotation_angle(s, t);
    MalusValue iso = malus_isolation(s.beta_deg, theta, s.cap_db);
    out.push_back({t, iso.db, malus_insertion_loss(s.beta_deg, theta),
                   iso.capped});
  }
  return out;
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::string out = "temperature_c,isolation_db,insertion_loss_db,capped\n";
  for (const auto& p : curve) {
    out += format_number(p.temperature_c) + "," +
           format_number(p.isolation_db) + "," +
           format_number(p.insertion_loss_db) + "," +
           (p.capped ? "1" : "0") + "\n";
  }
  return out;
}

namespace {

// The curve shape depends only on (b - a*lambda0^2, c, t_curie); b and
// lambda0 stay at the guess and a is recovered afterwards.
struct FitSpace {
  FaradayStage stage;  // template; material swapped per evaluation
  std::vector<CalibrationAnchor> anchors;
  double b_fixed = 0.0;
  double lambda0_fixed = 0.0;

  MaterialParams assemble(const std::array<double, 3>& x) const {
    MaterialParams p = stage.material;
    p.a_coef = (b_fixed - x[0]) / (lambda0_fixed * lambda0_fixed);
    p.b_coef = b_fixed;
    p.c_coef = x[1];
    p.t_curie_k = x[2];
    return p;
  }

  double rms(const std::array<double, 3>& x) const {
    MaterialParams p = assemble(x);
    double lo_k = p.t_valid_min_c + kelvin_offset;
    double hi_k = p.t_valid_max_c + kelvin_offset;
    // Reject simplex points whose pole wanders into the validity window.
    if (p.t_curie_k > lo_k - 0.5 && p.t_curie_k < hi_k + 0.5) return 1e9;
    if (p.c_coef == 0.0 && p.b_coef == 0.0 && p.a_coef == 0.0) return 1e9;

    FaradayStage s = stage;
    s.material = p;
    double sum = 0.0;
    for (const auto& a : anchors) {
      double v;
      try {
        v = stage_isolation(s, a.temperature_c).db;
      } catch (const Error&) {
        return 1e9;
      }
      double diff = v - a.isolation_db;
      sum += diff * diff;
    }
    return std::sqrt(sum / anchors.size());
  }
};

std::array<double, 3> nelder_mead(const FitSpace& space,
                                  std::array<double, 3> x0,
                                  std::array<double, 3> scale,
                                  int iterations) {
  constexpr int n = 3;
  std::array<std::array<double, 3>, n + 1> simplex;
  simplex[0] = x0;
  for (int i = 0; i < n; ++i) {
    simplex[i + 1] = x0;
    simplex[i + 1][i] += scale[i];
  }
  std::array<double, n + 1> f;
  for (int i = 0; i <= n; ++i) f[i] = space.rms(simplex[i]);

  auto order = [&] {
    for (int i = 0; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        if (f[j] < f[i]) {
          std::swap(f[i], f[j]);
          std::swap(simplex[i], simplex[j]);
        }
  };

  for (int it = 0; it < iterations; ++it) {
    order();
    std::array<double, 3> centroid{};
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < 3; ++k) centroid[k] += simplex[i][k] / n;

    auto blend = [&](double coef) {
      std::array<double, 3> p;
      for (int k = 0; k < 3; ++k)
        p[k] = centroid[k] + coef * (centroid[k] - simplex[n][k]);
      return p;
    };

    auto refl = blend(1.0);
    double fr = space.rms(refl);
    if (fr < f[0]) {
      auto exp = blend(2.0);
      double fe = space.rms(exp);
      if (fe < fr) {
        simplex[n] = exp;
        f[n] = fe;
      } else {
        simplex[n] = refl;
        f[n] = fr;
      }
    } else if (fr < f[n - 1]) {
      simplex[n] = refl;
      f[n] = fr;
    } else {
      auto con = blend(-0.5);
      double fc = space.rms(con);
      if (fc < f[n]) {
        simplex[n] = con;
        f[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          for (int k = 0; k < 3; ++k)
            simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
          f[i] = space.rms(simplex[i]);
        }
      }
    }
  }
  order();
  return simplex[0];
}

}  // namespace

CalibrationResult calibrate_material(const std::vector<CalibrationAnchor>& anchors,
                                     const FaradayStage& stage_template,
                                     const MaterialParams& initial_guess,
                                     const CalibrationConfig& config) {
  if (anchors.size() < 3)
    throw Error("calibrate_material: need at least 3 anchors");
  initial_guess.validate();
  for (const auto& a : anchors) {
    if (a.temperature_c < initial_guess.t_valid_min_c ||
        a.temperature_c > initial_guess.t_valid_max_c)
      throw Error("calibrate_material: anchor at " +
                  format_number(a.temperature_c) +
                  " C outside the validity range");
  }

  FitSpace space;
  space.stage = stage_template;
  space.stage.material = initial_guess;
  space.anchors = anchors;
  space.b_fixed = initial_guess.b_coef;
  space.lambda0_fixed = initial_guess.lambda0_m;

  std::array<double, 3> x = {
      initial_guess.b_coef -
          initial_guess.a_coef * initial_guess.lambda0_m * initial_guess.lambda0_m,
      initial_guess.c_coef,
      initial_guess.t_curie_k,
  };
  double initial_rms = space.rms(x);

  std::array<double, 3> scale = {std::abs(x[0]) * 0.2 + 100.0,
                                 std::abs(x[1]) * 0.2 + 10.0, 15.0};
  for (int round = 0; round <= config.restarts; ++round) {
    x = nelder_mead(space, x, scale, config.max_iterations);
    for (double& s : scale) s *= 0.1;
  }
  double final_rms = space.rms(x);

  if (final_rms > config.tolerance_db && final_rms >= initial_rms) {
    throw CalibrationDiverged(
        "calibration failed to improve on the initial guess (rms " +
        format_number(initial_rms) + " -> " + format_number(final_rms) +
        " dB)");
  }

  CalibrationResult result;
  result.params = space.assemble(x);
  result.params.name = initial_guess.name;
  result.residual_db = final_rms;
  result.poor = final_rms > config.tolerance_db;
  return result;
}

MaterialParams load_material(const std::string& path) {
  auto kv = detail::parse_kv(detail::read_text_file(path), path);
  MaterialParams m;
  std::set<std::string> seen;
  for (const auto& [key, value] : kv) {
    if (!seen.insert(key).second)
      throw ParseError(path + ": duplicate key '" + key + "'");
    if (key == "name") {
      m.name = value;
    } else if (key == "a_coef") {
      m.a_coef = detail::to_double(value, path);
    } else if (key == "b_coef") {
      m.b_coef = detail::to_double(value, path);
    } else if (key == "c_coef") {
      m.c_coef = detail::to_double(value, path);
    } else if (key == "lambda0_m") {
      m.lambda0_m = detail::to_double(value, path);
    } else if (key == "t_curie_k") {
      m.t_curie_k = detail::to_double(value, path);
    } else if (key == "t_valid_min_c") {
      m.t_valid_min_c = detail::to_double(value, path);
    } else if (key == "t_valid_max_c") {
      m.t_valid_max_c = detail::to_double(value, path);
    } else {
      throw ParseError(path + ": unknown key '" + key + "'");
    }
  }
  for (const char* required : {"name", "a_coef", "b_coef", "c_coef",
                               "lambda0_m", "t_curie_k"}) {
    if (!seen.count(required))
      throw ParseError(path + ": missing key '" + std::string(required) + "'");
  }
  try {
    m.validate();
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return m;
}

void save_material(const MaterialParams& m, const std::string& path) {
  m.validate();
  auto exact = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << "name = " << m.name << "\n"
      << "a_coef = " << exact(m.a_coef) << "\n"
      << "b_coef = " << exact(m.b_coef) << "\n"
      << "c_coef = " << exact(m.c_coef) << "\n"
      << "lambda0_m = " << exact(m.lambda0_m) << "\n"
      << "t_curie_k = " << exact(m.t_curie_k) << "\n"
      << "t_valid_min_c = " << exact(m.t_valid_min_c) << "\n"
      << "t_valid_max_c = " << exact(m.t_valid_max_c) << "\n";
}

}  // namespace isosim::magneto_optics
