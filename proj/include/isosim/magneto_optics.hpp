#pragma once

#include <string>
#include <vector>

namespace isosim::magneto_optics {

// Coefficients of the two-pole Verdet model
//   V(T) = -a*lambda0^2 / (T - Tw) + b / (T - Tw) + c,   T in kelvin.
// The pole Tw must sit strictly outside the validity window; evaluation
// outside that window is an error, not an extrapolation.
struct MaterialParams {
  std::string name;
  double a_coef = 0.0;      // rad K T^-1 m^-3
  double b_coef = 0.0;      // rad K T^-1 m^-1
  double c_coef = 0.0;      // rad T^-1 m^-1
  double lambda0_m = 0.0;   // dominant-transition wavelength
  double t_curie_k = 0.0;
  double t_valid_min_c = -20.0;
  double t_valid_max_c = 175.0;

  void validate() const;
};

// One rotator+analyzer stage. The field-times-length product of the rotator
// is folded into theta_ref, so temperature enters only through V(T)/V(t_ref).
struct FaradayStage {
  MaterialParams material;
  double theta_ref_deg = 44.43;
  double t_ref_c = 25.0;
  double beta_deg = 45.0;
  double cap_db = 120.0;   // stands in for infinite extinction

  void validate() const;
};

struct MalusValue {
  double db = 0.0;
  bool capped = false;
};

struct CurvePoint {
  double temperature_c = 0.0;
  double isolation_db = 0.0;
  double insertion_loss_db = 0.0;
  bool capped = false;
};

double verdet_constant(const MaterialParams& m, double temperature_k);
double rotation_angle(const FaradayStage& s, double temperature_c);

MalusValue malus_isolation(double beta_deg, double theta_deg,
                           double cap_db = 120.0);
double malus_insertion_loss(double beta_deg, double theta_deg);

MalusValue stage_isolation(const FaradayStage& s, double temperature_c);
double stage_insertion_loss(const FaradayStage& s, double temperature_c);

std::vector<CurvePoint> isolation_curve(const FaradayStage& s, double t_min_c,
                                        double t_max_c, double step_c);
std::string curve_csv(const std::vector<CurvePoint>& curve);

struct CalibrationAnchor {
  double temperature_c = 0.0;
  double isolation_db = 0.0;
};

struct CalibrationConfig {
  double tolerance_db = 0.5;  // rms anchor error above this flags `poor`
  int max_iterations = 400;
  int restarts = 3;
};

struct CalibrationResult {
  MaterialParams params;
  double residual_db = 0.0;
  bool poor = false;
};

// Fits (b - a*lambda0^2, c, t_curie) by simplex descent; b and lambda0 are
// held at the initial guess since only the combination is identifiable.
// Throws CalibrationDiverged when the search cannot improve on the guess.
CalibrationResult calibrate_material(const std::vector<CalibrationAnchor>& anchors,
                                     const FaradayStage& stage_template,
                                     const MaterialParams& initial_guess,
                                     const CalibrationConfig& config = {});

MaterialParams load_material(const std::string& path);
void save_material(const MaterialParams& m, const std::string& path);

}  // namespace isosim::magneto_optics
