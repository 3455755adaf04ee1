#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isosim/magneto_optics.hpp"

namespace isosim::components {

// Destroyed components block both directions; the measured statement is only
// "larger than 80 dB", this is the finite stand-in used everywhere.
inline constexpr double destroyed_insertion_loss_db = 100.0;

enum class ComponentKind { isolator, circulator };

struct ComponentSpec {
  std::string model_id;
  ComponentKind kind = ComponentKind::isolator;
  double spec_min_isolation_db = 0.0;
  double max_operating_power_w = 0.5;
  double temp_min_c = -5.0;
  double temp_max_c = 70.0;
  double initial_insertion_loss_db = 0.0;
  double initial_isolation_db = 0.0;
};

struct DegradationPoint {
  double power_w = 0.0;
  double isolation_db = 0.0;
  double insertion_loss_db = 0.0;
  std::optional<double> temp_c;      // absent when no thermal data was taken
  std::optional<double> exposure_s;  // recorded reading time at this power
};

struct Breakdown {
  double power_w = 0.0;
  double exposure_s = 0.0;
};

struct PermanentDrop {
  double above_power_w = 0.0;
  double decrease_db = 0.0;
};

struct DegradationRecord {
  ComponentSpec spec;
  std::vector<DegradationPoint> points;  // strictly increasing power, row 0 at 0 W
  std::optional<Breakdown> breakdown;
  std::optional<PermanentDrop> permanent;
  std::optional<double> initial_exposure_s;  // first-step hold override

  void validate() const;
};

// Piecewise-linear in power, clamped at both ends, never below 0 dB.
// Throws ComponentDestroyed strictly above the breakdown power; at the
// breakdown power itself the pre-failure reading is still a valid answer.
double isolation_at_power(const DegradationRecord& r, double power_w);
double insertion_loss_at_power(const DegradationRecord& r, double power_w);

bool is_destroyed(const DegradationRecord& r, double power_w, double exposure_s);

// Worst-case residual floor over the whole measured curve.
double min_isolation(const DegradationRecord& r);

// Baseline after any exposure above the recorded permanent-drop power.
double permanent_isolation(const DegradationRecord& r);

double chain_isolation(const std::vector<double>& stages_db);
double transmit(const std::vector<double>& chain_db, double p_in_w);

// Port-pair matrix of a three-port circulator. Isolation paths are 2->1,
// 3->2 and 3->1; the forward insertion loss of 1->2 (2->3) rides along in
// the 2->1 (3->2) record's insertion-loss column.
struct CirculatorMatrix {
  enum class PairKind { curve, constant, initial_only };

  struct PairEntry {
    PairKind kind = PairKind::curve;
    DegradationRecord record;
  };

  std::string model_id;
  std::map<std::pair<int, int>, PairEntry> pairs;
};

// Throws UndefinedPath for pairs that were never characterized under power.
// The 3->1 path reads as its 0 W value regardless of power.
double circulator_isolation(const CirculatorMatrix& m, int from, int to,
                            double power_w);
double circulator_insertion_loss(const CirculatorMatrix& m, int from, int to,
                                 double power_w);

// Reads <stem>_2to1.csv, <stem>_3to2.csv, <stem>_3to1.csv from a directory;
// missing files leave the pair undefined, single-row files mark it untested.
CirculatorMatrix load_circulator(const std::string& stem,
                                 const std::string& fixtures_dir);

struct ThermalResponse {
  double ambient_c = 25.0;
  std::vector<std::pair<double, double>> heating;  // (power W, steady temp C)
  double tau_s = 0.0;

  // Heating curve from the record's temperature column; throws when the
  // record has no temperature data or the curve decreases.
  static ThermalResponse from_record(const DegradationRecord& r, double tau_s);
};

double surface_temperature(const ThermalResponse& t, double power_w);
double cool_down(const ThermalResponse& t, double t0_c, double elapsed_s);

// Time constant of an exponential relaxation passing through (0, t0) and
// (elapsed, t1) on its way to ambient.
double fit_tau(double t0_c, double t1_c, double elapsed_s, double ambient_c);

// Linear temperature-to-isolation association between two measured
// endpoints, clamped outside them.
struct IsolationVsTemperature {
  double hot_temp_c = 272.0;
  double hot_isolation_db = 35.0;
  double cool_temp_c = 44.0;
  double cool_isolation_db = 55.0;
};

double recovered_isolation(const IsolationVsTemperature& map, double temp_c);
double recovered_isolation(const magneto_optics::FaradayStage& stage,
                           double temp_c);

}  // namespace isosim::components
