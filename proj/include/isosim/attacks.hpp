#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isosim/components.hpp"

namespace isosim::attacks {

// Attenuation chain from the quantum channel to the protected laser. The
// sacrificial record is the first component injected light meets; nothing it
// provides beyond its residual floor may be credited to the budget.
struct SourceArchitecture {
  components::DegradationRecord sacrificial;
  std::vector<double> downstream_isolation_db;  // attenuator, extra isolators
  double laser_builtin_isolation_db = 30.0;
  double seeding_threshold_w = 1e-7;
  double damage_threshold_w = 0.190;
  std::optional<double> fiber_loss_slope_db_per_km;

  void validate() const;
};

enum class Verdict {
  safe,
  denial_of_service,
  compromised,
  attack_fails,
  attack_succeeds,
};

std::string to_string(Verdict v);

// Every numeric input of the verdict comparison is carried along, so the
// verdict can be re-derived from the report alone.
struct AttackReport {
  std::string attack;
  double injected_power_w = 0.0;
  double residual_isolation_db = 0.0;
  double power_after_sacrificial_w = 0.0;
  double downstream_isolation_db = 0.0;  // installed sum, laser built-in included
  double power_at_target_w = 0.0;
  double threshold_w = 0.0;
  double required_extra_isolation_db = 0.0;
  double attenuator_bound_db = 0.0;  // required extra net of the built-in stage
  double margin_db = 0.0;            // 10 log10(threshold / power at target)
  bool sacrificial_destroyed = false;
  Verdict verdict = Verdict::safe;
};

enum class ResidualMode {
  worst_case,  // residual floor over the whole degradation curve
  at_power,    // isolation at the injected power; may end in denial of service
};

// Power budget of light seeding the source laser. Success needs the power at
// the cavity to reach the seeding threshold; the comparison is >= so a
// boundary case counts for the attacker.
AttackReport laser_seeding_budget(const SourceArchitecture& arch,
                                  double p_inject_w,
                                  ResidualMode mode = ResidualMode::worst_case);

// Destruction shields: a dead sacrificial stage is denial of service, not
// leakage. Otherwise the at-power transmitted light must stay strictly below
// the downstream damage threshold to be safe.
AttackReport laser_damage_guard(const SourceArchitecture& arch,
                                double p_inject_w, double exposure_s);

struct TrojanBudget {
  double multiplier = 1.0;  // 10^(delta/10)
  double orders = 0.0;      // delta/10
};

TrojanBudget trojan_horse_budget(double delta_isolation_db);

double distance_penalty(double delta_isolation_db, double slope_db_per_km);

// Key-value architecture file; the sacrificial fixture path resolves
// relative to the architecture file's own directory first.
SourceArchitecture load_architecture(const std::string& path);

}  // namespace isosim::attacks
