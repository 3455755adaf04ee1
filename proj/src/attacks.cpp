#include "isosim/attacks.hpp"

#include <cmath>
#include <set>

#include "isosim/errors.hpp"
#include "isosim/test_bench.hpp"
#include "isosim/units.hpp"
#include "kv_util.hpp"

namespace isosim::attacks {

void SourceArchitecture::validate() const {
  sacrificial.validate();
  for (double db : downstream_isolation_db)
    if (db < 0.0) throw Error("architecture: negative downstream isolation");
  if (laser_builtin_isolation_db < 0.0)
    throw Error("architecture: negative built-in isolation");
  if (seeding_threshold_w <= 0.0 || damage_threshold_w <= 0.0)
    throw Error("architecture: thresholds must be > 0");
  if (fiber_loss_slope_db_per_km && *fiber_loss_slope_db_per_km <= 0.0)
    throw Error("architecture: fiber loss slope must be > 0");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::safe: return "safe";
    case Verdict::denial_of_service: return "denial_of_service";
    case Verdict::compromised: return "compromised";
    case Verdict::attack_fails: return "attack_fails";
    case Verdict::attack_succeeds: return "attack_succeeds";
  }
  throw Error("unreachable");
}

namespace {

double installed_isolation(const SourceArchitecture& arch) {
  double sum = arch.laser_builtin_isolation_db;
  for (double db : arch.downstream_isolation_db) sum += db;
  return sum;
}

}  // namespace

AttackReport laser_seeding_budget(const SourceArchitecture& arch,
                                  double p_inject_w, ResidualMode mode) {
  arch.validate();
  if (p_inject_w <= 0.0) throw Error("seeding budget: inject power must be > 0");

  AttackReport rep;
  rep.attack = "laser_seeding";
  rep.injected_power_w = p_inject_w;
  rep.threshold_w = arch.seeding_threshold_w;
  rep.residual_isolation_db =
      mode == ResidualMode::worst_case
          ? components::min_isolation(arch.sacrificial)
          : components::isolation_at_power(arch.sacrificial, p_inject_w);
  rep.power_after_sacrificial_w =
      components::transmit({rep.residual_isolation_db}, p_inject_w);
  rep.downstream_isolation_db = installed_isolation(arch);
  rep.power_at_target_w =
      rep.power_after_sacrificial_w * db_to_fraction(rep.downstream_isolation_db);
  // Everything past the sacrificial stage counts against the requirement;
  // the sacrificial stage itself never does.
  rep.required_extra_isolation_db =
      10.0 * std::log10(rep.power_after_sacrificial_w / arch.seeding_threshold_w);
  rep.attenuator_bound_db =
      rep.required_extra_isolation_db - arch.laser_builtin_isolation_db;
  rep.margin_db = 10.0 * std::log10(rep.threshold_w / rep.power_at_target_w);
  rep.verdict = rep.power_at_target_w >= rep.threshold_w
                    ? Verdict::attack_succeeds
                    : Verdict::attack_fails;
  return rep;
}

AttackReport laser_damage_guard(const SourceArchitecture& arch,
                                double p_inject_w, double exposure_s) {
  arch.validate();
  if (p_inject_w < 0.0) throw Error("damage guard: negative inject power");

  AttackReport rep;
  rep.attack = "laser_damage";
  rep.injected_power_w = p_inject_w;
  rep.threshold_w = arch.damage_threshold_w;
  rep.downstream_isolation_db = installed_isolation(arch);

  if (components::is_destroyed(arch.sacrificial, p_inject_w, exposure_s)) {
    // A burnt sacrificial stage breaks the line; nothing downstream sees
    // the light any more.
    rep.sacrificial_destroyed = true;
    rep.residual_isolation_db = components::destroyed_insertion_loss_db;
    rep.power_after_sacrificial_w =
        components::transmit({rep.residual_isolation_db}, p_inject_w);
    rep.power_at_target_w =
        rep.power_after_sacrificial_w *
        db_to_fraction(rep.downstream_isolation_db);
    rep.margin_db =
        10.0 * std::log10(rep.threshold_w / rep.power_after_sacrificial_w);
    rep.verdict = Verdict::denial_of_service;
    return rep;
  }

  rep.residual_isolation_db =
      components::isolation_at_power(arch.sacrificial, p_inject_w);
  rep.power_after_sacrificial_w =
      components::transmit({rep.residual_isolation_db}, p_inject_w);
  rep.power_at_target_w =
      rep.power_after_sacrificial_w * db_to_fraction(rep.downstream_isolation_db);
  rep.margin_db =
      10.0 * std::log10(rep.threshold_w / rep.power_after_sacrificial_w);
  rep.verdict = rep.power_after_sacrificial_w < rep.threshold_w
                    ? Verdict::safe
                    : Verdict::compromised;
  return rep;
}

TrojanBudget trojan_horse_budget(double delta_isolation_db) {
  if (delta_isolation_db < 0.0)
    throw Error("trojan budget: isolation change must be >= 0");
  TrojanBudget b;
  b.orders = delta_isolation_db / 10.0;
  b.multiplier = std::pow(10.0, b.orders);
  return b;
}

double distance_penalty(double delta_isolation_db, double slope_db_per_km) {
  if (slope_db_per_km <= 0.0)
    throw Error("distance penalty: slope must be > 0");
  if (delta_isolation_db < 0.0)
    throw Error("distance penalty: isolation change must be >= 0");
  return delta_isolation_db / slope_db_per_km;
}

SourceArchitecture load_architecture(const std::string& path) {
  auto kv = detail::parse_kv(detail::read_text_file(path), path);
  SourceArchitecture arch;
  std::set<std::string> seen;
  bool have_fixture = false;
  for (const auto& [key, value] : kv) {
    if (key != "downstream_isolation_db" && !seen.insert(key).second)
      throw ParseError(path + ": duplicate key '" + key + "'");
    if (key == "sacrificial_fixture") {
      std::string fixture = value;
      if (!detail::file_exists(fixture))
        fixture = detail::dirname(path) + "/" + value;
      arch.sacrificial = test_bench::ingest_fixture(fixture);
      have_fixture = true;
    } else if (key == "downstream_isolation_db") {
      // May repeat, one entry per installed stage.
      arch.downstream_isolation_db.push_back(detail::to_double(value, path));
    } else if (key == "laser_builtin_isolation_db") {
      arch.laser_builtin_isolation_db = detail::to_double(value, path);
    } else if (key == "seeding_threshold_w") {
      arch.seeding_threshold_w = detail::to_double(value, path);
    } else if (key == "damage_threshold_w") {
      arch.damage_threshold_w = detail::to_double(value, path);
    } else if (key == "fiber_loss_slope_db_per_km") {
      arch.fiber_loss_slope_db_per_km = detail::to_double(value, path);
    } else {
      throw ParseError(path + ": unknown key '" + key + "'");
    }
  }
  if (!have_fixture)
    throw ParseError(path + ": missing key 'sacrificial_fixture'");
  try {
    arch.validate();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return arch;
}

}  // namespace isosim::attacks
