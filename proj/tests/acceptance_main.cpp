// Acceptance gate for the isosim library. Each criterion prints exactly one
// PASS or FAIL line; the process exit code is the number of failed criteria,
// so a green run exits 0.
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "isosim/attacks.hpp"
#include "isosim/components.hpp"
#include "isosim/errors.hpp"
#include "isosim/magneto_optics.hpp"
#include "isosim/test_bench.hpp"
#include "isosim/units.hpp"

#ifndef ISOSIM_DATA_DIR
#error "build must define ISOSIM_DATA_DIR"
#endif

namespace mo = isosim::magneto_optics;
namespace co = isosim::components;
namespace tb = isosim::test_bench;
namespace at = isosim::attacks;

namespace {

int g_failed_criteria = 0;

std::string data_path(const std::string& rel) {
  return std::string(ISOSIM_DATA_DIR) + "/" + rel;
}

class Criterion {
 public:
  void expect(bool ok, const std::string& detail) {
    if (!ok && first_failure_.empty()) first_failure_ = detail;
    ok_ = ok_ && ok;
  }

  void expect_eq(double got, double want, const std::string& what) {
    expect(got == want, describe(got, want, 0.0, what));
  }

  void expect_near(double got, double want, double tol,
                   const std::string& what) {
    expect(std::fabs(got - want) <= tol, describe(got, want, tol, what));
  }

  // tolerance scaled by the magnitude of the expected value
  void expect_rel(double got, double want, double rel,
                  const std::string& what) {
    double tol = rel * std::max(1.0, std::fabs(want));
    expect(std::fabs(got - want) <= tol, describe(got, want, tol, what));
  }

  bool ok() const { return ok_; }
  const std::string& first_failure() const { return first_failure_; }

 private:
  static std::string describe(double got, double want, double tol,
                              const std::string& what) {
    char buf[224];
    std::snprintf(buf, sizeof buf, "%s: got %.17g, want %.17g (tol %g)",
                  what.c_str(), got, want, tol);
    return buf;
  }

  bool ok_ = true;
  std::string first_failure_;
};

void run_criterion(const std::string& name,
                   const std::function<void(Criterion&)>& body) {
  Criterion c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("unexpected exception: ") + e.what());
  }
  if (c.ok()) {
    std::printf("PASS: %s\n", name.c_str());
  } else {
    std::printf("FAIL: %s [%s]\n", name.c_str(), c.first_failure().c_str());
    ++g_failed_criteria;
  }
}

void criterion_malus_anchor(Criterion& c) {
  c.expect_near(mo::malus_isolation(45.0, 44.43).db, 40.0, 0.1,
                "isolation at 44.43 deg");
  c.expect_near(mo::malus_isolation(45.0, 45.57).db, 40.0, 0.1,
                "isolation at 45.57 deg");
  c.expect_near(mo::malus_insertion_loss(45.0, 44.43), 0.0, 0.01,
                "insertion loss at 44.43 deg");
}

void criterion_seeding_budget(Criterion& c) {
  auto arch = at::load_architecture(data_path("arch/pm_source.txt"));
  auto rep = at::laser_seeding_budget(arch, 10.0);
  c.expect_near(rep.power_after_sacrificial_w, 0.1905, 0.01 * 0.1905,
                "power behind the sacrificial isolator");
  c.expect_near(rep.required_extra_isolation_db, 62.8, 0.2,
                "required extra isolation");
  c.expect_near(rep.attenuator_bound_db, 32.8, 0.2,
                "attenuator bound net of the laser isolator");
  c.expect(rep.verdict == at::Verdict::attack_succeeds,
           "10 W injection must defeat the reference architecture");
}

void criterion_trojan_multiplier(Criterion& c) {
  auto b = at::trojan_horse_budget(34.5);
  c.expect_rel(b.multiplier, 2818.382931264455, 1e-9,
               "multiplier for a 34.5 dB gap");
  c.expect_eq(b.orders, 3.45, "orders of magnitude for a 34.5 dB gap");
  c.expect_eq(at::trojan_horse_budget(0.0).multiplier, 1.0,
              "zero gap leaves the budget unchanged");
}

struct IsolatorExpect {
  const char* fixture;
  double initial_db;
  double min_db;
  double min_power_w;
  double min_exposure_s;
  double decrease_db;
  std::optional<co::Breakdown> damage;
};

void criterion_isolator_table(Criterion& c) {
  const IsolatorExpect rows[] = {
      {"iso_pm_1.csv", 53.7, 21.8, 6.7, 360.0, 31.9, co::Breakdown{6.7, 900.0}},
      {"iso_pm_2.csv", 37.0, 17.2, 3.37, 820.0, 19.8, std::nullopt},
      {"iso_3_1.csv", 58.1, 37.1, 3.3, 260.0, 21.0, std::nullopt},
      {"iso_3_2.csv", 62.1, 27.6, 3.4, 800.0, 34.5, co::Breakdown{3.8, 90.0}},
      {"iso_4.csv", 57.6, 42.4, 2.2, 200.0, 15.2, std::nullopt},
  };
  for (const auto& row : rows) {
    auto rec = tb::ingest_fixture(data_path(std::string("fixtures/") + row.fixture));
    auto log = tb::run_procedure(rec);
    const auto& s = log.summary;
    std::string tag = row.fixture;
    c.expect_eq(s.initial_isolation_db, row.initial_db, tag + " initial");
    c.expect_eq(s.min_isolation_db, row.min_db, tag + " minimum");
    c.expect_eq(s.min_isolation_power_w, row.min_power_w, tag + " min power");
    c.expect_eq(s.min_isolation_exposure_s, row.min_exposure_s,
                tag + " min exposure");
    c.expect_rel(s.max_decrease_db, row.decrease_db, 1e-9, tag + " decrease");
    c.expect(s.damage.has_value() == row.damage.has_value(),
             tag + ": damage presence mismatch");
    if (s.damage && row.damage) {
      c.expect_eq(s.damage->power_w, row.damage->power_w, tag + " damage power");
      c.expect_eq(s.damage->exposure_s, row.damage->exposure_s,
                  tag + " damage exposure");
    }
  }
}

void criterion_circulator_table(Criterion& c) {
  struct PairExpect {
    const char* stem;
    int from, to;
    double initial_db;
    double min_db;
    double min_power_w;
    double decrease_db;
  };
  const PairExpect rows[] = {
      {"cir_1", 2, 1, 61.4, 34.7, 3.6, 26.7},
      {"cir_1", 3, 2, 60.6, 32.2, 3.6, 28.4},
      {"cir_2", 2, 1, 67.0, 38.3, 4.6, 28.7},
      {"cir_2", 3, 2, 65.7, 32.3, 4.6, 33.4},
      {"cir_pm_3", 3, 2, 27.0, 6.4, 0.7, 20.6},
  };
  for (const auto& row : rows) {
    auto m = co::load_circulator(row.stem, data_path("fixtures"));
    std::string tag = std::string(row.stem) + " " + std::to_string(row.from) +
                      "->" + std::to_string(row.to);
    auto it = m.pairs.find({row.from, row.to});
    c.expect(it != m.pairs.end(), tag + ": pair missing");
    if (it == m.pairs.end()) continue;
    auto log = tb::run_procedure(it->second.record);
    c.expect_eq(log.summary.initial_isolation_db, row.initial_db,
                tag + " initial");
    c.expect_eq(log.summary.min_isolation_db, row.min_db, tag + " minimum");
    c.expect_eq(log.summary.min_isolation_power_w, row.min_power_w,
                tag + " min power");
    c.expect_rel(log.summary.max_decrease_db, row.decrease_db, 1e-9,
                 tag + " decrease");
  }

  // the 2->1 path of CIR PM 3 was only characterized unilluminated
  auto pm3 = co::load_circulator("cir_pm_3", data_path("fixtures"));
  c.expect_eq(co::circulator_isolation(pm3, 2, 1, 0.0), 37.0,
              "cir_pm_3 2->1 initial");
  bool threw = false;
  try {
    co::circulator_isolation(pm3, 2, 1, 0.5);
  } catch (const isosim::UndefinedPath&) {
    threw = true;
  }
  c.expect(threw, "cir_pm_3 2->1 must be undefined under power");

  // damage column: CIR 2 dies only when the hold is stretched to 910 s,
  // CIR PM 3 dies during the standard procedure
  auto cir2 = co::load_circulator("cir_2", data_path("fixtures"));
  tb::ProcedureConfig stretched;
  stretched.extended_exposure_s = 910.0;
  auto destroyed = tb::run_procedure(cir2.pairs.at({2, 1}).record, stretched);
  c.expect(destroyed.summary.damage.has_value(), "cir_2 damage at 910 s hold");
  if (destroyed.summary.damage) {
    c.expect_eq(destroyed.summary.damage->power_w, 4.6, "cir_2 damage power");
    c.expect_eq(destroyed.summary.damage->exposure_s, 910.0,
                "cir_2 damage exposure");
  }
  auto pm3_log = tb::run_procedure(pm3.pairs.at({3, 2}).record);
  c.expect(pm3_log.summary.damage.has_value(), "cir_pm_3 damage");
  if (pm3_log.summary.damage) {
    c.expect_eq(pm3_log.summary.damage->power_w, 0.9, "cir_pm_3 damage power");
    c.expect_eq(pm3_log.summary.damage->exposure_s, 90.0,
                "cir_pm_3 damage exposure");
  }

  // the 3->1 path stays at its unilluminated value at any power
  auto cir1 = co::load_circulator("cir_1", data_path("fixtures"));
  double base_31 = co::circulator_isolation(cir1, 3, 1, 0.0);
  for (double p : {0.5, 2.2, 4.8})
    c.expect_eq(co::circulator_isolation(cir1, 3, 1, p), base_31,
                "cir_1 3->1 constant");
  double base_31_cir2 = co::circulator_isolation(cir2, 3, 1, 0.0);
  for (double p : {1.0, 4.6})
    c.expect_eq(co::circulator_isolation(cir2, 3, 1, p), base_31_cir2,
                "cir_2 3->1 constant");
}

void criterion_material_fit(Criterion& c) {
  mo::MaterialParams guess;
  guess.name = "generic";
  guess.b_coef = 3200.0;
  guess.lambda0_m = 4.4999999999999998e-07;
  guess.a_coef = (3200.0 - 1000.0) / (guess.lambda0_m * guess.lambda0_m);
  guess.c_coef = 100.0;
  guess.t_curie_k = 490.0;

  const std::vector<mo::CalibrationAnchor> anchors = {
      {25.0, 40.0}, {70.0, 30.0}, {175.0, 15.0}};
  mo::FaradayStage tpl;
  auto fit = mo::calibrate_material(anchors, tpl, guess);
  mo::FaradayStage fitted;
  fitted.material = fit.params;
  for (const auto& a : anchors) {
    c.expect_near(mo::stage_isolation(fitted, a.temperature_c).db,
                  a.isolation_db, 2.0,
                  "fitted isolation at " + std::to_string(a.temperature_c));
  }

  mo::FaradayStage biyig;
  biyig.material = mo::load_material(data_path("materials/biyig.txt"));
  double min_iso = 1e9;
  for (double t = -20.0; t <= 180.0 + 1e-9; t += 0.25)
    min_iso = std::min(min_iso, mo::stage_isolation(biyig, t).db);
  c.expect(min_iso > 40.0, "biyig isolation must hold 40 dB across validity");

  auto max_deviation = [](const mo::MaterialParams& m) {
    mo::FaradayStage s;
    s.material = m;
    double worst = 0.0;
    for (double t = 25.0; t <= 175.0 + 1e-9; t += 1.0)
      worst = std::max(worst,
                       std::fabs(mo::rotation_angle(s, t) - s.theta_ref_deg));
    return worst;
  };
  double dev_tgg = max_deviation(mo::load_material(data_path("materials/tgg.txt")));
  double dev_yig = max_deviation(mo::load_material(data_path("materials/yig.txt")));
  double dev_biyig = max_deviation(biyig.material);
  c.expect(dev_tgg > dev_yig, "tgg must drift more than yig");
  c.expect(dev_yig > dev_biyig, "yig must drift more than biyig");
}

void criterion_recovery(Criterion& c) {
  double tau = co::fit_tau(272.0, 44.0, 400.0, 25.0);
  c.expect_near(tau, 156.0, 15.6, "cool-down time constant");

  auto rec = tb::ingest_fixture(data_path("fixtures/cir_1_2to1.csv"));
  auto thermal = co::ThermalResponse::from_record(rec, tau);
  double after_400 = co::cool_down(thermal, 272.0, 400.0);
  c.expect(after_400 <= 45.0, "temperature after 400 s of cooling");
  c.expect(co::recovered_isolation(co::IsolationVsTemperature{}, after_400) >=
               55.0,
           "isolation recovered after 400 s");
}

void criterion_random_invariants(Criterion& c) {
  {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> len(1, 6);
    std::uniform_real_distribution<double> iso(0.0, 60.0);
    std::uniform_real_distribution<double> power(1e-3, 10.0);
    for (int i = 0; i < 10000 && c.ok(); ++i) {
      std::vector<double> chain(static_cast<size_t>(len(rng)));
      double sum = 0.0;
      for (auto& v : chain) {
        v = iso(rng);
        sum += v;
      }
      c.expect_rel(co::chain_isolation(chain), sum, 1e-9, "chain additivity");
      double p = power(rng);
      double want = p * std::pow(10.0, -sum / 10.0);
      double got = co::transmit(chain, p);
      c.expect(std::fabs(got - want) <= 1e-9 * want + 1e-30,
               "chain transmission");
    }
  }
  {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> launched(1e-3, 10.0);
    std::uniform_real_distribution<double> iso(0.0, 80.0);
    std::uniform_real_distribution<double> il(0.0, 3.0);
    tb::SetupModel setup;
    for (int i = 0; i < 10000 && c.ok(); ++i) {
      double want_iso = iso(rng), want_il = il(rng);
      auto readings = tb::simulate_meters(setup, launched(rng), want_iso, want_il);
      auto est = tb::estimate_from_readings(setup, readings);
      c.expect_rel(est.isolation_db, want_iso, 1e-12, "meter isolation");
      c.expect_rel(est.insertion_loss_db, want_il, 1e-12, "meter insertion loss");
    }
  }
  {
    std::mt19937 rng(999);
    std::uniform_real_distribution<double> theta(-30.0, 80.0);
    for (int i = 0; i < 10000 && c.ok(); ++i) {
      double t = theta(rng);
      double iso = mo::malus_isolation(45.0, t, 1e9).db;
      double il = mo::malus_insertion_loss(45.0, t);
      double total =
          std::pow(10.0, -iso / 10.0) + std::pow(10.0, -il / 10.0);
      c.expect(std::fabs(total - 1.0) <= 1e-12,
               "crossed and through arms must sum to unity");
    }
  }
  {
    std::mt19937 rng(555);
    std::uniform_real_distribution<double> initial(20.0, 70.0);
    std::uniform_real_distribution<double> frac(0.1, 0.9);
    std::uniform_real_distribution<double> extra(0.0, 40.0);
    std::uniform_real_distribution<double> thresh(1e-3, 1.0);
    std::uniform_real_distribution<double> inject(0.01, 2.5);
    std::uniform_real_distribution<double> hold(0.0, 1200.0);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int i = 0; i < 1000 && c.ok(); ++i) {
      at::SourceArchitecture arch;
      arch.sacrificial.spec.model_id = "synthetic";
      double top = initial(rng);
      arch.sacrificial.points.push_back({0.0, top, 0.5, {}, {}});
      arch.sacrificial.points.push_back({2.0, top * frac(rng), 0.6, {}, {}});
      if (coin(rng))
        arch.sacrificial.breakdown = co::Breakdown{2.0, hold(rng) + 1.0};
      arch.downstream_isolation_db = {extra(rng)};
      arch.laser_builtin_isolation_db = extra(rng);
      arch.damage_threshold_w = thresh(rng);
      double p = inject(rng), t = hold(rng);

      auto guard = at::laser_damage_guard(arch, p, t);
      at::Verdict re = guard.sacrificial_destroyed
                           ? at::Verdict::denial_of_service
                           : (guard.power_after_sacrificial_w <
                                      guard.threshold_w
                                  ? at::Verdict::safe
                                  : at::Verdict::compromised);
      c.expect(guard.verdict == re, "damage verdict must be recomputable");

      auto seed = at::laser_seeding_budget(arch, p);
      at::Verdict re2 = seed.power_at_target_w >= seed.threshold_w
                            ? at::Verdict::attack_succeeds
                            : at::Verdict::attack_fails;
      c.expect(seed.verdict == re2, "seeding verdict must be recomputable");
    }
  }
}

}  // namespace

int main() {
  run_criterion("malus isolation anchor at 40 dB", criterion_malus_anchor);
  run_criterion("laser seeding budget behind the sacrificial isolator",
                criterion_seeding_budget);
  run_criterion("trojan-horse power multiplier", criterion_trojan_multiplier);
  run_criterion("isolator degradation table replay", criterion_isolator_table);
  run_criterion("circulator degradation table replay",
                criterion_circulator_table);
  run_criterion("material calibration and drift ordering",
                criterion_material_fit);
  run_criterion("cool-down and isolation recovery", criterion_recovery);
  run_criterion("randomized invariant suites", criterion_random_invariants);

  std::printf("%d of 8 acceptance criteria failed\n", g_failed_criteria);
  return g_failed_criteria;
}
