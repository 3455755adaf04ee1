// isosim: fiber-isolator degradation and QKD source attack-budget toolbox.
//
// Exit codes: 0 success, 2 usage error, 3 input/parse error,
// 4 computation flagged (failed calibration, destroyed component, ...).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "isosim/attacks.hpp"
#include "isosim/components.hpp"
#include "isosim/errors.hpp"
#include "isosim/magneto_optics.hpp"
#include "isosim/test_bench.hpp"
#include "isosim/units.hpp"
#include "kv_util.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_input = 3;
constexpr int exit_computation = 4;

std::vector<std::string> search_dirs() {
  std::vector<std::string> dirs;
  const char* env = std::getenv("ISOSIM_DATA_PATH");
  if (!env) return dirs;
  std::string value(env);
  size_t begin = 0;
  while (begin <= value.size()) {
    size_t end = value.find(':', begin);
    if (end == std::string::npos) end = value.size();
    std::string dir = value.substr(begin, end - begin);
    if (!dir.empty()) dirs.push_back(dir);
    begin = end + 1;
  }
  return dirs;
}

// Bare names resolve against ISOSIM_DATA_PATH; materials may omit ".txt".
std::string resolve_input(const std::string& name, bool material = false) {
  std::vector<std::string> candidates{name};
  if (material && name.find('.') == std::string::npos)
    candidates.push_back(name + ".txt");
  for (const auto& c : candidates)
    if (isosim::detail::file_exists(c)) return c;
  for (const auto& dir : search_dirs())
    for (const auto& c : candidates)
      if (isosim::detail::file_exists(dir + "/" + c)) return dir + "/" + c;
  throw isosim::ParseError("cannot find input file '" + name + "'");
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw isosim::Error("cannot write '" + output_path + "'");
  out << text;
}

struct Range {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;
};

Range parse_range(const std::string& text) {
  auto fields = isosim::detail::split(text, ':');
  if (fields.size() != 3)
    throw CLI::ValidationError("--range", "expected min:max:step");
  Range r;
  try {
    r.min = isosim::detail::to_double(fields[0], "--range");
    r.max = isosim::detail::to_double(fields[1], "--range");
    r.step = isosim::detail::to_double(fields[2], "--range");
  } catch (const isosim::ParseError& e) {
    throw CLI::ValidationError("--range", e.what());
  }
  if (r.step <= 0.0 || r.min > r.max)
    throw CLI::ValidationError("--range", "need min <= max and step > 0");
  return r;
}

ordered_json report_json(const isosim::attacks::AttackReport& r) {
  ordered_json j;
  j["attack"] = r.attack;
  j["injected_power_w"] = r.injected_power_w;
  j["residual_isolation_db"] = r.residual_isolation_db;
  j["power_after_sacrificial_w"] = r.power_after_sacrificial_w;
  j["downstream_isolation_db"] = r.downstream_isolation_db;
  j["power_at_target_w"] = r.power_at_target_w;
  j["threshold_w"] = r.threshold_w;
  j["required_extra_isolation_db"] = r.required_extra_isolation_db;
  j["attenuator_bound_db"] = r.attenuator_bound_db;
  j["margin_db"] = r.margin_db;
  j["sacrificial_destroyed"] = r.sacrificial_destroyed;
  j["verdict"] = isosim::attacks::to_string(r.verdict);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Fiber-isolator degradation, test-bench emulation and QKD source "
      "attack budgets.\n"
      "Exit codes: 0 ok, 2 usage error, 3 input error, 4 computation "
      "flagged.\n"
      "Input files given by bare name are searched in $ISOSIM_DATA_PATH "
      "(colon separated)."};
  app.require_subcommand(1);

  // material-curve
  std::string mc_material, mc_range = "-20:175:1", mc_output;
  double mc_beta = 45.0, mc_theta_ref = 44.43, mc_t_ref = 25.0, mc_cap = 120.0;
  auto* mc = app.add_subcommand(
      "material-curve", "Isolation/insertion-loss vs temperature sweep");
  mc->add_option("--material", mc_material, "Material file or bare name")
      ->required();
  mc->add_option("--range", mc_range, "Temperature sweep min:max:step in C");
  mc->add_option("--beta", mc_beta, "Analyzer angle, degrees");
  mc->add_option("--theta-ref", mc_theta_ref,
                 "Rotation at the reference temperature, degrees");
  mc->add_option("--t-ref", mc_t_ref, "Reference temperature, C");
  mc->add_option("--cap", mc_cap, "Isolation reporting cap, dB");
  mc->add_option("--output,-o", mc_output, "Output CSV path (default stdout)");

  // fit-material
  std::string fm_guess, fm_output, fm_save;
  std::vector<std::string> fm_anchors;
  double fm_beta = 45.0, fm_theta_ref = 44.43, fm_t_ref = 25.0;
  double fm_tolerance = 0.5;
  auto* fm = app.add_subcommand("fit-material",
                                "Fit material coefficients to isolation "
                                "anchors");
  fm->add_option("--guess", fm_guess, "Initial-guess material file")
      ->required();
  fm->add_option("--anchor", fm_anchors,
                 "temperature_c=isolation_db pair, repeatable")
      ->required();
  fm->add_option("--beta", fm_beta, "Analyzer angle, degrees");
  fm->add_option("--theta-ref", fm_theta_ref,
                 "Rotation at the reference temperature, degrees");
  fm->add_option("--t-ref", fm_t_ref, "Reference temperature, C");
  fm->add_option("--tolerance", fm_tolerance, "Accepted rms residual, dB");
  fm->add_option("--save", fm_save, "Write the fitted material file here");
  fm->add_option("--output,-o", fm_output, "Report path (default stdout)");

  // bench
  std::string be_fixture, be_output;
  isosim::test_bench::ProcedureConfig be_config;
  double be_tau = 0.0;
  bool be_no_snap = false;
  std::optional<double> be_stop;
  auto* be = app.add_subcommand("bench",
                                "Replay the stepwise illumination procedure "
                                "on a fixture");
  be->add_option("--fixture", be_fixture, "Degradation fixture CSV")
      ->required();
  be->add_option("--start", be_config.start_power_w, "Start power, W");
  be->add_option("--step", be_config.step_max_w,
                 "Power increment for non-snapped runs, W");
  be->add_option("--base-exposure", be_config.base_exposure_s,
                 "Baseline hold per step, s");
  be->add_option("--extended-exposure", be_config.extended_exposure_s,
                 "Maximum hold when a reading is unstable, s");
  be->add_option("--stop-power", be_stop, "Stop the sweep at this power, W");
  be->add_flag("--no-snap", be_no_snap,
               "Step by --step instead of the fixture's own powers");
  be->add_option("--thermal-tau", be_tau,
                 "Attach an exponential thermal model with this time "
                 "constant, s");
  be->add_option("--output,-o", be_output, "Output CSV path (default stdout)");

  // attack-seeding
  std::string as_arch, as_power, as_output;
  bool as_at_power = false;
  auto* as = app.add_subcommand("attack-seeding",
                                "Laser-seeding power budget through the "
                                "source architecture");
  as->add_option("--arch", as_arch, "Architecture file")->required();
  as->add_option("--power", as_power, "Injected power (W, mW, uW, nW)")
      ->required();
  as->add_flag("--at-power", as_at_power,
               "Use the curve isolation at the injected power instead of "
               "the worst-case floor");
  as->add_option("--output,-o", as_output, "Report path (default stdout)");

  // attack-damage
  std::string ad_arch, ad_power, ad_output;
  double ad_exposure = 0.0;
  auto* ad = app.add_subcommand("attack-damage",
                                "Laser-damage guard: destruction vs "
                                "downstream overpower");
  ad->add_option("--arch", ad_arch, "Architecture file")->required();
  ad->add_option("--power", ad_power, "Injected power (W, mW, uW, nW)")
      ->required();
  ad->add_option("--exposure", ad_exposure, "Exposure time, s");
  ad->add_option("--output,-o", ad_output, "Report path (default stdout)");

  // attack-trojan
  std::string at_range, at_output;
  double at_delta = 0.0, at_slope = 0.0;
  auto* at = app.add_subcommand("attack-trojan",
                                "Trojan-horse leakage multiplier for an "
                                "isolation decrease");
  auto* at_delta_opt =
      at->add_option("--delta", at_delta, "Isolation decrease, dB");
  at->add_option("--slope", at_slope,
                 "Fiber loss slope, dB/km, for the distance penalty");
  at->add_option("--range", at_range,
                 "Sweep the decrease min:max:step and emit CSV");
  at->add_option("--output,-o", at_output, "Output path (default stdout)");

  // meters
  std::string me_output;
  double me_power = 0.0, me_isolation = 0.0, me_il = 0.0;
  double me_opm1 = 0.0, me_opm2 = 0.0, me_opm3 = 0.0;
  double me_probe = 0.0105;
  auto* me = app.add_subcommand("meters",
                                "Simulate bench power-meter readings, or "
                                "invert measured ones");
  auto* me_sim = me->add_option("--simulate", me_power,
                                "Launched power, W: emit opm1/opm2/opm3");
  me->add_option("--isolation", me_isolation, "Sample isolation, dB");
  me->add_option("--il", me_il, "Sample insertion loss, dB");
  auto* me_est1 = me->add_option("--opm1", me_opm1, "Monitor arm reading, W");
  me->add_option("--opm2", me_opm2, "Backward leakage reading, W");
  me->add_option("--opm3", me_opm3, "Forward probe reading, W");
  me->add_option("--probe-power", me_probe, "Forward probe laser power, W");
  me->add_option("--output,-o", me_output, "Report path (default stdout)");
  me_sim->excludes(me_est1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  }

  try {
    if (mc->parsed()) {
      isosim::magneto_optics::FaradayStage stage;
      stage.material =
          isosim::magneto_optics::load_material(resolve_input(mc_material, true));
      stage.beta_deg = mc_beta;
      stage.theta_ref_deg = mc_theta_ref;
      stage.t_ref_c = mc_t_ref;
      stage.cap_db = mc_cap;
      Range r = parse_range(mc_range);
      auto curve =
          isosim::magneto_optics::isolation_curve(stage, r.min, r.max, r.step);
      emit(isosim::magneto_optics::curve_csv(curve), mc_output);
    } else if (fm->parsed()) {
      isosim::magneto_optics::FaradayStage stage;
      stage.material =
          isosim::magneto_optics::load_material(resolve_input(fm_guess, true));
      stage.beta_deg = fm_beta;
      stage.theta_ref_deg = fm_theta_ref;
      stage.t_ref_c = fm_t_ref;

      if (fm_anchors.size() < 3)
        throw isosim::ParseError("fit-material needs at least 3 --anchor pairs");
      std::vector<isosim::magneto_optics::CalibrationAnchor> anchors;
      for (const auto& text : fm_anchors) {
        auto fields = isosim::detail::split(text, '=');
        if (fields.size() != 2)
          throw isosim::ParseError("--anchor needs temperature_c=isolation_db, got '" +
                                   text + "'");
        anchors.push_back({isosim::detail::to_double(fields[0], "--anchor"),
                           isosim::detail::to_double(fields[1], "--anchor")});
      }
      isosim::magneto_optics::CalibrationConfig config;
      config.tolerance_db = fm_tolerance;
      auto fit = isosim::magneto_optics::calibrate_material(
          anchors, stage, stage.material, config);

      ordered_json j;
      j["material"] = fit.params.name;
      j["a_coef"] = fit.params.a_coef;
      j["b_coef"] = fit.params.b_coef;
      j["c_coef"] = fit.params.c_coef;
      j["lambda0_m"] = fit.params.lambda0_m;
      j["t_curie_k"] = fit.params.t_curie_k;
      j["residual_db"] = fit.residual_db;
      j["poor"] = fit.poor;
      emit(j.dump(2) + "\n", fm_output);
      if (!fm_save.empty())
        isosim::magneto_optics::save_material(fit.params, fm_save);
      if (fit.poor) {
        std::cerr << "fit flagged poor: rms residual "
                  << isosim::format_number(fit.residual_db)
                  << " dB above tolerance\n";
        return exit_computation;
      }
    } else if (be->parsed()) {
      auto record =
          isosim::test_bench::ingest_fixture(resolve_input(be_fixture));
      be_config.snap_to_fixture = !be_no_snap;
      be_config.stop_power_w = be_stop;
      isosim::components::ThermalResponse thermal;
      const isosim::components::ThermalResponse* thermal_ptr = nullptr;
      if (be_tau > 0.0) {
        thermal = isosim::components::ThermalResponse::from_record(record, be_tau);
        thermal_ptr = &thermal;
      }
      auto log = isosim::test_bench::run_procedure(record, be_config, thermal_ptr);
      emit(isosim::test_bench::bench_log_csv(log), be_output);
    } else if (as->parsed()) {
      auto arch = isosim::attacks::load_architecture(resolve_input(as_arch));
      auto report = isosim::attacks::laser_seeding_budget(
          arch, isosim::parse_power_w(as_power),
          as_at_power ? isosim::attacks::ResidualMode::at_power
                      : isosim::attacks::ResidualMode::worst_case);
      emit(report_json(report).dump(2) + "\n", as_output);
    } else if (ad->parsed()) {
      auto arch = isosim::attacks::load_architecture(resolve_input(ad_arch));
      auto report = isosim::attacks::laser_damage_guard(
          arch, isosim::parse_power_w(ad_power), ad_exposure);
      emit(report_json(report).dump(2) + "\n", ad_output);
    } else if (at->parsed()) {
      if (!at_range.empty()) {
        Range r = parse_range(at_range);
        std::string csv = at_slope > 0.0
                              ? "delta_db,multiplier,orders,distance_km\n"
                              : "delta_db,multiplier,orders\n";
        for (int i = 0;; ++i) {
          double delta = r.min + i * r.step;
          if (delta > r.max + r.step * 1e-9) break;
          auto b = isosim::attacks::trojan_horse_budget(delta);
          csv += isosim::format_number(delta) + "," +
                 isosim::format_number(b.multiplier) + "," +
                 isosim::format_number(b.orders);
          if (at_slope > 0.0)
            csv += "," + isosim::format_number(
                             isosim::attacks::distance_penalty(delta, at_slope));
          csv += "\n";
        }
        emit(csv, at_output);
      } else {
        if (at_delta_opt->count() == 0)
          throw isosim::ParseError("attack-trojan needs --delta or --range");
        auto b = isosim::attacks::trojan_horse_budget(at_delta);
        ordered_json j;
        j["attack"] = "trojan_horse";
        j["delta_isolation_db"] = at_delta;
        j["multiplier"] = b.multiplier;
        j["orders_of_magnitude"] = b.orders;
        if (at_slope > 0.0)
          j["distance_penalty_km"] =
              isosim::attacks::distance_penalty(at_delta, at_slope);
        emit(j.dump(2) + "\n", at_output);
      }
    } else if (me->parsed()) {
      isosim::test_bench::SetupModel setup;
      setup.probe_power_w = me_probe;
      ordered_json j;
      if (me_sim->count() > 0) {
        auto r = isosim::test_bench::simulate_meters(setup, me_power,
                                                     me_isolation, me_il);
        j["launched_w"] = me_power;
        j["opm1_w"] = r.opm1_w;
        j["opm2_w"] = r.opm2_w;
        j["opm3_w"] = r.opm3_w;
      } else if (me_est1->count() > 0) {
        auto e = isosim::test_bench::estimate_from_readings(
            setup, {me_opm1, me_opm2, me_opm3});
        j["isolation_db"] = e.isolation_db;
        j["insertion_loss_db"] = e.insertion_loss_db;
      } else {
        throw isosim::ParseError("meters needs --simulate or --opm1/2/3");
      }
      emit(j.dump(2) + "\n", me_output);
    }
  } catch (const isosim::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_input;
  } catch (const isosim::Error& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return exit_computation;
  }
  return exit_ok;
}
