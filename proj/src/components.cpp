#include "isosim/components.hpp"

#include <algorithm>
#include <cmath>

#include "isosim/errors.hpp"
#include "isosim/test_bench.hpp"
#include "isosim/units.hpp"
#include "kv_util.hpp"

namespace isosim::components {

void DegradationRecord::validate() const {
  if (points.empty())
    throw MissingInitialRow("record '" + spec.model_id + "' has no rows");
  if (points.front().power_w != 0.0)
    throw MissingInitialRow("record '" + spec.model_id +
                            "' does not start at 0 W");
  for (size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].power_w > points[i - 1].power_w))
      throw NonMonotonePower("record '" + spec.model_id +
                             "' power not strictly increasing at row " +
                             std::to_string(i));
  }
  for (const auto& p : points) {
    if (p.isolation_db < 0.0 || p.insertion_loss_db < 0.0)
      throw MalformedFixture("record '" + spec.model_id +
                             "' has a negative dB reading");
  }
  if (breakdown) {
    if (breakdown->power_w <= 0.0 || breakdown->exposure_s <= 0.0)
      throw MalformedFixture("record '" + spec.model_id +
                             "' breakdown must be at positive power and time");
    for (const auto& p : points) {
      if (p.power_w > breakdown->power_w)
        throw MalformedFixture("record '" + spec.model_id +
                               "' has readings above the breakdown power");
    }
  }
}

namespace {

double interpolate_column(const DegradationRecord& r, double power_w,
                          double DegradationPoint::*column) {
  if (power_w < 0.0) throw Error("negative power");
  const auto& pts = r.points;
  if (power_w <= pts.front().power_w) return pts.front().*column;
  if (power_w >= pts.back().power_w) return pts.back().*column;
  for (size_t i = 1; i < pts.size(); ++i) {
    if (power_w <= pts[i].power_w) {
      if (power_w == pts[i].power_w) return pts[i].*column;
      double f = (power_w - pts[i - 1].power_w) /
                 (pts[i].power_w - pts[i - 1].power_w);
      double v = pts[i - 1].*column + f * (pts[i].*column - pts[i - 1].*column);
      return std::max(v, 0.0);
    }
  }
  return pts.back().*column;  // unreachable
}

void check_not_destroyed(const DegradationRecord& r, double power_w) {
  if (r.breakdown && power_w > r.breakdown->power_w)
    throw ComponentDestroyed("'" + r.spec.model_id + "' breaks down at " +
                             format_number(r.breakdown->power_w) +
                             " W, asked for " + format_number(power_w) + " W");
}

}  // namespace

double isolation_at_power(const DegradationRecord& r, double power_w) {
  r.validate();
  check_not_destroyed(r, power_w);
  return interpolate_column(r, power_w, &DegradationPoint::isolation_db);
}

double insertion_loss_at_power(const DegradationRecord& r, double power_w) {
  r.validate();
  check_not_destroyed(r, power_w);
  return interpolate_column(r, power_w, &DegradationPoint::insertion_loss_db);
}

bool is_destroyed(const DegradationRecord& r, double power_w,
                  double exposure_s) {
  r.validate();
  if (!r.breakdown) return false;
  if (power_w > r.breakdown->power_w) return true;
  return power_w == r.breakdown->power_w && exposure_s >= r.breakdown->exposure_s;
}

double min_isolation(const DegradationRecord& r) {
  r.validate();
  double m = r.points.front().isolation_db;
  for (const auto& p : r.points) m = std::min(m, p.isolation_db);
  return m;
}

double permanent_isolation(const DegradationRecord& r) {
  r.validate();
  double base = r.points.front().isolation_db;
  if (!r.permanent) return base;
  return std::max(base - r.permanent->decrease_db, 0.0);
}

double chain_isolation(const std::vector<double>& stages_db) {
  double sum = 0.0;
  for (double s : stages_db) {
    if (s < 0.0) throw Error("chain stage with negative isolation");
    sum += s;
  }
  return sum;
}

double transmit(const std::vector<double>& chain_db, double p_in_w) {
  if (p_in_w < 0.0) throw Error("negative input power");
  return p_in_w * db_to_fraction(chain_isolation(chain_db));
}

namespace {

const CirculatorMatrix::PairEntry& pair_entry(const CirculatorMatrix& m,
                                              int from, int to) {
  auto it = m.pairs.find({from, to});
  if (it == m.pairs.end())
    throw UndefinedPath("'" + m.model_id + "' " + std::to_string(from) + "->" +
                        std::to_string(to) + " was never characterized");
  return it->second;
}

double pair_isolation(const CirculatorMatrix::PairEntry& e,
                      const std::string& label, double power_w) {
  switch (e.kind) {
    case CirculatorMatrix::PairKind::constant:
      return e.record.points.front().isolation_db;
    case CirculatorMatrix::PairKind::initial_only:
      if (power_w > 0.0)
        throw UndefinedPath(label + " has no data under applied power");
      return e.record.points.front().isolation_db;
    case CirculatorMatrix::PairKind::curve:
      return isolation_at_power(e.record, power_w);
  }
  throw Error("unreachable");
}

}  // namespace

double circulator_isolation(const CirculatorMatrix& m, int from, int to,
                            double power_w) {
  const auto& e = pair_entry(m, from, to);
  std::string label = "'" + m.model_id + "' " + std::to_string(from) + "->" +
                      std::to_string(to);
  return pair_isolation(e, label, power_w);
}

double circulator_insertion_loss(const CirculatorMatrix& m, int from, int to,
                                 double power_w) {
  // Forward transmission paths carry their loss in the record measured for
  // the reverse pair of the same port couple.
  std::pair<int, int> key{from, to};
  if (from == 1 && to == 2) key = {2, 1};
  if (from == 2 && to == 3) key = {3, 2};
  const auto& e = pair_entry(m, key.first, key.second);
  std::string label = "'" + m.model_id + "' " + std::to_string(from) + "->" +
                      std::to_string(to);
  switch (e.kind) {
    case CirculatorMatrix::PairKind::constant:
      return e.record.points.front().insertion_loss_db;
    case CirculatorMatrix::PairKind::initial_only:
      if (power_w > 0.0)
        throw UndefinedPath(label + " has no data under applied power");
      return e.record.points.front().insertion_loss_db;
    case CirculatorMatrix::PairKind::curve:
      return insertion_loss_at_power(e.record, power_w);
  }
  throw Error("unreachable");
}

CirculatorMatrix load_circulator(const std::string& stem,
                                 const std::string& fixtures_dir) {
  CirculatorMatrix m;
  bool any = false;
  for (auto [from, to] : {std::pair{2, 1}, std::pair{3, 2}, std::pair{3, 1}}) {
    std::string path = fixtures_dir + "/" + stem + "_" + std::to_string(from) +
                       "to" + std::to_string(to) + ".csv";
    if (!detail::file_exists(path)) continue;
    any = true;
    CirculatorMatrix::PairEntry e;
    e.record = test_bench::ingest_fixture(path);
    if (e.record.points.size() == 1) {
      e.kind = CirculatorMatrix::PairKind::initial_only;
    } else {
      // A path whose readings never move more than measurement accuracy is
      // reported as its 0 W value at any power.
      double lo = e.record.points.front().isolation_db;
      double hi = lo;
      for (const auto& p : e.record.points) {
        lo = std::min(lo, p.isolation_db);
        hi = std::max(hi, p.isolation_db);
      }
      e.kind = (hi - lo <= 1.0) ? CirculatorMatrix::PairKind::constant
                               : CirculatorMatrix::PairKind::curve;
    }
    if (m.model_id.empty()) m.model_id = e.record.spec.model_id;
    m.pairs[{from, to}] = std::move(e);
  }
  if (!any)
    throw ParseError("no circulator fixtures for stem '" + stem + "' in " +
                     fixtures_dir);
  if (m.model_id.empty()) m.model_id = stem;
  return m;
}

ThermalResponse ThermalResponse::from_record(const DegradationRecord& r,
                                             double tau_s) {
  r.validate();
  ThermalResponse t;
  t.tau_s = tau_s;
  bool have_ambient = false;
  for (const auto& p : r.points) {
    if (!p.temp_c) continue;
    if (!have_ambient && p.power_w == 0.0) {
      t.ambient_c = *p.temp_c;
      have_ambient = true;
    }
    if (!t.heating.empty() && *p.temp_c < t.heating.back().second)
      throw Error("'" + r.spec.model_id +
                  "' temperature decreases along the power sweep");
    t.heating.emplace_back(p.power_w, *p.temp_c);
  }
  if (t.heating.empty())
    throw Error("'" + r.spec.model_id + "' has no temperature data");
  return t;
}

double surface_temperature(const ThermalResponse& t, double power_w) {
  if (t.heating.empty()) throw Error("thermal response has no heating curve");
  if (power_w < 0.0) throw Error("negative power");
  const auto& h = t.heating;
  if (power_w <= h.front().first) return h.front().second;
  if (power_w >= h.back().first) return h.back().second;
  for (size_t i = 1; i < h.size(); ++i) {
    if (power_w <= h[i].first) {
      if (power_w == h[i].first) return h[i].second;
      double f = (power_w - h[i - 1].first) / (h[i].first - h[i - 1].first);
      return h[i - 1].second + f * (h[i].second - h[i - 1].second);
    }
  }
  return h.back().second;  // unreachable
}

double cool_down(const ThermalResponse& t, double t0_c, double elapsed_s) {
  if (t.tau_s <= 0.0) throw Error("cool_down needs a positive time constant");
  if (elapsed_s < 0.0) throw Error("negative elapsed time");
  return t.ambient_c + (t0_c - t.ambient_c) * std::exp(-elapsed_s / t.tau_s);
}

double fit_tau(double t0_c, double t1_c, double elapsed_s, double ambient_c) {
  if (elapsed_s <= 0.0) throw Error("fit_tau needs a positive elapsed time");
  double d0 = t0_c - ambient_c;
  double d1 = t1_c - ambient_c;
  if (d0 <= 0.0 || d1 <= 0.0 || d1 >= d0)
    throw Error("fit_tau needs a monotone relaxation toward ambient");
  return elapsed_s / std::log(d0 / d1);
}

double recovered_isolation(const IsolationVsTemperature& map, double temp_c) {
  double lo_t = map.cool_temp_c;
  double hi_t = map.hot_temp_c;
  if (lo_t >= hi_t) throw Error("isolation-vs-temperature endpoints coincide");
  if (temp_c <= lo_t) return map.cool_isolation_db;
  if (temp_c >= hi_t) return map.hot_isolation_db;
  double f = (temp_c - lo_t) / (hi_t - lo_t);
  return map.cool_isolation_db +
         f * (map.hot_isolation_db - map.cool_isolation_db);
}

double recovered_isolation(const magneto_optics::FaradayStage& stage,
                           double temp_c) {
  return magneto_optics::stage_isolation(stage, temp_c).db;
}

}  // namespace isosim::components
