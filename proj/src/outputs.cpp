#include "nslab/outputs.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nslab/error.hpp"
#include "nslab/field_io.hpp"

namespace nslab {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw Error("no column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  return std::stod(rows.at(row).at(column(name)));
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_row(std::ostream& os, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    os << quote(row[i]);
  }
  os << "\r\n";
}

}  // namespace

void write_csv(const std::filesystem::path& path, const CsvTable& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  write_row(os, t.header);
  for (const auto& r : t.rows) write_row(os, r);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      rec.push_back(field);
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      rec.push_back(field);
      records.push_back(rec);
      rec.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (any) {
    rec.push_back(field);
    records.push_back(rec);
  }
  if (records.empty()) throw Error("empty CSV file " + path.string());
  CsvTable t;
  t.header = records.front();
  t.rows.assign(records.begin() + 1, records.end());
  return t;
}

CsvTable ledger_table(const EnergyLedger& L) {
  CsvTable t;
  t.header = {"time", "kinetic", "elastic", "artificial", "thermal", "total", "diss_viscous", "diss_artificial", "diss_cubic",
              "injected", "residual"};
  double e0 = L.size() ? L.energy(0) : 0.0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    double e = L.energy(i);
    t.rows.push_back({format_number(L.time[i]), format_number(L.kinetic[i]), format_number(L.elastic[i]),
                      format_number(L.artificial[i]), format_number(L.thermal[i]), format_number(e),
                      format_number(L.diss_viscous[i]), format_number(L.diss_artificial[i]), format_number(L.diss_cubic[i]),
                      format_number(L.injected[i]), format_number(e + L.dissipation(i) - e0)});
  }
  return t;
}

CsvTable degiorgi_table(const DeGiorgiReport& r) {
  CsvTable t;
  t.header = {"k", "T_k", "C_k", "U_k"};
  for (std::size_t k = 0; k < r.U.size(); ++k)
    t.rows.push_back({std::to_string(k), format_number(r.T[k]), format_number(r.C[k]), format_number(r.U[k])});
  return t;
}

CsvTable sweep_table(const SweepReport& r) {
  CsvTable t;
  t.header = {"param", "value", "ok", "steps"};
  for (const auto& n : level_metric_names()) t.header.push_back(n);
  auto bank = test_bank();
  for (const auto& b : bank) t.header.push_back("pairing_" + b.name());
  for (const auto& l : r.levels) {
    std::vector<std::string> row{r.param, format_number(l.value), l.ok ? "1" : "0", std::to_string(l.steps)};
    for (double v : level_metrics(l)) row.push_back(format_number(v));
    for (std::size_t b = 0; b < bank.size(); ++b) row.push_back(b < l.pairings.size() ? format_number(l.pairings[b]) : "nan");
    t.rows.push_back(row);
  }
  return t;
}

namespace {

nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::json nums(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

}  // namespace

nlohmann::json to_json(const InequalityReport& r, bool with_series) {
  nlohmann::json j;
  j["name"] = r.name;
  j["passed"] = r.passed;
  j["max_residual"] = num(r.max_residual);
  j["max_excess"] = num(r.max_excess);
  j["final_tolerance"] = r.tolerance.empty() ? nlohmann::json(nullptr) : num(r.tolerance.back());
  if (with_series) {
    j["times"] = nums(r.times);
    j["residual"] = nums(r.residual);
    j["tolerance"] = nums(r.tolerance);
  }
  return j;
}

nlohmann::json to_json(const DeGiorgiReport& r) {
  nlohmann::json j;
  j["M"] = r.M;
  j["omega"] = r.omega;
  j["C_k"] = nums(r.C);
  j["T_k"] = nums(r.T);
  j["U_k"] = nums(r.U);
  j["fit"] = {{"available", r.fit.available}, {"C", num(r.fit.C)},         {"alpha", num(r.fit.alpha)},
              {"sigma", num(r.fit.sigma)},     {"points", r.fit.points},   {"rms", num(r.fit.rms)}};
  j["monotone"] = r.monotone;
  j["converged"] = r.converged;
  j["certified"] = r.certified;
  j["empirical_only"] = r.empirical_only;
  j["certificate"] = r.certified ? num(r.certificate) : nlohmann::json(nullptr);
  j["observed_min_theta"] = num(r.observed_min_theta);
  j["initial_phi_vanishes"] = r.initial_phi_vanishes;
  j["warning"] = r.warning;
  return j;
}

nlohmann::json to_json(const SweepReport& r) {
  nlohmann::json j;
  j["param"] = r.param;
  j["schedule"] = nums(r.schedule);
  j["dt"] = r.dt;
  j["rho_l1_gaps"] = nums(r.rho_l1_gaps);
  nlohmann::json gaps = nlohmann::json::array();
  for (const auto& g : r.pairing_gaps) gaps.push_back(nums(g));
  j["pairing_gaps"] = gaps;
  j["rho_converging"] = r.rho_converging;
  j["pairings_converging"] = r.pairings_converging;
  j["pairing_flags"] = r.pairing_flags;
  j["estimates_bounded"] = r.estimates_bounded;
  j["unbounded"] = r.unbounded;
  j["all_ok"] = r.all_ok;
  nlohmann::json levels = nlohmann::json::array();
  const auto& names = level_metric_names();
  for (const auto& l : r.levels) {
    nlohmann::json lj;
    lj["value"] = l.value;
    lj["ok"] = l.ok;
    lj["error"] = l.error;
    lj["steps"] = l.steps;
    auto m = level_metrics(l);
    for (std::size_t i = 0; i < names.size(); ++i) lj[names[i]] = num(m[i]);
    lj["pairings"] = nums(l.pairings);
    levels.push_back(lj);
  }
  j["levels"] = levels;
  return j;
}

nlohmann::json run_report(const RunConfig& rc, const Trajectory& traj, const InequalityReport& energy,
                          const std::vector<InequalityReport>& renorm, const PoincareBatch* poincare) {
  nlohmann::json j;
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : rc.resolved) cfg[k] = v;
  j["config"] = cfg;
  j["failed"] = traj.failed;
  j["error"] = traj.error;
  j["stats"] = {{"steps", traj.stats.steps},
                {"dt_min", traj.stats.dt_min},
                {"dt_max", traj.stats.dt_max},
                {"clamped_density", traj.stats.clamped_density},
                {"clamped_temperature", traj.stats.clamped_temperature},
                {"max_newton_iterations", traj.stats.max_newton_iterations},
                {"max_cg_iterations", traj.stats.max_cg_iterations},
                {"snapshots", traj.snapshots.size()}};
  double min_theta = HUGE_VAL, min_rho = HUGE_VAL;
  for (const auto& s : traj.snapshots) {
    min_theta = std::min(min_theta, s.theta.min());
    min_rho = std::min(min_rho, s.rho.min());
  }
  j["min_theta"] = num(min_theta);
  j["min_rho"] = num(min_rho);
  const auto& L = traj.ledger;
  if (L.size()) {
    j["energy"] = {{"initial", L.energy(0)}, {"final", L.energy(L.size() - 1)}, {"dissipation", L.dissipation(L.size() - 1)},
                   {"injected", L.injected.back()}};
  }
  j["energy_inequality"] = to_json(energy);
  nlohmann::json rj = nlohmann::json::array();
  for (const auto& r : renorm) rj.push_back(to_json(r, false));
  j["renormalized_temperature"] = rj;
  if (poincare) j["poincare"] = {{"sup_ratio", poincare->sup_ratio}, {"samples", poincare->samples}, {"rejected", poincare->rejected}};
  return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << j.dump(2) << "\n";
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return nlohmann::json::parse(in);
}

void write_trajectory_snapshots(const std::filesystem::path& dir, const Trajectory& traj) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const auto& s = traj.snapshots[i];
    Snapshot snap;
    snap.grid = s.rho.grid();
    snap.time = s.t;
    snap.components.push_back(s.rho);
    for (int a = 0; a < snap.grid.dim; ++a) snap.components.push_back(s.u[a]);
    snap.components.push_back(s.theta);
    char name[32];
    std::snprintf(name, sizeof name, "snap_%06zu.bin", i);
    write_snapshot(dir / name, snap);
  }
}

}  // namespace nslab
