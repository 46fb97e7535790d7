#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nslab/config.hpp"
#include "nslab/continuation.hpp"
#include "nslab/degiorgi.hpp"
#include "nslab/diagnostics.hpp"
#include "nslab/solver.hpp"

namespace nslab {

// RFC 4180 table: CRLF line ends, fields quoted only when needed, numbers as %.17g.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);
std::string format_number(double v);

// time, kinetic, elastic, artificial, thermal, total, diss_viscous, diss_artificial,
// diss_cubic, injected, residual
CsvTable ledger_table(const EnergyLedger& ledger);
// k, T_k, C_k, U_k
CsvTable degiorgi_table(const DeGiorgiReport& rep);
// param, value, ok, steps, metrics..., pairing_<name>...
CsvTable sweep_table(const SweepReport& rep);

nlohmann::json to_json(const InequalityReport& r, bool with_series = true);
nlohmann::json to_json(const DeGiorgiReport& r);
nlohmann::json to_json(const SweepReport& r);
nlohmann::json run_report(const RunConfig& rc, const Trajectory& traj, const InequalityReport& energy,
                          const std::vector<InequalityReport>& renorm, const PoincareBatch* poincare);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

// snap_<index>.bin with components rho, u_x[, u_y], theta
void write_trajectory_snapshots(const std::filesystem::path& dir, const Trajectory& traj);

}  // namespace nslab
