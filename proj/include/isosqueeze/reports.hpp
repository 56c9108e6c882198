#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isosqueeze/fock_dynamics.hpp"
#include "isosqueeze/observables.hpp"
#include "isosqueeze/validity.hpp"

namespace isosqueeze::reports {

/// Shortest text for a double at 12 significant digits ("%.12g"); non-finite
/// values print as nan/inf/-inf.
[[nodiscard]] std::string format_number(double x);

/// x rounded to 12 significant digits (what format_number prints).
[[nodiscard]] double round12(double x);

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
[[nodiscard]] std::string fnv1a_hex(const std::string& text);

/// Ordered key/value pairs describing a resolved run; hashed into the output
/// header so that two files can be matched to their configuration.
struct ConfigRecord {
  std::vector<std::pair<std::string, std::string>> items;
  void add(const std::string& key, const std::string& value) { items.emplace_back(key, value); }
  [[nodiscard]] std::string canonical() const;
  [[nodiscard]] std::string hash() const { return fnv1a_hex(canonical()); }
};

struct CsvTable {
  std::string command;
  std::string config_hash;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> trailer;  ///< '#'-prefixed lines written after the data

  void write(std::ostream& os) const;
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/// Parses CSV text written by CsvTable::write. Comment lines are returned
/// separately; the first non-comment line is the header.
struct ParsedCsv {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};
[[nodiscard]] ParsedCsv parse_csv(const std::string& text);

/// Reference-table conventions. Literal evaluates the amplitude formulas as written,
/// with r_N = r and depletion factor sqrt((N)_n)/alpha^n. Table doubles the
/// printed squeezing (r_N = 2 r) and uses (N)_n/alpha^{2n}, which is the
/// reading under which the reference distances and norms are reproduced.
enum class TableConvention { Table, Literal };

[[nodiscard]] const char* to_string(TableConvention c);
[[nodiscard]] std::optional<TableConvention> parse_convention(const std::string& name);

struct Table1Cell {
  std::size_t N = 0;
  double r = 0.0;
  double iso_distance = 0.0;
  double iso_norm = 0.0;
  double param_distance = 0.0;
  double param_norm = 0.0;
  std::optional<std::string> error;  ///< set when the numeric integration tripped a guard
};

/// One (N, r) cell with parametric amplitudes at alpha = sqrt(N).
[[nodiscard]] Table1Cell table1_cell(std::size_t N, double r, TableConvention convention,
                                     const IntegratorConfig& cfg = {});

struct Table1Request {
  std::vector<std::pair<std::size_t, double>> cells;
  TableConvention convention = TableConvention::Table;
  IntegratorConfig integrator{};
  unsigned threads = 1;
};

/// The reference grid: N = 4000 with r = 0.50..2.00 in steps of 0.25, and
/// N = 9000 with r = 1.00..2.00.
[[nodiscard]] std::vector<std::pair<std::size_t, double>> default_table1_cells();

[[nodiscard]] CsvTable cmd_table1(const Table1Request& req, const std::string& config_hash);

struct ValidityCurveRequest {
  Indicator indicator = Indicator::HZ;
  std::vector<double> eps_list;
  std::vector<double> r_grid;
  double alpha_min = 1.0;
  double alpha_max = 1e12;
  unsigned threads = 1;
};

/// Columns indicator, eps, r, alpha_boundary; rows without a crossing leave
/// alpha_boundary empty.
[[nodiscard]] CsvTable cmd_validity_curve(const ValidityCurveRequest& req, const std::string& config_hash);

struct ValidityScanRequest {
  double alpha = 2e6;
  double eps = 0.01;
  double r_min = 0.0;
  double r_max = 8.0;
  double step = 0.05;
};

/// Columns r, ln_v_mean, ln_v_sq, ln_v_hz, ln_v_p, ln_v_ie; boundary
/// crossings of every indicator follow as '# crossing,...' lines.
[[nodiscard]] CsvTable cmd_validity_scan(const ValidityScanRequest& req, const std::string& config_hash);

[[nodiscard]] nlohmann::ordered_json report_to_json(const ObservableReport& rep);

struct ObservablesRequest {
  double alpha = 100.0;
  double r = 1.0;
  double eps = 0.01;
  std::vector<ObservableMethod> methods;
  EnsembleOptions ensemble{};
};

[[nodiscard]] nlohmann::ordered_json cmd_observables(const ObservablesRequest& req, const std::string& config_hash);

[[nodiscard]] nlohmann::ordered_json validity_report_to_json(const ValidityReport& rep);

[[nodiscard]] nlohmann::ordered_json cmd_verdict(double pump_energy, double wavelength, double signal_energy,
                                                 double eps, const std::string& config_hash);

struct SimulateRequest {
  std::size_t N = 1;
  double r = 0.0;
  TableConvention convention = TableConvention::Literal;
  bool compare = false;  ///< add isoenergetic and parametric columns
  IntegratorConfig integrator{};
};

struct NumericTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Columns n, psi_numeric [, psi_iso, psi_param]; one row per n = 0..N.
[[nodiscard]] NumericTable simulate_table(const SimulateRequest& req);
[[nodiscard]] CsvTable cmd_simulate(const SimulateRequest& req, const std::string& config_hash);

/// Binary amplitude dump: magic "ISQZAMP1", uint32 column count, uint64 row
/// count, then row-major little-endian doubles. Column names are not stored.
void write_binary(std::ostream& os, const std::vector<std::vector<double>>& rows, std::uint32_t ncols);

/// JSON value for a double: 12 significant digits, null for non-finite.
[[nodiscard]] nlohmann::ordered_json json_number(double x);

}  // namespace isosqueeze::reports
