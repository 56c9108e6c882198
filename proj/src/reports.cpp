#include "isosqueeze/reports.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ostream>
#include <sstream>

#include "isosqueeze/closed_form.hpp"
#include "isosqueeze/errors.hpp"
#include "isosqueeze/parallel.hpp"

namespace isosqueeze::reports {

using nlohmann::ordered_json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format_number(x).c_str(), nullptr);
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ConfigRecord::canonical() const {
  std::string out;
  for (const auto& [k, v] : items) out += k + "=" + v + "\n";
  return out;
}

namespace {

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void CsvTable::write(std::ostream& os) const {
  os << "# command," << command << '\n';
  os << "# config_hash,fnv1a64:" << config_hash << '\n';
  os << "# constants_version," << kConstants.version << '\n';
  os << join(columns, ',') << '\n';
  for (const auto& row : rows) os << join(row, ',') << '\n';
  for (const auto& line : trailer) os << "# " << one_line(line) << '\n';
}

ordered_json CsvTable::to_json() const {
  ordered_json j;
  j["command"] = command;
  j["config_hash"] = "fnv1a64:" + config_hash;
  j["constants_version"] = kConstants.version;
  j["columns"] = columns;
  ordered_json rows_json = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json obj;
    for (std::size_t i = 0; i < columns.size() && i < row.size(); ++i) {
      const std::string& cell = row[i];
      if (cell.empty()) {
        obj[columns[i]] = nullptr;
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end && *end == '\0') {
        obj[columns[i]] = json_number(v);
      } else {
        obj[columns[i]] = cell;
      }
    }
    rows_json.push_back(std::move(obj));
  }
  j["rows"] = std::move(rows_json);
  j["notes"] = trailer;
  return j;
}

ParsedCsv parse_csv(const std::string& text) {
  ParsedCsv out;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      out.comments.push_back(line.size() > 2 ? line.substr(2) : std::string{});
      continue;
    }
    if (!have_header) {
      out.columns = split(line, ',');
      have_header = true;
    } else {
      out.rows.push_back(split(line, ','));
    }
  }
  return out;
}

ordered_json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

const char* to_string(TableConvention c) { return c == TableConvention::Table ? "table" : "literal"; }

std::optional<TableConvention> parse_convention(const std::string& name) {
  if (name == "table") return TableConvention::Table;
  if (name == "literal") return TableConvention::Literal;
  return std::nullopt;
}

namespace {

struct ConventionParams {
  double r_eff;
  DepletionWeight weight;
};

ConventionParams convention_params(double r, TableConvention c) {
  if (c == TableConvention::Table) return {2.0 * r, DepletionWeight::Probability};
  return {r, DepletionWeight::Amplitude};
}

}  // namespace

Table1Cell table1_cell(std::size_t N, double r, TableConvention convention, const IntegratorConfig& cfg) {
  if (N == 0) throw ParameterError("table1 needs N >= 1");
  if (!(r >= 0.0) || !std::isfinite(r)) throw ParameterError("table1 needs finite r >= 0");
  Table1Cell cell;
  cell.N = N;
  cell.r = r;
  const auto p = convention_params(r, convention);
  const double tau = tau_for_squeezing(N, p.r_eff);
  try {
    const auto numeric = integrate_subspace(N, tau, cfg);
    const auto iso = isoenergetic_amplitudes(N, tau);
    const auto param = parametric_projection_amplitudes(N, std::sqrt(static_cast<double>(N)), p.r_eff, p.weight);
    cell.iso_distance = state_distance(iso, numeric);
    cell.iso_norm = subspace_norm(iso);
    cell.param_distance = state_distance(param, numeric);
    cell.param_norm = subspace_norm(param);
  } catch (const NumericGuardError& e) {
    cell.error = e.what();
  }
  return cell;
}

std::vector<std::pair<std::size_t, double>> default_table1_cells() {
  std::vector<std::pair<std::size_t, double>> cells;
  for (double r : {0.50, 0.75, 1.00, 1.25, 1.50, 1.75, 2.00}) cells.emplace_back(4000, r);
  for (double r : {1.00, 1.25, 1.50, 1.75, 2.00}) cells.emplace_back(9000, r);
  return cells;
}

CsvTable cmd_table1(const Table1Request& req, const std::string& config_hash) {
  req.integrator.validate();
  for (const auto& [N, r] : req.cells) {
    if (N == 0) throw ParameterError("table1 needs N >= 1");
    if (!(r >= 0.0) || !std::isfinite(r)) throw ParameterError("table1 needs finite r >= 0");
  }
  std::vector<Table1Cell> cells(req.cells.size());
  parallel_for(cells.size(), req.threads, [&](std::size_t i) {
    cells[i] = table1_cell(req.cells[i].first, req.cells[i].second, req.convention, req.integrator);
  });

  CsvTable t;
  t.command = "table1";
  t.config_hash = config_hash;
  t.columns = {"N", "r", "iso_distance", "iso_norm", "param_distance", "param_norm"};
  for (const auto& c : cells) {
    std::vector<std::string> row{std::to_string(c.N), format_number(c.r)};
    if (c.error) {
      row.insert(row.end(), 4, std::string{});
      t.trailer.push_back("error," + std::to_string(c.N) + "," + format_number(c.r) + "," + *c.error);
    } else {
      for (double v : {c.iso_distance, c.iso_norm, c.param_distance, c.param_norm}) row.push_back(format_number(v));
    }
    t.rows.push_back(std::move(row));
  }
  t.trailer.insert(t.trailer.begin(), std::string("convention,") + to_string(req.convention));
  return t;
}

CsvTable cmd_validity_curve(const ValidityCurveRequest& req, const std::string& config_hash) {
  if (req.eps_list.empty() || req.r_grid.empty()) throw ParameterError("validity-curve needs eps and r grids");
  for (double e : req.eps_list) {
    if (!(e > 0.0 && e < 1.0)) throw ParameterError("every eps must lie in (0, 1)");
  }
  for (double r : req.r_grid) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw ParameterError("every r must be finite and >= 0");
  }
  if (!(req.alpha_min > 0.0 && req.alpha_max > req.alpha_min)) throw ParameterError("bad alpha range");

  const std::size_t nr = req.r_grid.size();
  std::vector<std::optional<double>> alpha_star(req.eps_list.size() * nr);
  parallel_for(alpha_star.size(), req.threads, [&](std::size_t i) {
    const double eps = req.eps_list[i / nr];
    const double r = req.r_grid[i % nr];
    try {
      alpha_star[i] = boundary_alpha(r, eps, req.indicator, req.alpha_min, req.alpha_max).value();
    } catch (const NoCrossing&) {
    } catch (const AsymptoticRegimeViolation&) {
    }
  });

  CsvTable t;
  t.command = "validity-curve";
  t.config_hash = config_hash;
  t.columns = {"indicator", "eps", "r", "alpha_boundary"};
  for (std::size_t i = 0; i < alpha_star.size(); ++i) {
    t.rows.push_back({to_string(req.indicator), format_number(req.eps_list[i / nr]), format_number(req.r_grid[i % nr]),
                      alpha_star[i] ? format_number(*alpha_star[i]) : std::string{}});
  }
  return t;
}

CsvTable cmd_validity_scan(const ValidityScanRequest& req, const std::string& config_hash) {
  if (!(req.step > 0.0) || !(req.r_max >= req.r_min) || !(req.r_min >= 0.0) || !std::isfinite(req.r_max)) {
    throw ParameterError("validity-scan needs 0 <= r_min <= r_max and step > 0");
  }
  ValidityQuery{req.r_min, req.alpha, req.eps}.validate();

  const Indicator order[] = {Indicator::Mean, Indicator::Sq, Indicator::HZ, Indicator::P, Indicator::IE};
  CsvTable t;
  t.command = "validity-scan";
  t.config_hash = config_hash;
  t.columns = {"r", "ln_v_mean", "ln_v_sq", "ln_v_hz", "ln_v_p", "ln_v_ie"};
  const auto count = static_cast<std::size_t>(std::floor((req.r_max - req.r_min) / req.step + 1e-9));
  for (std::size_t k = 0; k <= count; ++k) {
    const double r = req.r_min + req.step * static_cast<double>(k);
    std::vector<std::string> row{format_number(r)};
    for (Indicator ind : order) {
      try {
        row.push_back(format_number(log_indicator(ind, ValidityQuery{r, req.alpha, req.eps})));
      } catch (const AsymptoticRegimeViolation&) {
        row.emplace_back();
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (req.r_max > req.r_min) {
    for (Indicator ind : order) {
      try {
        const auto res = boundary_r(req.alpha, req.eps, ind, req.r_min, req.r_max);
        for (std::size_t i = 0; i < res.crossings.size(); ++i) {
          const auto& c = res.crossings[i];
          t.trailer.push_back(std::string("crossing,") + to_string(ind) + "," + format_number(c.at) + "," +
                              (c.upward ? "up" : "down") + (i == res.canonical ? ",canonical" : ""));
        }
      } catch (const NoCrossing&) {
        t.trailer.push_back(std::string("crossing,") + to_string(ind) + ",none");
      } catch (const AsymptoticRegimeViolation&) {
        t.trailer.push_back(std::string("crossing,") + to_string(ind) + ",regime-violation");
      }
    }
  }
  return t;
}

namespace {

ordered_json optional_number(const std::optional<double>& v) { return v ? json_number(*v) : ordered_json(nullptr); }

}  // namespace

ordered_json report_to_json(const ObservableReport& rep) {
  ordered_json j;
  j["method"] = to_string(rep.method);
  j["alpha"] = json_number(rep.alpha);
  j["r"] = json_number(rep.r);
  j["eps"] = json_number(rep.eps);
  j["mean_pairs_photons"] = json_number(rep.mean_pairs_photons);
  j["var_x_minus"] = json_number(rep.var_x_minus);
  j["var_x_plus"] = optional_number(rep.var_x_plus);
  j["b_squared"] = optional_number(rep.b_squared);
  j["uncertainty_product"] = optional_number(rep.uncertainty_product);
  j["window_mass"] = optional_number(rep.window_mass);
  j["odd_moment_max"] = optional_number(rep.odd_moment_max);
  return j;
}

ordered_json cmd_observables(const ObservablesRequest& req, const std::string& config_hash) {
  if (req.methods.empty()) throw ParameterError("observables needs at least one method");
  ordered_json j;
  j["command"] = "observables";
  j["config_hash"] = "fnv1a64:" + config_hash;
  j["constants_version"] = kConstants.version;
  j["alpha"] = json_number(req.alpha);
  j["r"] = json_number(req.r);
  j["eps"] = json_number(req.eps);
  ordered_json reports = ordered_json::array();
  for (auto m : req.methods) reports.push_back(report_to_json(observable_report(req.alpha, req.r, req.eps, m, req.ensemble)));
  j["reports"] = std::move(reports);
  return j;
}

namespace {

ordered_json indicator_json(const IndicatorValue& v) {
  ordered_json j;
  j["log"] = json_number(v.log_value);
  if (std::isinf(v.log_value) && v.log_value < 0) j["log"] = "-inf";
  j["value"] = optional_number(v.value);
  j["valid"] = v.valid;
  return j;
}

}  // namespace

ordered_json validity_report_to_json(const ValidityReport& rep) {
  ordered_json j;
  j["r"] = json_number(rep.query.r);
  j["alpha"] = json_number(rep.query.alpha);
  j["eps"] = json_number(rep.query.eps);
  j["v_mean"] = indicator_json(rep.v_mean);
  j["v_sq"] = indicator_json(rep.v_sq);
  j["v_hz"] = indicator_json(rep.v_hz);
  j["v1"] = indicator_json(rep.v1);
  j["v2"] = indicator_json(rep.v2);
  j["v_ie"] = indicator_json(rep.v_ie);
  j["v_p"] = rep.v_p ? indicator_json(*rep.v_p) : ordered_json(nullptr);
  return j;
}

ordered_json cmd_verdict(double pump_energy, double wavelength, double signal_energy, double eps,
                         const std::string& config_hash) {
  const ExperimentVerdict v = experiment_verdict(pump_energy, wavelength, signal_energy, eps);
  ordered_json j;
  j["command"] = "verdict";
  j["config_hash"] = "fnv1a64:" + config_hash;
  j["constants_version"] = kConstants.version;
  j["pump_energy"] = json_number(pump_energy);
  j["pump_wavelength"] = json_number(wavelength);
  j["signal_energy"] = json_number(signal_energy);
  j["alpha"] = json_number(v.alpha);
  j["r"] = json_number(v.r);
  j["pump_photons"] = json_number(v.pump_photons);
  j["signal_photons"] = json_number(v.signal_photons);
  j["decision"] = to_string(v.decision);
  j["parametric_valid"] = v.report.v_p && v.report.v_p->valid;
  j["isoenergetic_valid"] = v.report.v_ie.valid;
  j["report"] = validity_report_to_json(v.report);
  return j;
}

NumericTable simulate_table(const SimulateRequest& req) {
  if (req.N == 0) throw ParameterError("simulate needs N >= 1");
  if (!(req.r >= 0.0) || !std::isfinite(req.r)) throw ParameterError("simulate needs finite r >= 0");
  const auto p = convention_params(req.r, req.convention);
  const double tau = tau_for_squeezing(req.N, p.r_eff);
  const auto numeric = integrate_subspace(req.N, tau, req.integrator);
  NumericTable t;
  t.columns = {"n", "psi_numeric"};
  std::optional<SubspaceAmplitudes> iso, param;
  if (req.compare) {
    t.columns.push_back("psi_iso");
    t.columns.push_back("psi_param");
    iso = isoenergetic_amplitudes(req.N, tau);
    param = parametric_projection_amplitudes(req.N, std::sqrt(static_cast<double>(req.N)), p.r_eff, p.weight);
  }
  t.rows.reserve(req.N + 1);
  for (std::size_t n = 0; n <= req.N; ++n) {
    std::vector<double> row{static_cast<double>(n), numeric.amps[n]};
    if (req.compare) {
      row.push_back(iso->amps[n]);
      row.push_back(param->amps[n]);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable cmd_simulate(const SimulateRequest& req, const std::string& config_hash) {
  const NumericTable nt = simulate_table(req);
  CsvTable t;
  t.command = "simulate";
  t.config_hash = config_hash;
  t.columns = nt.columns;
  for (const auto& row : nt.rows) {
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (double v : row) cells.push_back(format_number(v));
    t.rows.push_back(std::move(cells));
  }
  t.trailer.push_back(std::string("convention,") + to_string(req.convention));
  return t;
}

void write_binary(std::ostream& os, const std::vector<std::vector<double>>& rows, std::uint32_t ncols) {
  os.write("ISQZAMP1", 8);
  const std::uint64_t nrows = rows.size();
  os.write(reinterpret_cast<const char*>(&ncols), sizeof ncols);
  os.write(reinterpret_cast<const char*>(&nrows), sizeof nrows);
  for (const auto& row : rows) {
    if (row.size() != ncols) throw ParameterError("binary dump rows must all have ncols entries");
    os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
}

}  // namespace isosqueeze::reports
