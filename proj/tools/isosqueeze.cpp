// isosqueeze command-line front end.
//
//   isosqueeze <command> [--alpha --r --eps --N --grid --out --format --threads --config]
//
// Exit codes: 0 success, 2 invalid parameters, 3 numeric guard tripped.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "isosqueeze/errors.hpp"
#include "isosqueeze/parallel.hpp"
#include "isosqueeze/reports.hpp"

namespace {

using namespace isosqueeze;
using namespace isosqueeze::reports;

constexpr int kExitOk = 0;
constexpr int kExitParameter = 2;
constexpr int kExitNumeric = 3;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParameterError(std::string("cannot parse ") + what + " value '" + s + "'");
  }
  if (used != s.size()) throw ParameterError(std::string("cannot parse ") + what + " value '" + s + "'");
  return v;
}

std::vector<double> parse_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(to_double(item, what));
  return out;
}

/// "start:stop:step" (inclusive) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_doubles(text, "--grid");
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw ParameterError("--grid range must look like start:stop:step");
  const double a = to_double(parts[0], "--grid");
  const double b = to_double(parts[1], "--grid");
  const double h = to_double(parts[2], "--grid");
  if (!(h > 0.0) || b < a) throw ParameterError("--grid range needs step > 0 and stop >= start");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9));
  for (std::size_t k = 0; k <= count; ++k) out.push_back(a + h * static_cast<double>(k));
  return out;
}

std::vector<std::size_t> parse_counts(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) {
    const double v = to_double(item, "--N");
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e9) throw ParameterError("--N entries must be integers >= 0");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

struct Options {
  double alpha = 0.0;
  double r = 0.0;
  std::string eps;
  std::string N;
  std::string grid;
  std::string out;
  std::string format;
  unsigned threads = default_thread_count();

  std::string indicator = "v_p";
  double r_min = 0.0;
  double r_max = 8.0;
  double step = 0.05;
  double alpha_min = 1.0;
  double alpha_max = 1e12;
  std::string methods = "ParametricZeroth,IsoenergeticFormula,PerturbativeSecond";
  double pump_energy = 0.0;
  double wavelength = 0.0;
  double signal_energy = 0.0;
  std::string convention;
  bool compare = false;
  double safety = 0.25;
  std::size_t steps = 0;
  std::size_t pair_cap = 0;
};

IntegratorConfig integrator_from(const Options& o) {
  IntegratorConfig cfg;
  if (o.steps > 0) {
    cfg.step_mode = FixedCount{o.steps};
  } else {
    cfg.step_mode = SpectralSafety{o.safety};
  }
  if (o.pair_cap > 0) cfg.truncation = PairTruncation{o.pair_cap};
  cfg.validate();
  return cfg;
}

double single_eps(const Options& o, double fallback) {
  if (o.eps.empty()) return fallback;
  const auto v = parse_doubles(o.eps, "--eps");
  if (v.size() != 1) throw ParameterError("this command takes a single --eps value");
  return v.front();
}

void emit(const std::string& text, const Options& o) {
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + o.out);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + o.out);
}

std::string render_table(const CsvTable& t, const std::string& format) {
  std::ostringstream os;
  if (format.empty() || format == "csv") {
    t.write(os);
  } else if (format == "json") {
    os << t.to_json().dump(2) << '\n';
  } else {
    throw ParameterError("unsupported --format '" + format + "' for this command (csv or json)");
  }
  return os.str();
}

std::string render_json(const nlohmann::ordered_json& j, const std::string& format) {
  if (!format.empty() && format != "json") {
    throw ParameterError("this command writes JSON only (got --format " + format + ")");
  }
  return j.dump(2) + "\n";
}

int run_table1(const Options& o) {
  Table1Request req;
  req.convention = TableConvention::Table;
  if (!o.convention.empty()) {
    const auto c = parse_convention(o.convention);
    if (!c) throw ParameterError("--convention must be table or literal");
    req.convention = *c;
  }
  req.integrator = integrator_from(o);
  req.threads = o.threads;
  if (o.N.empty() && o.grid.empty()) {
    req.cells = default_table1_cells();
  } else {
    const auto Ns = o.N.empty() ? std::vector<std::size_t>{4000, 9000} : parse_counts(o.N);
    const auto rs = o.grid.empty() ? parse_grid("0.5:2:0.25") : parse_grid(o.grid);
    for (auto N : Ns) {
      for (double r : rs) req.cells.emplace_back(N, r);
    }
  }
  ConfigRecord rec;
  rec.add("command", "table1");
  rec.add("convention", to_string(req.convention));
  for (const auto& [N, r] : req.cells) rec.add("cell", std::to_string(N) + ":" + format_number(r));
  rec.add("safety", format_number(o.safety));
  rec.add("steps", std::to_string(o.steps));
  rec.add("pair_cap", std::to_string(o.pair_cap));
  const CsvTable t = cmd_table1(req, rec.hash());
  emit(render_table(t, o.format), o);
  return kExitOk;
}

int run_validity_curve(const Options& o) {
  ValidityCurveRequest req;
  const auto ind = parse_indicator(o.indicator);
  if (!ind) throw ParameterError("unknown --indicator '" + o.indicator + "'");
  req.indicator = *ind;
  req.eps_list = o.eps.empty() ? std::vector<double>{0.1} : parse_doubles(o.eps, "--eps");
  req.r_grid = parse_grid(o.grid.empty() ? "0.25:15:0.25" : o.grid);
  req.alpha_min = o.alpha_min;
  req.alpha_max = o.alpha_max;
  req.threads = o.threads;
  ConfigRecord rec;
  rec.add("command", "validity-curve");
  rec.add("indicator", to_string(req.indicator));
  for (double e : req.eps_list) rec.add("eps", format_number(e));
  for (double r : req.r_grid) rec.add("r", format_number(r));
  rec.add("alpha_min", format_number(req.alpha_min));
  rec.add("alpha_max", format_number(req.alpha_max));
  emit(render_table(cmd_validity_curve(req, rec.hash()), o.format), o);
  return kExitOk;
}

int run_validity_scan(const Options& o) {
  ValidityScanRequest req;
  req.alpha = o.alpha > 0.0 ? o.alpha : 2e6;
  req.eps = single_eps(o, 0.01);
  req.r_min = o.r_min;
  req.r_max = o.r_max;
  req.step = o.step;
  ConfigRecord rec;
  rec.add("command", "validity-scan");
  rec.add("alpha", format_number(req.alpha));
  rec.add("eps", format_number(req.eps));
  rec.add("r_min", format_number(req.r_min));
  rec.add("r_max", format_number(req.r_max));
  rec.add("step", format_number(req.step));
  emit(render_table(cmd_validity_scan(req, rec.hash()), o.format), o);
  return kExitOk;
}

int run_observables(const Options& o) {
  ObservablesRequest req;
  req.alpha = o.alpha > 0.0 ? o.alpha : 100.0;
  req.r = o.r;
  req.eps = single_eps(o, 0.01);
  for (const auto& name : split_list(o.methods)) {
    const auto m = parse_method(name);
    if (!m) throw ParameterError("unknown method '" + name + "'");
    req.methods.push_back(*m);
  }
  req.ensemble.threads = o.threads;
  req.ensemble.integrator = integrator_from(o);
  ConfigRecord rec;
  rec.add("command", "observables");
  rec.add("alpha", format_number(req.alpha));
  rec.add("r", format_number(req.r));
  rec.add("eps", format_number(req.eps));
  rec.add("methods", o.methods);
  rec.add("safety", format_number(o.safety));
  rec.add("steps", std::to_string(o.steps));
  emit(render_json(cmd_observables(req, rec.hash()), o.format), o);
  return kExitOk;
}

int run_verdict(const Options& o) {
  const double eps = single_eps(o, 0.01);
  ConfigRecord rec;
  rec.add("command", "verdict");
  rec.add("pump_energy", format_number(o.pump_energy));
  rec.add("wavelength", format_number(o.wavelength));
  rec.add("signal_energy", format_number(o.signal_energy));
  rec.add("eps", format_number(eps));
  emit(render_json(cmd_verdict(o.pump_energy, o.wavelength, o.signal_energy, eps, rec.hash()), o.format), o);
  return kExitOk;
}

int run_simulate(const Options& o) {
  SimulateRequest req;
  const auto Ns = o.N.empty() ? std::vector<std::size_t>{1} : parse_counts(o.N);
  if (Ns.size() != 1) throw ParameterError("simulate takes a single --N");
  req.N = Ns.front();
  req.r = o.r;
  req.convention = TableConvention::Literal;
  if (!o.convention.empty()) {
    const auto c = parse_convention(o.convention);
    if (!c) throw ParameterError("--convention must be table or literal");
    req.convention = *c;
  }
  req.compare = o.compare;
  req.integrator = integrator_from(o);
  ConfigRecord rec;
  rec.add("command", "simulate");
  rec.add("N", std::to_string(req.N));
  rec.add("r", format_number(req.r));
  rec.add("convention", to_string(req.convention));
  rec.add("compare", req.compare ? "1" : "0");
  rec.add("safety", format_number(o.safety));
  rec.add("steps", std::to_string(o.steps));
  rec.add("pair_cap", std::to_string(o.pair_cap));
  if (o.format == "binary") {
    if (o.out.empty() || o.out == "-") throw ParameterError("--format binary needs --out <file>");
    const NumericTable nt = simulate_table(req);
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + o.out);
    write_binary(f, nt.rows, static_cast<std::uint32_t>(nt.columns.size()));
    return kExitOk;
  }
  emit(render_table(cmd_simulate(req, rec.hash()), o.format), o);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and approximate degenerate downconversion in energy subspaces"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI/TOML file; flags override file values");

  Options o;
  app.add_option("--alpha", o.alpha, "Pump amplitude alpha");
  app.add_option("--r", o.r, "Squeezing parameter r");
  app.add_option("--eps", o.eps, "Acceptable error (comma list for validity-curve)");
  app.add_option("--N", o.N, "Subspace index N (comma list for table1)");
  app.add_option("--grid", o.grid, "r grid: start:stop:step or comma list");
  app.add_option("--out", o.out, "Output file (default stdout)");
  app.add_option("--format", o.format, "csv, json, or binary (simulate)");
  app.add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--indicator", o.indicator, "v_mean, v_sq, v_hz, v1, v2, v_ie, v_p");
  app.add_option("--r-min", o.r_min, "Scan start");
  app.add_option("--r-max", o.r_max, "Scan end");
  app.add_option("--step", o.step, "Scan step");
  app.add_option("--alpha-min", o.alpha_min, "Boundary search lower alpha");
  app.add_option("--alpha-max", o.alpha_max, "Boundary search upper alpha");
  app.add_option("--methods", o.methods, "Comma list of observable methods");
  app.add_option("--pump-energy", o.pump_energy, "Pump pulse energy [J]");
  app.add_option("--wavelength", o.wavelength, "Pump wavelength [m]");
  app.add_option("--signal-energy", o.signal_energy, "Signal pulse energy [J]");
  app.add_option("--convention", o.convention, "table or literal");
  app.add_flag("--compare", o.compare, "simulate: add closed-form columns");
  app.add_option("--safety", o.safety, "RK4 spectral safety factor in (0, 1]");
  app.add_option("--steps", o.steps, "Fixed RK4 step count (overrides --safety)");
  app.add_option("--pair-cap", o.pair_cap, "Truncate subspaces at this pair index");

  std::string command;
  const std::pair<const char*, const char*> commands[] = {
      {"table1", "Subspace distances and norms of both approximations (CSV)"},
      {"validity-curve", "Boundary alpha*(r) of one indicator for each eps (CSV)"},
      {"validity-scan", "Log indicators over an r grid at fixed alpha, eps (CSV)"},
      {"observables", "Mean photon number and quadrature variances by method (JSON)"},
      {"verdict", "Which approximation an experiment's pulse energies allow (JSON)"},
      {"simulate", "Amplitudes of one subspace after RK4 integration (CSV or binary)"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->fallthrough()->callback([&command, name = name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParameter;
  }

  try {
    if (command == "table1") return run_table1(o);
    if (command == "validity-curve") return run_validity_curve(o);
    if (command == "validity-scan") return run_validity_scan(o);
    if (command == "observables") return run_observables(o);
    if (command == "verdict") return run_verdict(o);
    if (command == "simulate") return run_simulate(o);
    std::cerr << "isosqueeze: unknown command\n";
    return kExitParameter;
  } catch (const ParameterError& e) {
    std::cerr << "isosqueeze: invalid parameters: " << e.what() << '\n';
    return kExitParameter;
  } catch (const NumericGuardError& e) {
    std::cerr << "isosqueeze: numeric guard: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "isosqueeze: " << e.what() << '\n';
    return 1;
  }
}
