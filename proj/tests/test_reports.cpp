#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "isosqueeze/errors.hpp"
#include "isosqueeze/reports.hpp"

using namespace isosqueeze;
using namespace isosqueeze::reports;

TEST_CASE("numbers carry twelve significant digits") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1234567890123456) == "0.123456789012");
  CHECK(format_number(1.0 / 3.0e10) == "3.33333333333e-11");
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(round12(M_PI) == 3.14159265359);
}

TEST_CASE("property: format and parse round-trip is idempotent at 12 digits") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> mant(-10.0, 10.0), ex(-300.0, 300.0);
  for (int i = 0; i < 5000; ++i) {
    const double x = mant(rng) * std::pow(10.0, ex(rng));
    const double once = round12(x);
    CHECK(round12(once) == once);
    CHECK(format_number(once) == format_number(x));
    if (x != 0.0) CHECK(std::abs(once - x) <= 5e-12 * std::abs(x));
  }
}

TEST_CASE("config hash is deterministic and sensitive to content") {
  ConfigRecord a;
  a.add("command", "table1");
  a.add("N", "4000");
  ConfigRecord b = a;
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);
  b.add("r", "1");
  CHECK(a.hash() != b.hash());
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("CSV writer emits metadata, header, rows and trailer") {
  CsvTable t;
  t.command = "unit";
  t.config_hash = "0123456789abcdef";
  t.columns = {"x", "y"};
  t.rows = {{"1", "2"}, {"3", ""}};
  t.trailer = {"note,hello"};
  std::ostringstream os;
  t.write(os);
  const auto parsed = parse_csv(os.str());
  REQUIRE(parsed.comments.size() == 4);
  CHECK(parsed.comments[0] == "command,unit");
  CHECK(parsed.comments[1] == "config_hash,fnv1a64:0123456789abcdef");
  CHECK(parsed.comments[2] == std::string("constants_version,") + kConstants.version);
  CHECK(parsed.comments[3] == "note,hello");
  CHECK(parsed.columns == t.columns);
  REQUIRE(parsed.rows.size() == 2);
  CHECK(parsed.rows[0] == t.rows[0]);
  CHECK(parsed.rows[1].size() == 2);
  CHECK(parsed.rows[1][1].empty());

  const auto j = t.to_json();
  CHECK(j["command"] == "unit");
  CHECK(j["rows"][1]["y"].is_null());
}

TEST_CASE("table1 cells: small subspace, both conventions, error rows") {
  const auto c = table1_cell(200, 0.5, TableConvention::Table);
  CHECK_FALSE(c.error.has_value());
  CHECK(c.iso_norm <= 1.0 + 1e-15);
  CHECK(c.iso_distance < 0.05);
  CHECK(c.param_norm < 1.0);
  const auto lit = table1_cell(200, 1.0, TableConvention::Literal);
  CHECK(lit.iso_distance == doctest::Approx(c.iso_distance).epsilon(1e-9));

  IntegratorConfig coarse;
  coarse.step_mode = FixedCount{1};
  Table1Request req;
  req.cells = {{200, 1.0}, {50, 0.25}};
  req.integrator = coarse;
  const auto t = cmd_table1(req, "h");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][2].empty());
  CHECK(t.trailer.at(0) == "convention,table");
  CHECK(t.trailer.at(1).rfind("error,200,1,", 0) == 0);

  req.cells = {{0, 1.0}};
  CHECK_THROWS_AS((void)cmd_table1(req, "h"), ParameterError);
  CHECK(default_table1_cells().size() == 12);
}

TEST_CASE("validity scan and curve tables") {
  ValidityScanRequest s;
  s.r_min = 4.0;
  s.r_max = 7.0;
  const auto t = cmd_validity_scan(s, "h");
  CHECK(t.rows.size() == 61);
  CHECK(t.columns.at(5) == "ln_v_ie");
  bool saw_p = false;
  for (const auto& line : t.trailer) {
    if (line.rfind("crossing,v_p,", 0) == 0 && line.find("canonical") != std::string::npos) saw_p = true;
  }
  CHECK(saw_p);

  ValidityScanRequest zero;
  zero.alpha = 1000.0;
  zero.eps = 0.1;
  zero.r_min = zero.r_max = 0.0;
  const auto z = cmd_validity_scan(zero, "h");
  REQUIRE(z.rows.size() == 1);
  CHECK(std::stod(z.rows[0][3]) == doctest::Approx(std::log(2.0 / (2.0 * 1000.0 * 0.1))));

  ValidityCurveRequest c;
  c.indicator = Indicator::HZ;
  c.eps_list = {0.1};
  c.r_grid = {2.0};
  const auto curve = cmd_validity_curve(c, "h");
  CHECK(std::stod(curve.rows.at(0).at(3)) == doctest::Approx(546.0).epsilon(1e-3));
  c.eps_list = {1.5};
  CHECK_THROWS_AS((void)cmd_validity_curve(c, "h"), ParameterError);
}

TEST_CASE("observables and verdict JSON") {
  ObservablesRequest req;
  req.methods = {ObservableMethod::ParametricZeroth, ObservableMethod::PerturbativeSecond};
  const auto j = cmd_observables(req, "h");
  REQUIRE(j["reports"].size() == 2);
  CHECK(j["reports"][0]["method"] == "ParametricZeroth");
  CHECK(j["reports"][1]["var_x_plus"].is_null());
  CHECK(json_number(NAN).is_null());

  const auto v = cmd_verdict(1e-6, 776e-9, 0.0, 0.01, "h");
  CHECK(v["decision"] == "parametric-OK");
}

TEST_CASE("simulate table and binary dump") {
  SimulateRequest req;
  req.N = 1;
  req.r = 1.0;
  const auto t = simulate_table(req);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == doctest::Approx(std::cos(std::sqrt(2.0) * 0.5)).epsilon(1e-9));
  CHECK(t.rows[1][1] == doctest::Approx(std::sin(std::sqrt(2.0) * 0.5)).epsilon(1e-9));

  req.N = 30;
  req.r = 0.0;
  req.compare = true;
  const auto zero = simulate_table(req);
  CHECK(zero.columns.size() == 4);
  CHECK(zero.rows[0][1] == 1.0);
  for (std::size_t n = 1; n <= 30; ++n) CHECK(zero.rows[n][1] == 0.0);

  std::ostringstream os;
  write_binary(os, zero.rows, 4);
  const std::string bytes = os.str();
  CHECK(bytes.size() == 8 + 4 + 8 + 31 * 4 * sizeof(double));
  CHECK(bytes.substr(0, 8) == "ISQZAMP1");
  std::uint64_t nrows = 0;
  std::memcpy(&nrows, bytes.data() + 12, sizeof nrows);
  CHECK(nrows == 31);
  CHECK_THROWS_AS(write_binary(os, {{1.0}}, 2), ParameterError);
}
