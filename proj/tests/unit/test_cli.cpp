#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dlz/cli.hpp"
#include "dlz/error.hpp"
#include "dlz/lzcore.hpp"

using namespace dlz;
using namespace dlz::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string diag;
};

Result exec(const RunConfig& c) {
  std::ostringstream out, diag;
  const int code = run(c, out, diag);
  return {code, out.str(), diag.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<double> numbers(const std::string& row) {
  std::vector<double> out;
  std::istringstream in(row);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(std::stod(cell));
  return out;
}

RunConfig m_chain(Command cmd) {
  RunConfig c;
  c.command = cmd;
  c.atomic = {2.0, 1.0};
  c.omega_plus = c.omega_minus = 5.0 / std::sqrt(2.0);
  return c;
}

}  // namespace

TEST_CASE("argument parsers") {
  CHECK(parse_command("classify") == Command::classify);
  CHECK_THROWS_AS(parse_command("run"), ParseError);
  CHECK(parse_method("asymptotic") == Method::asymptotic);
  CHECK_THROWS_AS(parse_method("exact"), ParseError);
  CHECK(parse_grid("50:log").count == 50);
  CHECK(parse_grid("50:log").spacing == GridSpacing::log);
  CHECK_THROWS_AS(parse_grid("50"), ParseError);
  CHECK_THROWS_AS(parse_grid("0:linear"), ParseError);
  CHECK_THROWS_AS(parse_grid("x:linear"), ParseError);
  const auto s = parse_sweep("omega:0.5:5:10");
  CHECK(s.param == SweepParam::omega);
  CHECK(s.to == 5.0);
  CHECK(s.steps == 10);
  CHECK_THROWS_AS(parse_sweep("mass:0:1:3"), ParseError);
  CHECK(parse_atomic("3/2:1/2") == std::pair<double, double>{1.5, 0.5});
  CHECK(parse_atomic("2:1") == std::pair<double, double>{2.0, 1.0});
  CHECK_THROWS_AS(parse_atomic("2"), ParseError);
}

TEST_CASE("exit codes") {
  RunConfig c;
  c.command = Command::propagate;
  CHECK(exec(c).code == parse_error);  // no system

  c.input = temp_file("dlz_bad.json", "{ not json");
  CHECK(exec(c).code == parse_error);

  c.input = temp_file("dlz_neg.json", R"({"n_a": 1, "n_b": 1, "couplings": [[1, 0]],
                                          "chirp_rate": -2, "tau_i": -5, "tau_f": 5})");
  const auto r = exec(c);
  CHECK(r.code == invalid_physics);
  CHECK(r.diag.find("error:") != std::string::npos);

  auto a = m_chain(Command::atomic);
  a.atomic = {2.0, 3.0};
  CHECK(exec(a).code == invalid_physics);

  auto cl = m_chain(Command::classify);
  cl.method = Method::finite;
  CHECK(exec(cl).code == parse_error);

  auto tol = m_chain(Command::propagate);
  tol.tol = 1e-2;
  CHECK(exec(tol).code == parse_error);

  // a coarse integration cannot confirm the closed form
  auto v = m_chain(Command::populations);
  v.tau_i = -30.0;
  v.tau_f = 30.0;
  v.grid.count = 5;
  v.verify = true;
  v.tol = 1e-4;
  const auto vr = exec(v);
  CHECK(vr.code == numerical_failure);
  CHECK(vr.diag.find("verify:") != std::string::npos);
  v.tol = 1e-11;
  CHECK(exec(v).code == ok);
}

TEST_CASE("decompose a single pair") {
  RunConfig c;
  c.command = Command::decompose;
  c.input = temp_file("dlz_pair.json", R"({"n_a": 1, "n_b": 1, "couplings": [[0.6, 0.8]],
                                           "tau_i": -5, "tau_f": 5})");
  const auto r = exec(c);
  REQUIRE(r.code == ok);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["lambdas"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(j["n_dark"] == 0);
}

TEST_CASE("populations follow the propagator") {
  auto c = m_chain(Command::populations);
  c.tau_i = -40.0;
  c.tau_f = 40.0;
  c.grid.count = 9;
  const auto finite = lines_of(exec(c).out);
  c.method = Method::ode;
  c.tol = 1e-11;
  const auto ode = lines_of(exec(c).out);
  REQUIRE(finite.size() == 10);
  REQUIRE(ode.size() == 10);
  CHECK(finite[0].rfind("tau,re_c1,im_c1,", 0) == 0);
  CHECK(finite[0].find(",P5") != std::string::npos);
  for (std::size_t k = 1; k < finite.size(); ++k) {
    const auto x = numbers(finite[k]), y = numbers(ode[k]);
    REQUIRE(x.size() == 16);
    double total = 0.0;
    for (std::size_t m = 11; m < 16; ++m) {
      CHECK(std::abs(x[m] - y[m]) < 1e-6);
      total += x[m];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("classify reports limits") {
  const auto r = exec(m_chain(Command::classify));
  REQUIRE(r.code == ok);
  const auto rows = lines_of(r.out);
  CHECK(rows[0] == "i,f,status,reason,P_limit");
  REQUIRE(rows.size() == 26);
  // i = a(-2), f = b(-1)
  CHECK(rows[1 + 3].rfind("0,3,Undefined,divergent-interference,", 0) == 0);
  CHECK(rows[1 + 5 + 3].rfind("1,3,AccidentallyDefined,single-term,", 0) == 0);
  const double p = std::stod(rows[1 + 5 + 3].substr(rows[1 + 5 + 3].rfind(',') + 1));
  CHECK(p == doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("Lambda sweep reproduces the Landau-Zener probability") {
  RunConfig c;
  c.command = Command::sweep;
  c.sweep = SweepSpec{SweepParam::lambda, 0.0, 3.0, 13};
  // finite-time ripples are of order sqrt(Lambda)/tau
  c.tau_i = -1000.0;
  c.tau_f = 1000.0;
  c.workers = 3;
  const auto r = exec(c);
  REQUIRE(r.code == ok);
  const auto rows = lines_of(r.out);
  CHECK(rows[0] == "lambda,P1,P2");
  REQUIRE(rows.size() == 14);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto x = numbers(rows[k]);
    CHECK(std::abs(x[2] - lz_probability(x[0])) < 1e-3);
  }
  c.workers = 1;
  CHECK(exec(c).out == r.out);
}

TEST_CASE("outputs are deterministic") {
  auto c = m_chain(Command::sweep);
  c.sweep = SweepSpec{SweepParam::omega, 0.5, 5.0, 6};
  c.tau_i = -60.0;
  c.tau_f = 60.0;
  c.workers = 4;
  const auto first = exec(c);
  REQUIRE(first.code == ok);
  CHECK(exec(c).out == first.out);
  auto p = m_chain(Command::propagate);
  CHECK(exec(p).out == exec(p).out);
}

TEST_CASE("output file") {
  auto c = m_chain(Command::atomic);
  const auto path = (std::filesystem::temp_directory_path() / "dlz_atomic.json").string();
  c.output = path;
  std::ostringstream out, diag;
  REQUIRE(run(c, out, diag) == ok);
  CHECK(out.str().empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["j_a"] == 2.0);
}
