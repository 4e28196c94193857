#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <doctest.h>

#include "cli_app.hpp"
#include "pbs/errors.hpp"
#include "pbs/problem_io.hpp"
#include "pbs/verify.hpp"

using namespace pbs;

namespace {

const std::string kData = PBS_TEST_DATA_DIR;

struct RunResult {
  int status;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pbs");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string data(const std::string& name) { return kData + "/" + name; }

std::string field_of(const std::string& text) {
  try {
    (void)io::parse_problem_text(text);
  } catch (const InputError& e) {
    return e.field();
  }
  return {};
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("parse a minimal scalar problem") {
  const auto p = io::parse_problem_text(R"j({"dim": 1, "A": [[[1.0]]]})j");
  CHECK(p.dim == 1);
  CHECK(p.t0 == 0.0);
  CHECK(p.domain == Interval(0.0, 1.0));
  CHECK(p.options == io::ProblemOptions{});
  CHECK(p.options.tol == 1e-10);
  CHECK(p.options.mu_max == 1.0);
  CHECK(p.options.degree_cap == 64);
  const CauchyProblem cp = p.to_problem();
  CHECK(cp.dim() == 1);
  CHECK(cp.a(0.3)(0, 0) == 1.0);
  CHECK(cp.x0 == Vector::Zero(1));
  CHECK_FALSE(cp.b.has_value());
}

TEST_CASE("parse builtins") {
  const auto p = io::parse_problem_text(R"j({"A": "example1(a=2)"})j");
  REQUIRE(p.builtin());
  CHECK(p.builtin()->kind == io::Builtin::Kind::kExample1);
  CHECK(p.builtin()->a == 2.0);
  CHECK(p.dim == 2);
  for (double t : {-0.5, 0.0, 1.3}) CHECK(p.a_polynomial()(t) == verify::example1_family(2.0)(t));
  const auto q = io::parse_problem_text(R"j({"A": "airy(a=-1.5)", "domain": [-1, 1]})j");
  CHECK(q.builtin()->kind == io::Builtin::Kind::kAiry);
  CHECK(q.builtin()->a == -1.5);
  CHECK(field_of(R"j({"A": "bessel(a=1)"})j") == "A");
  CHECK(field_of(R"j({"A": "airy(a=1)", "dim": 3})j") == "dim");
}

TEST_CASE("polynomial entries use the file origin") {
  const auto p = io::parse_problem_text(R"j({"dim": 1, "origin": 1.0, "A": [[[0.0, 2.0]]], "domain": [0, 3]})j");
  CHECK(p.to_problem().a(3.0)(0, 0) == doctest::Approx(4.0));
  CHECK(p.to_problem().a(1.0)(0, 0) == 0.0);
}

TEST_CASE("malformed problems name the field") {
  CHECK(field_of(R"j({"dim": 2, "A": [[[1.0], [0.0]], [[0.0], "x"]]})j") == "A[1][1]");
  CHECK(field_of(R"j({"dim": 2, "A": [[[1.0], [0.0]]]})j") == "A");
  CHECK(field_of(R"j({"dim": 2, "A": [[[1.0]], [[0.0], [1.0]]]})j") == "A[0]");
  CHECK(field_of(R"j({"A": [[[1.0]]]})j") == "dim");
  CHECK(field_of(R"j({"dim": 1})j") == "A");
  CHECK(field_of(R"j({"dim": 1, "A": [[[1.0]]], "x0": [1, 2]})j") == "x0");
  CHECK(field_of(R"j({"dim": 1, "A": [[[1.0]]], "b": [[1], [2]]})j") == "b");
  CHECK(field_of(R"j({"dim": 1, "A": [[[1.0]]], "t0": 5, "domain": [0, 1]})j") == "t0");
  CHECK(field_of(R"j({"dim": 1, "A": [[[1.0]]], "domain": [1, 0]})j") == "domain");
  CHECK(field_of(R"j({"dim": 1, "A": [[[1.0]]], "options": {"tol": -1}})j") == "options.tol");
  CHECK(field_of(R"j({"dim": 1, "A": [[[1.0]]], "options": {"degree_cap": 1.5}})j") == "options.degree_cap");
  CHECK(field_of(R"j({"dim": 1, "A": [[[1.0]]], "options": {"colour": 1}})j") == "options.colour");
  CHECK(field_of(R"j({"dim": 1, "A": [[[1.0]]], "extra": 0})j") == "extra");
  CHECK(field_of(R"j({"dim": 1, "A": [[[1.0]]])j") == "json");
  CHECK(field_of("[]") == "json");
}

TEST_CASE("serialize then parse is idempotent") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_int_distribution<int> len(0, 4);
  for (int trial = 0; trial < 100; ++trial) {
    io::ProblemFile p;
    p.dim = dim(rng);
    p.origin = u(rng);
    p.domain = Interval(-1.0 + 0.1 * u(rng), 1.0 + u(rng));
    p.t0 = 0.25 * u(rng);
    io::CoeffGrid grid(static_cast<std::size_t>(p.dim), io::CoeffList(static_cast<std::size_t>(p.dim)));
    for (auto& row : grid)
      for (auto& entry : row)
        for (int k = len(rng); k > 0; --k) entry.push_back(u(rng) * std::pow(10.0, 20.0 * u(rng)));
    p.a = grid;
    if (trial % 2 == 0) {
      io::CoeffList b(static_cast<std::size_t>(p.dim));
      for (auto& entry : b) entry.push_back(u(rng));
      p.b = b;
    }
    if (trial % 3 == 0) p.x0 = std::vector<double>(static_cast<std::size_t>(p.dim), u(rng));
    p.options.tol = std::pow(10.0, -8.0 + 4.0 * u(rng));
    p.options.degree_cap = 10 + trial;
    const auto again = io::parse_problem_text(io::serialize_problem(p));
    CHECK(again == p);
    CHECK(io::serialize_problem(again) == io::serialize_problem(p));
  }
  const auto b = io::parse_problem_text(R"j({"A": "airy(a=0.3)", "domain": [-2, 2]})j");
  CHECK(io::parse_problem_text(io::serialize_problem(b)) == b);
}

TEST_CASE("time lists") {
  CHECK(io::parse_time_list("1,2.5,3") == std::vector<double>{1.0, 2.5, 3.0});
  const auto r = io::parse_time_list("0:1.5:0.1");
  REQUIRE(r.size() == 16);
  CHECK(r.front() == 0.0);
  CHECK(r.back() == doctest::Approx(1.5));
  CHECK(io::parse_time_list("1:0:-0.5") == std::vector<double>{1.0, 0.5, 0.0});
  CHECK(io::parse_time_list("0,2:3:1") == std::vector<double>{0.0, 2.0, 3.0});
  CHECK_THROWS_AS(io::parse_time_list("0:1:0"), InputError);
  CHECK_THROWS_AS(io::parse_time_list("0:1:-1"), InputError);
  CHECK_THROWS_AS(io::parse_time_list("a"), InputError);
  CHECK_THROWS_AS(io::parse_time_list(""), InputError);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, std::numbers::e, -1e-300, 6.02214076e23})
    CHECK(std::stod(io::format_number(v)) == v);
  CHECK(io::matrix_columns(2) == std::vector<std::string>{"entry_00", "entry_01", "entry_10", "entry_11"});
  CHECK(io::vector_columns(2) == std::vector<std::string>{"x_0", "x_1"});
}

TEST_CASE("transition command") {
  SUBCASE("t = t0 gives the identity with bound 0") {
    const auto r = run_cli({"transition", "--problem", data("zero.json"), "--t", "0.5"});
    CHECK(r.status == 0);
    CHECK(r.out == "time,entry_00,entry_01,entry_10,entry_11,bound\n0.5,1,0,0,1,0\n");
  }
  SUBCASE("example1(a=2) at t = 1") {
    const auto r = run_cli({"transition", "--problem", data("example1_a2.json"), "--t", "1"});
    REQUIRE(r.status == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 1);
    const Matrix phi = verify::example1_phi(2.0, 1.0);
    CHECK(rows[0][1] == doctest::Approx(phi(0, 0)).epsilon(1e-10));
    CHECK(rows[0][2] == doctest::Approx(phi(0, 1)).epsilon(1e-10));
    CHECK(rows[0][3] == 0.0);
    CHECK(rows[0][4] == doctest::Approx(phi(1, 1)).epsilon(1e-10));
    CHECK(rows[0][5] > 0.0);
    CHECK(rows[0][5] <= 1e-10);
  }
  SUBCASE("airy(a=1) over a range") {
    const auto r = run_cli({"transition", "--problem", data("airy_a1.json"), "--t", "0:1.5:0.1"});
    REQUIRE(r.status == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 16);
    for (const auto& row : rows) {
      const Matrix phi = verify::airy_phi(1.0, row[0]);
      for (int k = 0; k < 4; ++k) CHECK(std::abs(row[static_cast<std::size_t>(k) + 1] - phi(k / 2, k % 2)) <= 1e-9);
    }
  }
  SUBCASE("times on both sides of t0") {
    const auto r = run_cli({"transition", "--problem", data("airy_a1.json"), "--t", "-1,0,1"});
    REQUIRE(r.status == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(std::abs(rows[0][1] - verify::airy_phi(1.0, -1.0)(0, 0)) <= 1e-9);
  }
  SUBCASE("fast path on a commuting family") {
    const std::string path = (std::filesystem::temp_directory_path() / "pbs_test_commuting.json").string();
    std::ofstream(path) << R"j({"A": "example1(a=1)", "domain": [0, 2]})j";
    const auto fast = run_cli({"transition", "--problem", path, "--t", "2", "--fast-path"});
    const auto slow = run_cli({"transition", "--problem", path, "--t", "2"});
    REQUIRE(fast.status == 0);
    REQUIRE(slow.status == 0);
    const auto a = csv_rows(fast.out)[0];
    const auto b = csv_rows(slow.out)[0];
    for (std::size_t k = 1; k < 5; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-10));
    std::filesystem::remove(path);
  }
  SUBCASE("json output and phi dump") {
    const std::string dump = (std::filesystem::temp_directory_path() / "pbs_test_dump.json").string();
    const auto r = run_cli(
        {"transition", "--problem", data("airy_a1.json"), "--t", "1", "--format", "json", "--dump-phi", dump});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("\"time\"") != std::string::npos);
    std::ifstream in(dump);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("\"steps\"") != std::string::npos);
    std::filesystem::remove(dump);
  }
  SUBCASE("time outside the domain is an engine error") {
    const auto r = run_cli({"transition", "--problem", data("airy_a1.json"), "--t", "5"});
    CHECK(r.status == 3);
  }
}

TEST_CASE("solve command") {
  const auto r = run_cli({"solve", "--problem", data("scalar.json"), "--t", "1"});
  CHECK(r.status == 2);
  CHECK(r.err.find("x0") != std::string::npos);

  const auto ok = run_cli({"solve", "--problem", data("forced.json"), "--t", "-0.5,0,1"});
  REQUIRE(ok.status == 0);
  const auto rows = csv_rows(ok.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][1] == 1.0);
  CHECK(rows[1][2] == -1.0);
  const CauchyProblem p = io::parse_problem(data("forced.json")).to_problem();
  const Vector ref = verify::rk4_reference(p, 1.0, 4000);
  CHECK(std::abs(rows[2][1] - ref(0)) <= 1e-9);
  CHECK(std::abs(rows[2][2] - ref(1)) <= 1e-9);
}

TEST_CASE("verify command") {
  for (const char* file : {"example1_a2.json", "airy_a1.json", "zero.json", "forced.json"}) {
    CAPTURE(file);
    const auto r = run_cli({"verify", "--problem", data(file)});
    CHECK(r.status == 0);
    CHECK(r.out.rfind("check,direction,max_residual,tolerance,pass,grid\n", 0) == 0);
    CHECK(r.out.find(",fail,") == std::string::npos);
  }
  const auto only = run_cli({"verify", "--problem", data("airy_a1.json"), "--checks", "oracle"});
  CHECK(only.status == 0);
  CHECK(only.out.find("liouville") == std::string::npos);
  CHECK(only.out.find("oracle:airy(a=1)") != std::string::npos);

  CHECK(run_cli({"verify", "--problem", data("airy_a1.json"), "--checks", "bogus"}).status == 2);
}

TEST_CASE("unsatisfiable tolerance surfaces as an engine error") {
  const auto r = run_cli({"verify", "--problem", data("corrupted_tol.json")});
  CHECK(r.status == 3);
  CHECK(r.out.find("engine") != std::string::npos);
  CHECK(r.err.find("degree cap 8") != std::string::npos);
  const auto t = run_cli({"transition", "--problem", data("example1_a2.json"), "--tol", "1e-30", "--degree-cap", "8"});
  CHECK(t.status == 3);
}

TEST_CASE("input errors exit 2") {
  const auto shape = run_cli({"transition", "--problem", data("malformed_shape.json")});
  CHECK(shape.status == 2);
  CHECK(shape.err.find("A[1][1]") != std::string::npos);
  const auto syntax = run_cli({"verify", "--problem", data("malformed_syntax.json")});
  CHECK(syntax.status == 2);
  CHECK(syntax.err.find("line 4") != std::string::npos);
  CHECK(run_cli({"transition", "--problem", data("does_not_exist.json")}).status == 2);
  CHECK(run_cli({"transition"}).status == 2);
  CHECK(run_cli({"frobnicate"}).status == 2);
  CHECK(run_cli({"transition", "--problem", data("scalar.json"), "--tol", "-1"}).status == 2);
  CHECK(run_cli({"transition", "--problem", data("scalar.json"), "--format", "xml"}).status == 2);
}

TEST_CASE("identical invocations give identical bytes") {
  const std::vector<std::string> args{"transition", "--problem", data("airy_a1.json"), "--t", "-1:1.5:0.25"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  const auto v1 = run_cli({"verify", "--problem", data("forced.json")});
  const auto v2 = run_cli({"verify", "--problem", data("forced.json")});
  CHECK(v1.out == v2.out);
}

TEST_CASE("bench command") {
  const auto r = run_cli({"bench", "--problem", data("airy_a1.json")});
  CHECK(r.status == 0);
  CHECK(r.out.rfind("tol,steps,max_order,max_degree,total_bound,runtime_us,status\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 8);
}
