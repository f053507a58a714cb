#include "doctest.h"
#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace hjsym;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hjsym_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSquare = R"({"name": "sq", "n": 16,
  "shape": {"type": "rectangle", "width": 1, "length": 1, "center": [0.5, 0.5]},
  "source": {"type": "const", "c": 1}})";

}  // namespace

TEST_CASE("expression grammar") {
  CHECK(Expression("1 + 2 * 3")(0, 0) == 7);
  CHECK(Expression("2^3^2")(0, 0) == 512);
  CHECK(Expression("-2^2")(0, 0) == -4);
  CHECK(Expression("x*y - (x - y)")(3, 2) == 5);
  CHECK(Expression("sqrt(x^2 + y^2)")(3, 4) == 5);
  CHECK(Expression("min(x, y) + max(x, y) + abs(-1)")(1, 2) == 4);
  CHECK(Expression("pi")(0, 0) == std::numbers::pi);
  CHECK(Expression("1.5e1 / 3")(0, 0) == 5);
  CHECK(Expression(" 0.75 + 0.25*x^2 ").text() == " 0.75 + 0.25*x^2 ");
}

TEST_CASE("expression errors") {
  for (const char* bad : {"", "1 +", "(1", "foo(1)", "min(1)", "1 2", "x $ y", "sqrt 2"})
    CHECK_THROWS_AS(Expression{bad}, ConfigError);
}

TEST_CASE("config parsing") {
  const auto c = parse_config(kSquare);
  CHECK(c.name == "sq");
  CHECK(c.shape.spacing == 1.0 / 16);
  CHECK(std::holds_alternative<Rectangle>(c.shape.shape));
  CHECK(std::get<ConstSource>(c.source).c == 1);
  CHECK(c.constants.gamma_n == 100);
  CHECK(parse_config(R"({"h": 0.1, "shape": {"type": "disk", "radius": 1},
    "source": {"type": "expression", "expr": "1 + x"}})", "dflt").name == "dflt");
}

TEST_CASE("config errors") {
  const char* bad[] = {
      "not json",
      R"({"n": 16, "shape": {"type": "disk", "radius": 1}})",
      R"({"n": 16, "h": 0.1, "shape": {"type": "disk", "radius": 1}, "source": {"type": "const", "c": 1}})",
      R"({"shape": {"type": "disk", "radius": 1}, "source": {"type": "const", "c": 1}})",
      R"({"n": 16, "shape": {"type": "blob"}, "source": {"type": "const", "c": 1}})",
      R"({"n": 16, "shape": {"type": "disk", "radius": 1}, "source": {"type": "const", "k": 1}})",
      R"({"n": 16, "shape": {"type": "disk", "radius": 1}, "source": {"type": "expression", "expr": "1 +"}})",
      R"({"n": 16, "shape": {"type": "polygon", "vertices": [[0,0],[1,0]]}, "source": {"type": "const", "c": 1}})",
      R"({"n": 16, "shape": {"type": "disk", "radius": 1}, "source": {"type": "const", "c": 1}, "extra": 1})",
      R"({"h": -1, "shape": {"type": "disk", "radius": 1}, "source": {"type": "const", "c": 1}})",
  };
  for (const char* text : bad) CHECK_THROWS_AS(parse_config(text), ConfigError);
}

TEST_CASE("overrides") {
  auto c = parse_config(kSquare);
  apply({0.125, 50.0, 2.0}, c);
  CHECK(c.shape.spacing == 0.125);
  CHECK(c.constants.gamma_n == 50);
  CHECK(c.constants.c_tol == 2);
  CHECK_THROWS_AS(apply({-1.0, {}, {}}, c), ConfigError);
}

TEST_CASE("non-positive source is an input error") {
  auto c = parse_config(R"({"n": 16, "shape": {"type": "disk", "radius": 1},
    "source": {"type": "linear", "a1": 2, "a2": 0, "c": 0.5}})");
  CHECK_THROWS_AS(prepare(c), ConfigError);
}

TEST_CASE("grid and profile round trips") {
  auto d = test::domain(Disk{1}, 16);
  const auto u = test::solve(test::constant(d, 1.0));
  std::stringstream bin;
  write_grid_binary(u, bin);
  const auto back = to_grid_function(read_grid_binary(bin), d);
  CHECK((back.values() == u.values()).all());
  std::stringstream junk("NOTAGRID");
  CHECK_THROWS(read_grid_binary(junk));

  const auto us = decreasing_rearrangement(u);
  std::stringstream csv;
  write_step_profile_csv(us, csv);
  const auto p = read_step_profile_csv(csv, Monotonicity::decreasing);
  CHECK(p.size() == us.size());
  CHECK((p.values().array() == us.values().array()).all());
  CHECK((p.breaks().array() == us.breaks().array()).all());
}

TEST_CASE("format_double") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("report JSON round trip") {
  const auto e = prepare(parse_config(kSquare));
  const auto r = report(e);
  const std::string text = report_to_json(r);
  CHECK(text.back() == '\n');
  const auto back = report_from_json(text);
  CHECK(report_to_json(back) == text);
  CHECK(report_to_csv(back) == report_to_csv(r));
}

TEST_CASE("run writes every artifact and is byte deterministic") {
  const auto dir = scratch("run");
  auto c = parse_config(kSquare);
  const auto a = run_batch({c}, dir / "a", 1);
  const auto b = run_batch({c}, dir / "b", 1);
  REQUIRE(a.size() == 1);
  CHECK(a[0].code == exit_ok);
  for (const char* f : {"report.json", "report.csv", "u.csv", "u.bin", "profiles/u_star.csv", "profiles/uG.csv"}) {
    CHECK(fs::exists(dir / "a" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  fs::remove_all(dir);
}

TEST_CASE("batch exit codes") {
  const auto dir = scratch("batch");
  auto good = parse_config(kSquare);
  auto bad = parse_config(R"({"name": "neg", "n": 16, "shape": {"type": "disk", "radius": 1},
    "source": {"type": "const", "c": -1}})");
  const auto out = run_batch({good, bad}, dir, 2);
  REQUIRE(out.size() == 2);
  CHECK(out[0].code == exit_ok);
  CHECK(out[1].code == exit_config);
  CHECK(out[0].dir == dir / "sq");
  CHECK(combine_codes(out) == exit_config);

  RunOutcome a, b;
  a.code = exit_inequality;
  b.code = exit_solver;
  CHECK(combine_codes({a, b}) == exit_solver);
  CHECK(combine_codes({a}) == exit_inequality);
  CHECK(combine_codes({}) == exit_ok);
  fs::remove_all(dir);
}

TEST_CASE("config directories load sorted") {
  const auto dir = scratch("cfgdir");
  write_text(dir / "b.json", kSquare);
  write_text(dir / "a.json", R"({"n": 8, "shape": {"type": "disk", "radius": 1}, "source": {"type": "const", "c": 1}})");
  write_text(dir / "notes.txt", "ignored");
  const auto cs = load_configs(dir);
  REQUIRE(cs.size() == 2);
  CHECK(cs[0].name == "a");
  CHECK(cs[1].name == "sq");
  CHECK_THROWS_AS(load_configs(dir / "missing"), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("convergence table") {
  auto c = parse_config(R"({"n": 16, "shape": {"type": "disk", "radius": 1}, "source": {"type": "const", "c": 1}})");
  const auto rows = convergence(c, {16, 32, 64});
  bool linf = false;
  for (const auto& r : rows)
    if (r.quantity == "linf_error") {
      linf = true;
      CHECK(r.reference_kind == "analytic");
    }
  CHECK(linf);
  CHECK(convergence_csv(rows).rfind("quantity,", 0) == 0);
  CHECK_THROWS_AS(convergence(c, {32, 16, 64}), ConfigError);
  CHECK(exact_solution(c).has_value());
}

TEST_CASE("case matrix") {
  const auto cases = case_matrix();
  CHECK(cases.size() == 48);
  CHECK(verify_suites().size() == 6);
  CHECK_THROWS_AS(verify("nonsense"), ConfigError);
}
