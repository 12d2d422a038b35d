#include <doctest.h>

#include "ptes/errors.hpp"
#include "ptes/problem.hpp"
#include "ptes/report.hpp"

using namespace ptes;
using nlohmann::json;

namespace {

json linear_problem() {
  return json::parse(R"({"p": 3, "a": 1, "f": [{"exponents": [1], "coeff": 1}], "d": [1], "kmax": 3})");
}

json sec8_problem() {
  return json::parse(R"({"p": 3, "f": [{"exponents": [1, 1], "coeff": 1}, {"exponents": [1, -1], "coeff": 1}],
                         "d": [1, 2], "precision": 6, "w_cut": 6, "kmax": 3, "b": [1]})");
}

}  // namespace

TEST_CASE("problem parsing") {
  auto s = parse_problem(sec8_problem());
  CHECK(s.field.order() == 3);
  CHECK(s.f.terms.size() == 2);
  CHECK(s.twists() == std::vector<std::int64_t>{1});
  CHECK(s.effective_w_cut() == 6);

  auto f4 = parse_problem(json::parse(
      R"({"p": 2, "a": 2, "modulus": [1, 1, 1], "f": [{"exponents": [1], "coeff": [0, 1]}], "d": [6], "w_cut": "7/2"})"));
  CHECK(f4.field.order() == 4);
  CHECK(f4.f.terms[0].coeff == f4.field.gen());
  CHECK(f4.effective_w_cut() == Rational(7, 2));
  CHECK(f4.twists() == std::vector<std::int64_t>{1, 5});

  auto bad = [](const char* text) { return parse_problem(json::parse(text)); };
  CHECK_THROWS_AS(bad(R"([1, 2])"), SpecError);
  CHECK_THROWS_AS(bad(R"({"f": [{"exponents": [1], "coeff": 1}], "d": [1]})"), SpecError);
  CHECK_THROWS_AS(bad(R"({"p": 3, "f": [{"exponents": [1], "coeff": 3}], "d": [1]})"), SpecError);
  CHECK_THROWS_AS(bad(R"({"p": 3, "f": [{"exponents": [1, 0], "coeff": 1}], "d": [1]})"), SpecError);
  CHECK_THROWS_AS(bad(R"({"p": 3, "f": [{"exponents": [1], "coeff": 1}], "d": [0]})"), SpecError);
  CHECK_THROWS_AS(bad(R"({"p": 3, "f": [], "d": [1]})"), SpecError);
  CHECK_THROWS_AS(bad(R"({"p": 3, "f": [{"exponents": [1], "coeff": "x"}], "d": [1]})"), SpecError);
  CHECK_THROWS_AS(bad(R"({"p": 3, "f": [{"exponents": [1, 1], "coeff": 1}], "d": [1, 2], "b": [2]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(bad(R"({"p": 4, "f": [{"exponents": [1], "coeff": 1}], "d": [1]})"), std::invalid_argument);
  CHECK_THROWS_AS(load_problem(std::string(PTES_TEST_DATA) + "/malformed.json"), SpecError);
  CHECK_THROWS_AS(load_problem(std::string(PTES_TEST_DATA) + "/missing.json"), SpecError);
}

TEST_CASE("sums report for f = x") {
  auto r = run_sums(parse_problem(linear_problem()));
  CHECK(r.status == kPass);
  REQUIRE(r.body["sums"].size() == 3);
  for (const auto& row : r.body["sums"]) CHECK(row["S"] == json::array({-1, 0}));
}

TEST_CASE("reports are deterministic") {
  auto s = parse_problem(sec8_problem());
  for (const char* sub : {"unfold", "polytope-info", "lfunc", "trace-check", "fredholm", "degeneracy"}) {
    CAPTURE(sub);
    auto a = run(s, sub), b = run(s, sub);
    CHECK(a.status == kPass);
    CHECK(a.body.dump() == b.body.dump());
  }
  RunOptions o;
  o.unit_root.cross_check = true;
  auto a = run_unit_root(s, o), b = run_unit_root(s, o);
  CHECK(a.status == kPass);
  CHECK(a.body.dump() == b.body.dump());
  CHECK_THROWS_AS(run(s, "nonsense"), SpecError);
}

TEST_CASE("caps are reported as CapExceeded") {
  auto s = parse_problem(sec8_problem());
  s.cap = 100;
  s.kmax = 4;
  CHECK_THROWS_AS(run_sums(s), CapExceeded);
}
