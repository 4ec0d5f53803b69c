#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "mixreg/error.hpp"
#include "mixreg/sweeps.hpp"
#include "mixreg/table.hpp"
#include "oracles.hpp"

using namespace mixreg;

namespace {

double as_double(const Cell& c) { return std::get<double>(c); }

}  // namespace

TEST_CASE("format_double round trips") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(NAN) == "nan");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
  oracle::Gen gen(3);
  for (int i = 0; i < 5000; ++i) {
    const double v = gen.uniform(-1e6, 1e6) * std::pow(10.0, gen.uniform(-300, 300) / 10.0);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(std::strtod(format_double(std::numeric_limits<double>::denorm_min()).c_str(), nullptr) ==
        std::numeric_limits<double>::denorm_min());
}

TEST_CASE("CSV escaping") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
  CHECK(format_cell(Cell{}) == "");
  CHECK(format_cell(Cell{true}) == "true");
  CHECK(format_cell(Cell{std::int64_t{42}}) == "42");

  Table t({"a", "b"});
  t.add_row({std::string("x,y"), 0.5});
  CHECK(t.to_csv() == "a,b\n\"x,y\",0.5\n");
  CHECK_THROWS_AS(t.add_row({1.0}), Error);
}

TEST_CASE("token parsing") {
  CHECK(parse_token_string("0110") == std::vector<Token>{0, 1, 1, 0});
  CHECK(token_string(parse_token_string("0110")) == "0110");
  try {
    parse_token_string("01x1");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse);
    CHECK(e.position() == 3);
  }
  CHECK_THROWS_AS(parse_token_string(""), Error);
}

TEST_CASE("filter trace") {
  const ModelParams params(0.9, 0.5);
  const auto t = filter_trace_table(params, parse_token_string("0101"));
  REQUIRE(t.rows().size() == 4);
  CHECK(t.header().size() == 7);
  CHECK(as_double(t.rows()[0][2]) == 0.5);
  CHECK(as_double(t.rows()[0][3]) == 0.75);
  CHECK(as_double(t.rows()[1][2]) == doctest::Approx(19.0 / 30.0).epsilon(1e-15));
  CHECK(std::get<std::int64_t>(t.rows()[3][0]) == 4);

  const auto single = filter_trace_table(params, parse_token_string("0"));
  CHECK(single.rows().size() == 1);
  const auto rep = filter_trace_table(params, parse_token_string("00"));
  CHECK(as_double(rep.rows()[1][2]) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("gap sweep") {
  SweepSpec spec;
  spec.kind = SweepKind::gap;
  spec.pi0 = {0.0, 0.5, 1.0};
  const auto t = sweep_table(spec);
  REQUIRE(t.rows().size() == 3);
  CHECK(as_double(t.rows()[0][3]) == 0.0);
  CHECK(as_double(t.rows()[1][3]) == doctest::Approx(0.18872187554086717).epsilon(1e-14));
  CHECK(as_double(t.rows()[2][3]) == 1.0);
  CHECK(sweep_table(SweepSpec{}).rows().size() == 21);
}

TEST_CASE("temperature sweep") {
  SweepSpec spec;
  spec.kind = SweepKind::temperature;
  spec.temperature = {0.5, 1.0, 2.0};
  const auto t = sweep_table(spec);
  REQUIRE(t.rows().size() == 3);
  CHECK(as_double(t.rows()[0][3]) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(as_double(t.rows()[1][3]) == 0.25);
  CHECK(as_double(t.rows()[2][3]) == doctest::Approx(0.36602540378443865).epsilon(1e-14));
}

TEST_CASE("gamma sweep") {
  SweepSpec spec;
  spec.kind = SweepKind::gamma;
  const auto t = sweep_table(spec);
  REQUIRE(t.rows().size() == 11);
  for (const auto& row : t.rows()) {
    const double gamma = as_double(row[1]);
    CHECK(std::get<bool>(row[6]) == (gamma > 0.9));
    CHECK(as_double(row[7]) == 0.9);
  }
  SweepSpec edge;
  edge.kind = SweepKind::gamma;
  edge.pi0 = {0.0, 0.3};
  const auto e = sweep_table(edge);
  CHECK(std::holds_alternative<std::monostate>(e.rows()[0][4]));
  CHECK(std::holds_alternative<std::monostate>(e.rows()[0][7]));
  CHECK(std::holds_alternative<double>(e.rows()[11][4]));
  CHECK(std::holds_alternative<std::monostate>(e.rows()[11][7]));
}

TEST_CASE("residual-mi sweep") {
  const auto spec = SweepSpec::from_json(R"({"kind":"residual-mi","pi0":[0.5],"gamma":[0.5,1]})");
  const auto t = sweep_table(spec);
  REQUIRE(t.rows().size() == 2);
  CHECK(as_double(t.rows()[0][3]) == doctest::Approx(0.3112781244591328).epsilon(1e-13));
  CHECK(as_double(t.rows()[1][3]) == 0.0);
}

TEST_CASE("sweep spec JSON") {
  const auto s = SweepSpec::from_json(R"({"kind":"temperature"})").resolved();
  CHECK(s.alpha == std::vector<double>{0.75});
  CHECK(SweepSpec::from_json(s.to_json()).resolved().temperature == s.temperature);
  CHECK_THROWS_AS(SweepSpec::from_json(R"({"kind":"nope"})"), Error);
  CHECK_THROWS_AS(SweepSpec::from_json(R"({"kind":"gap","pi0":[2]})").resolved(), Error);
  CHECK_THROWS_AS(SweepSpec::from_json("not json"), Error);
}

TEST_CASE("linspace") {
  const auto g = linspace(0.5, 1.0, 11);
  REQUIRE(g.size() == 11);
  CHECK(g.front() == 0.5);
  CHECK(g.back() == 1.0);
  CHECK(g[8] == 0.9);
  CHECK(linspace(0.2, 0.2, 1) == std::vector<double>{0.2});
}
