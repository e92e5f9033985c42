// Deterministic report rendering: lossless double formatting, insertion-
// ordered documents, and JSON/CSV value parity for experiment reports.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "martconc/report.hpp"
#include "martconc/simulation.hpp"

using namespace martconc;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

ExperimentReport small_report() {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::iid_bernoulli;
  spec.n = 50;
  spec.b = 0.3;
  CoverageParams params;
  params.trials = 200;
  return coverage_experiment(
      spec,
      {BoundId::kl_drift, BoundId::hoeffding_azuma,
       BoundId::bernstein_adaptive},
      params);
}

}  // namespace

TEST_CASE("format_double renders losslessly and with fixed tokens") {
  SECTION("strtod round-trips bit for bit") {
    const double cases[] = {0.1,
                            1.0 / 3.0,
                            std::numeric_limits<double>::min(),
                            std::numeric_limits<double>::max(),
                            std::numeric_limits<double>::denorm_min(),
                            4.9406564584124654e-324,
                            3.141592653589793,
                            -2.2250738585072014e-308,
                            1.0000000000000002,
                            123456789.12345679,
                            0.0};
    for (double v : cases) {
      const std::string s = format_double(v);
      const double back = std::strtod(s.c_str(), nullptr);
      REQUIRE(back == v);
      REQUIRE(std::signbit(back) == std::signbit(v));
    }
    const std::string neg_zero = format_double(-0.0);
    REQUIRE(std::signbit(std::strtod(neg_zero.c_str(), nullptr)));
  }
  SECTION("nonfinite values use pinned tokens") {
    REQUIRE(format_double(kInf) == "inf");
    REQUIRE(format_double(-kInf) == "-inf");
    REQUIRE(format_double(std::nan("")) == "nan");
  }
}

TEST_CASE("Doc renders keys in insertion order") {
  Doc d;
  d.put_str("zeta", "first");
  d.put_int("alpha", 7);
  d.put("mid", 0.5);
  d.put_bool("flag", false);
  d.put("weird", kInf);
  REQUIRE(d.json() ==
          "{\"zeta\":\"first\",\"alpha\":7,\"mid\":0.5,\"flag\":false,"
          "\"weird\":\"inf\"}");
  Doc outer;
  outer.put_doc("inner", d);
  outer.put_docs("rows", {d, d});
  const std::string j = outer.json();
  REQUIRE(j.find("\"inner\":{\"zeta\"") != std::string::npos);
  REQUIRE(j.find("\"rows\":[{") != std::string::npos);
  // Escaping of quotes and backslashes.
  Doc esc;
  esc.put_str("k\"ey", "a\\b\nc");
  REQUIRE(esc.json() == "{\"k\\\"ey\":\"a\\\\b\\nc\"}");
}

TEST_CASE("experiment reports parse as JSON and agree with the CSV") {
  const auto rep = small_report();
  const std::string js = report_json(rep);
  const std::string cs = report_csv(rep);

  const auto parsed = nlohmann::json::parse(js);
  REQUIRE(parsed["scenario"] == "iid_bernoulli");
  REQUIRE(parsed["n"] == 50);
  REQUIRE(parsed["b"] == 0.3);
  REQUIRE(parsed["generator"] == std::string(kGeneratorId));
  REQUIRE(parsed["outcomes"].size() == 3);
  REQUIRE(parsed["outcomes"][0]["bound"] == "kl_drift");
  REQUIRE(parsed["outcomes"][1]["bound"] == "hoeffding_azuma");
  REQUIRE(parsed["outcomes"][2]["bound"] == "bernstein_adaptive");

  // CSV: header plus one row per outcome, metadata repeated.
  std::vector<std::string> lines;
  for (const auto& line : split(cs, '\n')) {
    if (!line.empty()) lines.push_back(line);
  }
  REQUIRE(lines.size() == 4);
  const auto header = split(lines[0], ',');
  for (std::size_t row = 0; row < 3; ++row) {
    const auto cells = split(lines[row + 1], ',');
    REQUIRE(cells.size() == header.size());
    const auto& outcome = parsed["outcomes"][row];
    for (std::size_t col = 0; col < header.size(); ++col) {
      const std::string& key = header[col];
      // Every CSV cell must equal the corresponding JSON value: outcome
      // fields come from the outcome object, metadata from the top level.
      nlohmann::json expect;
      if (outcome.contains(key)) {
        expect = outcome[key];
      } else {
        REQUIRE(parsed.contains(key));
        expect = parsed[key];
      }
      if (expect.is_string()) {
        REQUIRE(cells[col] == expect.get<std::string>());
      } else if (expect.is_boolean()) {
        REQUIRE(cells[col] == (expect.get<bool>() ? "true" : "false"));
      } else {
        // Numeric parity is bitwise: both sides rendered by format_double.
        REQUIRE(std::strtod(cells[col].c_str(), nullptr) ==
                expect.get<double>());
      }
    }
  }
}

TEST_CASE("repeated renders are byte-identical") {
  const auto r1 = small_report();
  const auto r2 = small_report();
  REQUIRE(report_json(r1) == report_json(r2));
  REQUIRE(report_csv(r1) == report_csv(r2));
}

TEST_CASE("tightness rows carry every endpoint field") {
  const auto rows = tightness_table(100, 0.05, {0.1, 0.5});
  const auto d = doc_of(rows[0]);
  const auto parsed = nlohmann::json::parse(d.json());
  for (const char* key :
       {"phat", "eps", "kl_lo", "kl_hi", "pinsker_lo", "pinsker_hi",
        "refined_hi", "ha_lo", "ha_hi", "bern_lo", "bern_hi"}) {
    REQUIRE(parsed.contains(key));
  }
  REQUIRE(parsed["winner"].is_string());
  REQUIRE(parsed["refined_below_ha"].is_boolean());
  REQUIRE(parsed["phat"] == 0.1);
  // CSV over tightness rows shares the document key order.
  const std::string cs = Doc::csv({doc_of(rows[0]), doc_of(rows[1])});
  const auto lines = split(cs, '\n');
  REQUIRE(split(lines[0], ',').front() == "phat");
  REQUIRE(split(lines[0], ',').back() == "refined_below_ha");
}
