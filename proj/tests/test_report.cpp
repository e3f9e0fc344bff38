#include <doctest.h>

#include <cmath>
#include <limits>

#include "polite/report.hpp"

using namespace polite;

TEST_SUITE("report") {
  TEST_CASE("double formatting") {
    CHECK(format_double(1.0) == "1.0");
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(-2.5e-300) == "-2.5e-300");
    CHECK(format_double(1e300) == "1.0000000000000001e+300");
    CHECK(format_double(std::nan("")) == "null");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "null");
    CHECK(std::stod(format_double(M_PI)) == M_PI);
  }

  TEST_CASE("deterministic rendering") {
    nlohmann::json a = {{"zeta", 1}, {"alpha", {1.5, 2.0}}, {"mid", {{"b", true}, {"a", "x"}}}};
    nlohmann::json b;
    b["mid"]["a"] = "x";
    b["alpha"] = {1.5, 2.0};
    b["mid"]["b"] = true;
    b["zeta"] = 1;
    CHECK(dump_json(a) == dump_json(b));
    const std::string s = dump_json(a);
    CHECK(s.find("alpha") < s.find("mid"));
    CHECK(s.find("mid") < s.find("zeta"));
    CHECK(nlohmann::json::parse(s) == a);
  }

  TEST_CASE("finiteness") {
    CHECK(all_finite({{"a", {1.0, 2.0}}, {"b", "text"}}));
    CHECK_FALSE(all_finite({{"a", {1.0, std::nan("")}}}));
    CHECK_FALSE(all_finite({{"x", {{"y", -std::numeric_limits<double>::infinity()}}}}));
  }

  TEST_CASE("experiment result envelope") {
    ExperimentResult r;
    r.name = "periods";
    r.values["tau"] = 6.2;
    r.pass = true;
    const auto j = r.to_json();
    CHECK(j["schema"] == kSchemaVersion);
    CHECK(j["name"] == "periods");
    CHECK(j["pass"] == true);
    CHECK(j["values"]["tau"] == 6.2);
  }
}
