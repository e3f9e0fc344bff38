#include <doctest.h>

#include <cmath>
#include <numbers>

#include "polite/error.hpp"
#include "polite/strata.hpp"

using namespace polite;
using namespace polite::strata;

namespace {

constexpr double kPi = std::numbers::pi;

State v2(double a, double b) {
  State x(2);
  x << a, b;
  return x;
}

const Stratum& find(const std::vector<Stratum>& all, const std::string& label) {
  for (const auto& s : all) {
    if (s.isotropy_label == label) return s;
  }
  throw std::runtime_error("no stratum " + label);
}

const std::vector<std::string> kCatalogue{"harmonic", "stiff:0.5", "champagne", "torus",
                                          "plane-field", "free:2", "free:3", "rotation"};

}  // namespace

TEST_SUITE("strata") {
  TEST_CASE("catalogued strata") {
    const auto torus = enumerate_strata(make_torus_field(FieldDomain::Torus));
    CHECK(torus.size() == 2);
    const Stratum& circles = find(torus, "2piZ");
    CHECK(circles.contains(v2(0.0, 1.3)));
    CHECK(circles.contains(v2(kPi, 4.0)));
    CHECK_FALSE(circles.contains(v2(1.0, 0.0)));
    CHECK(circles.chart_dimension == 1);
    CHECK(find(torus, "trivial").contains(v2(1.0, 0.0)));

    const auto osc = enumerate_strata(make_harmonic());
    const Stratum& origin = find(osc, "R");
    CHECK(origin.contains(v2(0.0, 0.0)));
    CHECK(origin.fixed_points);
    CHECK_FALSE(origin.contains(v2(0.1, 0.0)));
    CHECK(find(osc, "2piZ").contains(v2(0.1, 0.0)));

    const auto bottle = enumerate_strata(make_champagne());
    CHECK(find(bottle, "SO(2)").contains(State::Zero(4)));
    State x(4);
    x << 0.0, 0.0, 0.2, 0.0;
    CHECK(find(bottle, "trivial").contains(x));

    CHECK(enumerate_strata(make_free_particle(3)).size() == 1);
  }

  TEST_CASE("origin of the champagne bottle is the only point fixed by SO(2)") {
    const SystemSpec sys = make_champagne();
    Rng rng(1);
    for (int k = 0; k < 20; ++k) {
      const State x = random_state(4, 1.0, rng);
      CHECK((sys.symmetry.value()(1.0, x) - x).norm() > 1e-3 * x.norm());
    }
    CHECK((sys.symmetry.value()(1.0, State::Zero(4))).norm() == 0.0);
  }

  TEST_CASE("flow invariance on every stratum") {
    Rng rng(42);
    for (const auto& name : kCatalogue) {
      for (const auto& s : enumerate_strata(make_system(name))) {
        const auto rep = check_flow_invariance(s, 1e-8, 100, rng);
        INFO(name << " " << s.isotropy_label);
        CHECK(rep.ok);
        CHECK(rep.samples == 100);
      }
    }
  }

  TEST_CASE("circles stay exactly on x = 0") {
    const auto torus = enumerate_strata(make_torus_field(FieldDomain::Torus));
    const SystemSpec& sys = *find(torus, "2piZ").system;
    const Trajectory tr = integrate(sys, v2(0.0, 0.4), 10.0, 1e-12);
    for (const State& x : tr.states) CHECK(x[0] == 0.0);
  }

  TEST_CASE("flow invariance detects a wrong stratum") {
    Stratum bogus = find(enumerate_strata(make_torus_field(FieldDomain::Torus)), "2piZ");
    bogus.sample = [](Rng&) { return v2(0.3, 0.0); };
    Rng rng(0);
    const auto rep = check_flow_invariance(bogus, 1e-8, 3, rng);
    CHECK_FALSE(rep.ok);
    REQUIRE(rep.counterexample.has_value());
  }

  TEST_CASE("freeness of every induced action") {
    Rng rng(42);
    for (const auto& name : kCatalogue) {
      for (const auto& s : enumerate_strata(make_system(name))) {
        if (s.gh_action.group_dimension == 0) continue;
        const auto rep = check_freeness(s, 100, rng);
        INFO(name << " " << s.isotropy_label);
        CHECK(rep.free);
        CHECK(rep.min_displacement > 1e-6);
      }
    }
  }

  TEST_CASE("freeness detects a non-free action") {
    // The full time flow acting on the torus circles is not free (period 2 pi).
    Stratum s = find(enumerate_strata(make_torus_field(FieldDomain::Torus)), "2piZ");
    s.discrete_elements = {Eigen::VectorXd::Constant(1, 2.0 * kPi)};
    Rng rng(0);
    const auto rep = check_freeness(s, 5, rng);
    CHECK_FALSE(rep.free);
  }

  TEST_CASE("normalizer moves preserve strata") {
    Rng rng(42);
    for (const auto& name : kCatalogue) {
      for (const auto& s : enumerate_strata(make_system(name))) {
        const auto rep = check_normalizer_invariance(s, 30, rng);
        INFO(name << " " << s.isotropy_label);
        CHECK(rep.ok);
      }
    }
  }

  TEST_CASE("plane-field return times") {
    const SystemSpec plane = make_torus_field(FieldDomain::Plane);
    const auto starts = plane_field_sequence(2, 8);
    const auto returns = section_returns(plane, v2(0.0, 0.0), starts, plane_field_region(), 100.0);
    std::vector<double> times;
    for (std::size_t i = 0; i < returns.size(); ++i) {
      REQUIRE(returns[i].has_value());
      const double n = static_cast<double>(i + 2);
      // Closed form: the orbit from (1/n, 0) returns to y = 0 at (pi - 1/n, 0).
      CHECK(std::abs(returns[i]->time + 2.0 * std::log(std::tan(0.5 / n))) <= 1e-8);
      CHECK(std::abs(returns[i]->state[0] - (kPi - 1.0 / n)) <= 1e-8);
      times.push_back(returns[i]->time);
    }
    for (std::size_t i = 1; i < times.size(); ++i) CHECK(times[i] - times[i - 1] > 0.2);

    const auto w = witness_from_sequence(plane, v2(0.0, 0.0), starts, plane_field_region(), 100.0, false);
    REQUIRE(w.has_value());
    CHECK(w->times.size() == 7);
    CHECK(w->compact_radius <= 0.5 * std::hypot(kPi, 2.0) + 1e-12);
  }

  TEST_CASE("properness probe") {
    const SystemSpec plane = make_torus_field(FieldDomain::Plane);
    const auto w = properness_probe(plane, plane_field_region(), 200.0);
    REQUIRE(w.has_value());
    for (std::size_t i = 1; i < w->times.size(); ++i) CHECK(w->times[i] > w->times[i - 1] + 0.5);

    Box box;
    box.lower = v2(-1.0, -1.0);
    box.upper = v2(1.0, 1.0);
    CHECK_FALSE(properness_probe(make_harmonic(), box, 200.0).has_value());

    State lo(4), hi(4);
    lo << -1, -1, 0.5, 0.5;
    hi << 1, 1, 0.9, 0.9;
    Box particle{lo, hi};
    CHECK_FALSE(properness_probe(make_free_particle(2), particle, 200.0).has_value());
  }

  TEST_CASE("politeness verdicts") {
    Rng rng(42);
    for (const std::string name : {"harmonic", "stiff:0.5", "champagne", "free:3", "rotation", "torus"}) {
      const auto rep = politeness_report(make_system(name), rng, 10);
      INFO(name);
      CHECK(rep.polite);
    }
    const auto plane = politeness_report(make_torus_field(FieldDomain::Plane), rng, 10);
    CHECK_FALSE(plane.polite);
    REQUIRE(plane.strata.size() == 1);
    CHECK(plane.strata[0].properness == ProbeOutcome::Witness);
    const auto j = plane.to_json();
    CHECK(j["system"] == "plane-field");
    CHECK(j["strata"][0]["properness"] == "witness");
    CHECK(j["strata"][0].contains("witness"));
    for (const char* key : {"isotropy", "dimension", "free", "flow_invariant"}) CHECK(j["strata"][0].contains(key));
  }

  TEST_CASE("unknown systems are rejected") {
    SystemSpec s = make_harmonic();
    s.name = "pendulum";
    CHECK_THROWS_AS(enumerate_strata(s), DomainError);
  }
}
