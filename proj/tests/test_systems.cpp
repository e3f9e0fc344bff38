#include <doctest.h>

#include <cmath>
#include <numbers>

#include "polite/elliptic.hpp"
#include "polite/error.hpp"
#include "polite/flows.hpp"
#include "polite/systems.hpp"

using namespace polite;

namespace {

State v(std::initializer_list<double> xs) {
  State x(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double a : xs) x[i++] = a;
  return x;
}

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_SUITE("systems") {
  TEST_CASE("harmonic oscillator") {
    const SystemSpec s = make_harmonic();
    CHECK(s.dimension == 2);
    CHECK(s.hamiltonian.value()(v({1.0, 0.0})) == doctest::Approx(0.5));
    CHECK((s.field(v({0.0, 1.0})) - v({1.0, 0.0})).norm() == 0.0);
    CHECK(s.symmetry.has_value());
    CHECK((s.symmetry.value()(kPi / 2, v({1.0, 0.0})) - v({0.0, -1.0})).norm() <= 1e-15);
  }

  TEST_CASE("stiff spring") {
    const SystemSpec s = make_stiff_spring(1.0);
    CHECK(s.hamiltonian.value()(v({1.0, 0.0})) == doctest::Approx(0.75));
    CHECK_THROWS_AS(make_stiff_spring(-0.1), DomainError);
    const elliptic::StiffnessParam e(1.0);
    for (double t : {0.5, 1.5}) {
      const State x = flow_map(s, v({1.0, 0.0}), t, 1e-12);
      CHECK(std::abs(x[0] - elliptic::duffing_solution(t, e)) <= 1e-7);
    }
    const SystemSpec flat = make_stiff_spring(0.0);
    const SystemSpec h = make_harmonic();
    for (const State& x : {v({0.3, -0.2}), v({2.0, 1.0})}) CHECK((flat.field(x) - h.field(x)).norm() == 0.0);
  }

  TEST_CASE("stiff spring amplitude and period") {
    const double eps = 0.5;
    const State x = v({0.3, 1.1});
    const double a = stiff_spring_amplitude(eps, x);
    const ScalarFunction h = *make_stiff_spring(eps).hamiltonian;
    CHECK(h(v({a, 0.0})) == doctest::Approx(h(x)).epsilon(1e-13));
    EventSpec ev;
    ev.direction = -1;
    ev.event_function = [](const State& y) { return y[1]; };
    const double measured = first_return(make_stiff_spring(eps), v({a, 0.0}), ev, 1e-13).time;
    CHECK(std::abs(measured - stiff_spring_period(eps, x)) <= 1e-9);
  }

  TEST_CASE("champagne bottle") {
    const SystemSpec s = make_champagne();
    CHECK(s.hamiltonian.value()(State::Zero(4)) == 0.0);
    CHECK(champagne_momentum(v({1.0, 0.0, 0.0, 1.0})) == 1.0);
    Rng rng(3);
    for (int k = 0; k < 3; ++k) {
      const State x0 = random_state(4, 1.0, rng);
      const Trajectory tr = integrate(s, x0, 100.0, 1e-12);
      double drift = 0.0;
      for (const State& x : tr.states) drift = std::max(drift, std::abs(champagne_momentum(x) - champagne_momentum(x0)));
      CHECK(drift <= 1e-8);
    }
  }

  TEST_CASE("torus field") {
    const SystemSpec plane = make_torus_field(FieldDomain::Plane);
    const SystemSpec torus = make_torus_field(FieldDomain::Torus);
    CHECK((plane.field(v({0.0, 0.0})) - v({0.0, 1.0})).norm() == 0.0);
    CHECK((plane.field(v({kPi, 0.0})) - v({0.0, -1.0})).norm() <= 1e-15);
    CHECK(plane.conserved.empty());
    CHECK(torus.wrap(v({-0.5, 7.0}))[0] == doctest::Approx(2 * kPi - 0.5));
    CHECK(torus.wrap(v({-0.5, 7.0}))[1] == doctest::Approx(7.0 - 2 * kPi));
    CHECK(torus.distance(v({0.01, 0.0}), v({2 * kPi - 0.01, 0.0})) == doctest::Approx(0.02));
    // The circles x = 0 and x = pi are closed orbits of period 2 pi.
    for (double x : {0.0, kPi}) {
      const State p = v({x, 1.0});
      CHECK(torus.distance(torus.symmetry.value()(2 * kPi, p), p) <= 1e-12);
      CHECK(torus.distance(torus.symmetry.value()(1.0, p), p) > 0.5);
    }
  }

  TEST_CASE("torus closed-form flow matches integration") {
    const SystemSpec plane = make_torus_field(FieldDomain::Plane);
    for (const State& x0 : {v({0.4, 0.2}), v({2.5, -1.0}), v({-1.0, 0.0}), v({4.0, 3.0})}) {
      for (double t : {-4.0, -0.5, 0.7, 6.0}) {
        CHECK((torus_field_flow(x0, t) - flow_map(plane, x0, t, 1e-13)).norm() <= 1e-9);
      }
    }
  }

  TEST_CASE("free particle") {
    CHECK_THROWS_AS(make_free_particle(1), DomainError);
    const SystemSpec s = make_free_particle(3);
    CHECK(s.dimension == 6);
    CHECK(s.conserved.size() == 1 + 3 + 3);
    Eigen::Matrix2d a;
    a << 0, -1, 1, 0;
    const State y = se_act(a, Eigen::Vector2d::Zero(), v({1.0, 0.0, 0.0, 1.0}));
    CHECK((y - v({0.0, 1.0, -1.0, 0.0})).norm() <= 1e-15);
    Rng rng(11);
    const State x0 = random_state(6, 1.0, rng);
    const Trajectory tr = integrate(s, x0, 10.0, 1e-12);
    CHECK(max_conserved_drift(s, tr) <= 1e-10);
  }

  TEST_CASE("rotation_from_skew is orthogonal") {
    Eigen::VectorXd w(3);
    w << 0.3, -1.2, 2.0;
    const Eigen::MatrixXd r = rotation_from_skew(w, 3);
    CHECK((r.transpose() * r - Eigen::MatrixXd::Identity(3, 3)).norm() <= 1e-13);
    CHECK(r.determinant() == doctest::Approx(1.0));
  }

  TEST_CASE("catalogue consistency") {
    for (const std::string name :
         {"harmonic", "stiff:0.5", "champagne", "torus", "plane-field", "free:2", "free:3", "rotation"}) {
      Rng rng(42);
      const SystemSpec s = make_system(name);
      const ConsistencyReport r = check_consistency(s, rng, name.rfind("stiff", 0) == 0 ? 20 : 100);
      INFO(name);
      CHECK(r.conserved_residual <= 1e-6);
      CHECK(r.hamiltonian_residual <= 1e-6);
      CHECK(r.equivariance_residual <= 1e-6);
      CHECK(r.generator_residual <= 1e-6);
      CHECK(r.identity_residual <= 1e-12);
    }
  }

  TEST_CASE("system names") {
    CHECK(make_system("free:4").dimension == 8);
    CHECK(make_system("stiff:0.25").dimension == 2);
    CHECK_THROWS_AS(make_system("stiff:abc"), DomainError);
    CHECK_THROWS_AS(make_system("free:2x"), DomainError);
    CHECK_THROWS_AS(make_system("pendulum"), DomainError);
  }

  TEST_CASE("angle helpers") {
    CHECK(wrap_angle(-0.1) == doctest::Approx(2 * kPi - 0.1));
    CHECK(wrap_angle(2 * kPi) == doctest::Approx(0.0));
    CHECK(wrap_difference(2 * kPi - 0.1) == doctest::Approx(-0.1));
  }
}
