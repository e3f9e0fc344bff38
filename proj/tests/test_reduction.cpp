#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "polite/error.hpp"
#include "polite/reduction.hpp"

using namespace polite;
using namespace polite::reduction;

namespace {

constexpr double kPi = std::numbers::pi;

State v4(double a, double b, double c, double d) {
  State x(4);
  x << a, b, c, d;
  return x;
}

State rotate(const State& x, double t) {
  const double c = std::cos(t), s = std::sin(t);
  return v4(c * x[0] - s * x[1], s * x[0] + c * x[1], c * x[2] - s * x[3], s * x[2] + c * x[3]);
}

}  // namespace

TEST_SUITE("reduction") {
  TEST_CASE("projection") {
    const auto chart = champagne_chart();
    CHECK((project(chart, v4(1, 0, 0, 1)) - v4(1, 1, 0, 1)).norm() == 0.0);
    CHECK(project(chart, State::Zero(4)).norm() == 0.0);
    Rng rng(4);
    for (int k = 0; k < 50; ++k) {
      const State x = random_state(4, 2.0, rng);
      const auto s = project(chart, x);
      CHECK(std::abs(chart.relation(s)) <= 1e-12 * std::max(1.0, s.squaredNorm()));
      CHECK(s[0] >= 0.0);
      CHECK(s[1] >= 0.0);
      for (double t : {0.3, 2.0, -4.0}) CHECK((project(chart, rotate(x, t)) - s).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  TEST_CASE("reduced field") {
    const auto chart = champagne_chart();
    CHECK((reduced_field(chart, v4(1, 1, 0, 1)) - v4(0, 0, -1, 0)).norm() <= 1e-15);
    CHECK(reduced_field(chart, project(chart, v4(0.3, 0.2, -0.2, 0.3)))[0] == 0.0);
    CHECK_THROWS_AS(reduced_field(chart, v4(1, 1, 0, 2)), DomainError);
    CHECK_THROWS_AS(reduced_field(chart, v4(-1, -1, 0, 0)), DomainError);
  }

  TEST_CASE("push-forward identity") {
    const auto chart = champagne_chart();
    Rng rng(42);
    for (int k = 0; k < 100; ++k) {
      const State x = random_state(4, 1.5, rng);
      const auto v = reduced_field(chart, project(chart, x));
      const State f = oracle::champagne_field(x);
      for (std::size_t i = 0; i < chart.invariants.size(); ++i) {
        CHECK(std::abs(oracle::directional_derivative(chart.invariants[i].fn, f, x) - v[static_cast<Eigen::Index>(i)]) <= 1e-6);
      }
    }
  }

  TEST_CASE("reduced flow commutes with projection") {
    const auto chart = champagne_chart();
    const SystemSpec sys = make_champagne();
    Rng rng(42);
    for (int k = 0; k < 20; ++k) {
      const State x0 = random_state(4, 1.0, rng);
      const auto red = integrate_reduced(chart, project(chart, x0), 20.0);
      CHECK(max_relation_residual(chart, red) <= 1e-8);
      CHECK(red.j_value == doctest::Approx(x0[0] * x0[3] - x0[1] * x0[2]));
      const Trajectory full = integrate(sys, x0, 20.0, 1e-12);
      double err = 0.0;
      for (std::size_t i = 0; i < full.size(); i += 5) {
        err = std::max(err, (project(chart, full.states[i]) - red.at(full.times[i])).cwiseAbs().maxCoeff());
      }
      CHECK(err <= 1e-6);
    }
  }

  TEST_CASE("relative equilibrium stays fixed") {
    const auto chart = champagne_chart();
    for (double j : {0.1, 0.3, 1.0}) {
      const auto s = champagne_reduced_equilibrium(j);
      CHECK(std::abs(s[0] * s[1] - j * j) <= 1e-12);
      CHECK(chart.reduced_field(s).cwiseAbs().maxCoeff() <= 1e-12);
      const auto red = integrate_reduced(chart, s, 20.0);
      CHECK((red.invariant_states.back() - s).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }

  TEST_CASE("radial motion keeps the relation") {
    const auto chart = champagne_chart();
    const State x0 = v4(0.6, 0.8, 0.3, 0.4);  // q parallel to p, so j = 0
    const auto red = integrate_reduced(chart, project(chart, x0), 10.0);
    CHECK(max_relation_residual(chart, red) <= 1e-8);
  }

  TEST_CASE("reconstruction of the champagne bottle") {
    const auto chart = champagne_chart();
    const State x0 = v4(1, 0, 0, 0.3);
    const auto red = integrate_reduced(chart, project(chart, x0), 20.0);
    std::vector<double> times;
    for (int k = 0; k <= 200; ++k) times.push_back(0.1 * k);
    const Trajectory rec = reconstruct(chart, red, x0, times);
    const Trajectory direct = integrate(make_champagne(), x0, 20.0, 1e-13);
    double err = 0.0, proj = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      err = std::max(err, (rec.states[i] - direct.at(times[i])).cwiseAbs().maxCoeff());
      proj = std::max(proj, (project(chart, rec.states[i]) - red.at(times[i])).cwiseAbs().maxCoeff());
    }
    CHECK(err <= 1e-5);
    CHECK(proj <= 1e-6);
    CHECK((rec.states.front() - x0).norm() <= 1e-14);
  }

  TEST_CASE("reconstruction with a rotated initial point") {
    const auto chart = champagne_chart();
    const State x0 = rotate(v4(0.9, 0.0, 0.1, 0.5), 2.0);
    const auto red = integrate_reduced(chart, project(chart, x0), 5.0);
    const Trajectory rec = reconstruct(chart, red, x0, {0.0, 2.5, 5.0});
    const SystemSpec sys = make_champagne();
    for (std::size_t i = 0; i < 3; ++i) CHECK((rec.states[i] - flow_map(sys, x0, rec.times[i], 1e-13)).norm() <= 1e-6);
  }

  TEST_CASE("radial motion has zero phase rate") {
    const auto chart = champagne_chart();
    const State x0 = v4(0.8, 0.0, 0.2, 0.0);
    const auto red = integrate_reduced(chart, project(chart, x0), 1.0);
    for (double th : reconstructed_phase(chart, red, {0.0, 0.5, 1.0})) CHECK(th == 0.0);
  }

  TEST_CASE("reconstruction breaks down at the origin") {
    const auto chart = champagne_chart();
    const State x0 = v4(0.5, 0.0, -1.5, 0.0);  // enough energy to cross the hump at q = 0
    const auto red = integrate_reduced(chart, project(chart, x0), 3.0);
    CHECK_THROWS_AS(reconstruct(chart, red, x0), DomainError);
    CHECK_THROWS_AS(reconstruct(chart, red, v4(0.4, 0.0, -0.5, 0.0)), DomainError);
  }

  TEST_CASE("harmonic oscillator reconstruction is the rotation matrix") {
    const auto chart = harmonic_chart();
    State x0(2);
    x0 << 0.7, -0.4;
    const auto red = integrate_reduced(chart, project(chart, x0), 2.0 * kPi);
    std::vector<double> times{0.0, kPi / 2, kPi, 2.0 * kPi};
    const Trajectory rec = reconstruct(chart, red, x0, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK((rec.states[i] - oracle::oscillator_matrix(times[i]) * x0).norm() <= 1e-12);
    }
  }

  TEST_CASE("fiber period lattice") {
    const FiberData f = champagne_fiber(-0.1, 0.02);
    CHECK(f.period > 0.0);
    CHECK(std::abs(f.rotation) <= kPi);
    CHECK(f.lattice(0, 0) == 0.0);
    CHECK(f.lattice(1, 0) == doctest::Approx(2.0 * kPi));
    // Flowing for T and rotating back by Theta closes the orbit.
    const double u_max = [&] {
      double lo = 0.5, hi = 2.0;
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (champagne_effective_potential(mid, 0.02) < -0.1 ? lo : hi) = mid;
      }
      return lo;
    }();
    const double r = std::sqrt(u_max);
    const State x0 = v4(r, 0, 0, 0.02 / r);
    const State xt = flow_map(make_champagne(), x0, f.period, 1e-13);
    CHECK((rotate(xt, -f.rotation) - x0).norm() <= 1e-8);
    CHECK_THROWS_AS(champagne_fiber(-0.3, 0.0), DomainError);
    CHECK_THROWS_AS(champagne_fiber(0.0, 0.0), DomainError);
  }

  TEST_CASE("monodromy around the focus-focus value") {
    const auto res = monodromy(elliptic_loop(0.0, 0.0, 0.1, 0.05));
    CHECK(res.matrix.determinant() == 1);
    CHECK(res.matrix.trace() == 2);
    CHECK(std::abs(res.matrix(0, 1)) + std::abs(res.matrix(1, 0)) == 1);
    CHECK(res.closure_residual <= 1e-2);
    for (double r : res.residuals) CHECK(r <= 0.25);
    const auto j = res.to_json();
    for (const char* key : {"loop", "matrix", "residuals"}) CHECK(j.contains(key));

    const auto rev = monodromy(elliptic_loop(0.0, 0.0, 0.1, 0.05, 16, true));
    CHECK((rev.matrix * res.matrix) == Eigen::Matrix2i::Identity());
  }

  TEST_CASE("monodromy of a contractible loop is trivial") {
    CHECK(monodromy(elliptic_loop(0.2, 0.0, 0.05, 0.05)).matrix == Eigen::Matrix2i::Identity());
    CHECK(monodromy(elliptic_loop(-0.1, 0.05, 0.05, 0.02)).matrix == Eigen::Matrix2i::Identity());
  }

  TEST_CASE("coarse loops are refined adaptively") {
    const auto res = monodromy(elliptic_loop(0.0, 0.0, 0.1, 0.05, 4));
    CHECK(res.loop.size() > 5);
    CHECK(res.matrix.trace() == 2);
  }

  TEST_CASE("loops through the critical value are rejected") {
    std::vector<std::pair<double, double>> bad{{0.0, 0.0}, {0.1, 0.01}, {0.05, 0.02}};
    CHECK_THROWS_AS(monodromy(bad), DomainError);
    std::vector<std::pair<double, double>> empty_fiber{{-0.5, 0.01}, {-0.4, 0.01}, {-0.45, 0.02}};
    CHECK_THROWS_AS(monodromy(empty_fiber), DomainError);
  }

  TEST_CASE("torus function gap") {
    const auto rep = torus_function_gap_demo();
    CHECK(rep.forward_distance <= 1e-4);
    CHECK(rep.backward_distance <= 1e-4);
    CHECK(rep.closed_form_error <= 1e-8);
    CHECK(rep.gap_locally_constant);
    CHECK(rep.obstruction_exhibited);
    CHECK(rep.equal_values_extend);
    CHECK(rep.forced_difference > 0.9);
    State start(2);
    start << kPi / 2, 0.0;
    for (double t : {-12.0, -3.0, 0.0, 4.0, 12.0}) {
      const State x = flow_map(make_torus_field(FieldDomain::Torus), start, t, 1e-13);
      CHECK(std::abs(x[0] - oracle::torus_x_closed_form(kPi / 2, t)) <= 1e-8);
    }
    const auto j = rep.to_json();
    CHECK(j["obstruction_exhibited"] == true);
  }
}
