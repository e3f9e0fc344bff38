#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "polite/elliptic.hpp"
#include "polite/error.hpp"
#include "polite/flows.hpp"
#include "polite/systems.hpp"

using namespace polite;
using namespace polite::elliptic;

TEST_SUITE("elliptic") {
  TEST_CASE("modulus and stiffness validation") {
    CHECK_THROWS_AS(EllipticModulus(1.0), DomainError);
    CHECK_THROWS_AS(EllipticModulus(-0.1), DomainError);
    CHECK_THROWS_AS(EllipticModulus(std::nan("")), DomainError);
    CHECK_NOTHROW(EllipticModulus(0.0));
    CHECK_THROWS_AS(StiffnessParam(-1e-3), DomainError);
    CHECK_NOTHROW(StiffnessParam(0.0));
    CHECK(EllipticModulus(0.6).complement() == doctest::Approx(0.8).epsilon(1e-15));
  }

  TEST_CASE("K at zero modulus is pi/2") {
    CHECK(complete_K(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  }

  TEST_CASE("K against quadrature") {
    for (double k : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
      const double ref = oracle::complete_K_quadrature(k);
      CHECK(std::abs(complete_K(k) - ref) / ref <= 1e-12);
    }
  }

  TEST_CASE("K near the logarithmic singularity") {
    const double k = 0.999999;
    const double value = complete_K(k);
    CHECK(value > 7.0);
    const double ref = oracle::complete_K_quadrature(k);
    CHECK(std::abs(value - ref) / ref <= 1e-10);
  }

  TEST_CASE("cn basic values") {
    for (double k : {0.0, 0.3, 0.9}) CHECK(jacobi_cn(0.0, k) == doctest::Approx(1.0).epsilon(1e-15));
    for (double t : {0.3, 1.0, 2.5}) CHECK(std::abs(jacobi_cn(t, 0.0) - std::cos(t)) <= 1e-12);
    CHECK(std::abs(jacobi_cn(complete_K(0.5), 0.5)) <= 1e-10);
    CHECK_THROWS_AS(jacobi_cn(0.1, 1.0), DomainError);
  }

  TEST_CASE("cn quarter-period zero agrees with the Duffing first zero") {
    // q'' + q + eps q^3 = 0 from (1, 0) has its first zero at K(k) / sqrt(1 + eps).
    const double eps = 0.6;
    const double k = duffing_modulus(StiffnessParam(eps));
    const SystemSpec sys = make_stiff_spring(eps);
    EventSpec ev;
    ev.direction = -1;
    ev.event_function = [](const State& x) { return x[0]; };
    State x0(2);
    x0 << 1.0, 0.0;
    const double t0 = first_return(sys, x0, ev, 1e-13).time;
    CHECK(std::abs(t0 * std::sqrt(1.0 + eps) - complete_K(k)) <= 1e-10);
    CHECK(std::abs(jacobi_cn(t0 * std::sqrt(1.0 + eps), k)) <= 1e-10);
  }

  TEST_CASE("cn is 4K periodic and bounded") {
    for (double k : {0.2, 0.5, 0.8}) {
      const double period = 4.0 * complete_K(k);
      for (double t = -3.0; t <= 7.0; t += 0.37) {
        CHECK(std::abs(jacobi_cn(t + period, k) - jacobi_cn(t, k)) <= 1e-10);
        CHECK(std::abs(jacobi_cn(t, k)) <= 1.0 + 1e-15);
      }
    }
  }

  TEST_CASE("cn solves the Duffing equation in the k convention") {
    for (double eps : {0.1, 0.5, 1.0, 2.0}) {
      const StiffnessParam e(eps);
      const auto q = [&](double t) { return duffing_solution(t, e); };
      for (double t = 0.0; t <= duffing_period(e); t += 0.05) {
        const double x = q(t);
        CHECK(std::abs(oracle::second_derivative(q, t) + x + eps * x * x * x) <= 1e-8);
      }
    }
  }

  TEST_CASE("the m = k^2 reading of the modulus does not solve the equation") {
    const double eps = 1.0;
    const double k = duffing_modulus(StiffnessParam(eps));
    const auto q = [&](double t) { return jacobi_cn(std::sqrt(1.0 + eps) * t, k * k); };
    double worst = 0.0;
    for (double t = 0.0; t <= 3.0; t += 0.1) {
      const double x = q(t);
      worst = std::max(worst, std::abs(oracle::second_derivative(q, t) + x + eps * x * x * x));
    }
    CHECK(worst > 1e-3);
  }

  TEST_CASE("period closed form") {
    CHECK(duffing_period(0.0) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-15));
    CHECK_THROWS_AS(duffing_period(-0.5), DomainError);
    double prev = duffing_period(0.0);
    for (int i = 1; i <= 20; ++i) {
      const double tau = duffing_period(0.1 * i);
      CHECK(tau < prev);
      prev = tau;
    }
  }

  TEST_CASE("series partial sums") {
    const double twopi = 2.0 * std::numbers::pi;
    const StiffnessParam e(0.1);
    CHECK(duffing_period_series(e, 0) == doctest::Approx(twopi).epsilon(1e-15));
    CHECK(duffing_period_series(e, 1) == doctest::Approx(twopi * (1.0 - 0.0375)).epsilon(1e-15));
    CHECK(duffing_period_series(e, 2) == doctest::Approx(twopi * (1.0 - 0.0375 + 0.002226562500)).epsilon(1e-15));
    CHECK_THROWS_AS(duffing_period_series(e, 3), DomainError);
    CHECK_THROWS_AS(duffing_period_series(e, -1), DomainError);
  }

  TEST_CASE("series error is third order") {
    // Fit |series - closed| ~ C eps^3 over [0.01, 0.1]; C must be stable.
    std::vector<double> c;
    for (double eps : {0.01, 0.02, 0.05, 0.1}) {
      const double err = std::abs(duffing_period_series(StiffnessParam(eps), 2) - duffing_period(eps));
      c.push_back(err / (eps * eps * eps));
      CHECK(err <= 5.0 * eps * eps * eps);
    }
    CHECK(c.front() == doctest::Approx(c[1]).epsilon(0.05));
    CHECK(c.back() == doctest::Approx(c.front()).epsilon(0.25));
  }
}
