#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "polite/error.hpp"
#include "polite/lines.hpp"

using namespace polite;
using namespace polite::lines;
using Eigen::VectorXd;

namespace {

VectorXd v3(double a, double b, double c) {
  VectorXd x(3);
  x << a, b, c;
  return x;
}

VectorXd unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  VectorXd u(n);
  for (int i = 0; i < n; ++i) u[i] = g(rng);
  return u.normalized();
}

}  // namespace

TEST_SUITE("lines") {
  TEST_CASE("foot point") {
    const auto l0 = reduce_line(v3(0, 0, 0), v3(1, 0, 0));
    CHECK((l0.u - v3(1, 0, 0)).norm() == 0.0);
    CHECK(l0.m.norm() == 0.0);
    const auto l1 = reduce_line(v3(0, 1, 0), v3(1, 0, 0));
    CHECK((l1.m - v3(0, 1, 0)).norm() <= 1e-15);
    // The foot point minimizes |q + t p|.
    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
      const VectorXd p = unit(3, rng), q = 3.0 * unit(3, rng);
      const auto l = reduce_line(q, p);
      const double t_star = -q.dot(p);
      CHECK((l.m - (q + t_star * p)).norm() <= 1e-12);
      CHECK(l.m.norm() <= (q + (t_star + 1e-3) * p).norm());
      CHECK(l.constraint_residual() <= 1e-12);
    }
  }

  TEST_CASE("constant along the flow") {
    std::mt19937_64 rng(3);
    for (int n : {2, 3, 5}) {
      const VectorXd p = unit(n, rng), q = unit(n, rng);
      const auto l = reduce_line(q, p);
      for (double t : {-10.0, -1.0, 0.5, 5.0, 100.0}) CHECK(reduce_line(q + t * p, p).distance(l) <= 1e-12);
    }
  }

  TEST_CASE("level set is enforced") {
    CHECK_THROWS_AS(reduce_line(v3(0, 0, 0), v3(2, 0, 0)), DomainError);
    CHECK_THROWS_AS(reduce_line(v3(0, 0, 0), v3(1e-9 + 1.0, 0, 0)), DomainError);
    CHECK_THROWS_AS(reduce_line(VectorXd::Zero(2), v3(1, 0, 0)), DomainError);
    CHECK_NOTHROW(reduce_line(v3(0, 0, 0), v3(1.0 + 1e-12, 0, 0)));
  }

  TEST_CASE("translations") {
    const auto l = reduce_line(v3(0, 1, 0), v3(1, 0, 0));
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
    CHECK(act_se_n(id, l.u, l).distance(l) == 0.0);
    const auto moved = act_se_n(id, v3(0, 0, 2), l);
    CHECK((moved.m - v3(0, 1, 2)).norm() <= 1e-15);
    CHECK((moved.u - l.u).norm() == 0.0);
    const auto oblique = act_se_n(id, v3(3, 0, 2), l);
    CHECK((oblique.m - v3(0, 1, 2)).norm() <= 1e-15);
    CHECK_THROWS_AS(act_se_n(2.0 * id, v3(0, 0, 0), l), DomainError);
  }

  TEST_CASE("equivariance and orthogonality") {
    std::mt19937_64 rng(11);
    for (int n : {2, 3, 4}) {
      for (int k = 0; k < 20; ++k) {
        const VectorXd p = unit(n, rng), q = 2.0 * unit(n, rng), b = unit(n, rng);
        const Eigen::MatrixXd a = oracle::random_rotation(n, rng);
        const auto moved = act_se_n(a, b, reduce_line(q, p));
        CHECK(moved.distance(reduce_line(a * q + b, a * p)) <= 1e-10);
        CHECK(std::abs(moved.u.dot(moved.m)) <= 1e-12);
      }
    }
  }

  TEST_CASE("non-compact stabilizer") {
    OrientedLine l;
    l.u = VectorXd::Unit(2, 0);
    l.m = VectorXd::Zero(2);
    const auto samples = stabilizer_witness(l);
    CHECK(samples.back().s == 1e6);
    for (const auto& s : samples) {
      CHECK(s.residual == 0.0);
      CHECK(s.translation.norm() == doctest::Approx(s.s));
    }
    const auto off = reduce_line(v3(0, 2, -1), v3(0, 0.6, 0.8));
    for (const auto& s : stabilizer_witness(off)) CHECK(s.residual <= 1e-9 * std::max(1.0, s.s));
  }

  TEST_CASE("rotation about the axis") {
    OrientedLine axis;
    axis.u = v3(0, 0, 1);
    axis.m = v3(0, 0, 0);
    const auto [a, b] = axis_rotation(axis, v3(1, 0, 0), v3(0, 1, 0), 1.1);
    CHECK((a * axis.u - axis.u).norm() <= 1e-15);
    CHECK(act_se_n(a, b, axis).distance(axis) <= 1e-15);
    const auto shifted = reduce_line(v3(1, 2, 0), v3(0, 0, 1));
    const auto [a2, b2] = axis_rotation(shifted, v3(1, 0, 0), v3(0, 1, 0), -2.0);
    CHECK(act_se_n(a2, b2, shifted).distance(shifted) <= 1e-12);
    CHECK((a2 * v3(1, 0, 0) - v3(1, 0, 0)).norm() > 0.5);
  }

  TEST_CASE("quotient dimension") {
    std::mt19937_64 rng(5);
    for (int n : {2, 3, 4, 5}) {
      const VectorXd p = unit(n, rng), q = unit(n, rng);
      CHECK(quotient_chart_rank(q, p) == 2 * n - 2);
    }
  }

  TEST_CASE("json round trip") {
    const auto l = reduce_line(v3(0.3, 1, -2), v3(0, 0.6, 0.8));
    CHECK(OrientedLine::from_json(l.to_json()).distance(l) == 0.0);
    auto bad = l.to_json();
    bad["u"] = {2.0, 0.0, 0.0};
    CHECK_THROWS_AS(OrientedLine::from_json(bad), DomainError);
  }
}
