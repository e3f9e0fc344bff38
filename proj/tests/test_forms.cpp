#include <doctest.h>

#include <cmath>
#include <random>

#include "polite/error.hpp"
#include "polite/forms.hpp"

using namespace polite;
using namespace polite::forms;

namespace {

FramePoint at_height(double x3, const Quaternion& g = Quaternion(1, 0, 0, 0)) {
  return FramePoint(Eigen::Vector3d(0.4, -0.7, x3), g);
}

}  // namespace

TEST_SUITE("forms") {
  TEST_CASE("quaternion algebra") {
    const Quaternion i(0, 1, 0, 0), j(0, 0, 1, 0), k(0, 0, 0, 1);
    CHECK((quat_mul(i, j) - k).norm() == 0.0);
    CHECK((quat_mul(j, i) + k).norm() == 0.0);
    CHECK((quat_mul(i, i) + Quaternion(1, 0, 0, 0)).norm() == 0.0);
    std::mt19937_64 rng(1);
    const Quaternion g = random_unit_quaternion(rng);
    CHECK(std::abs(g.norm() - 1.0) <= 1e-15);
    CHECK((quat_mul(g, quat_conj(g)) - Quaternion(1, 0, 0, 0)).norm() <= 1e-15);
  }

  TEST_CASE("frame point validation") {
    CHECK_THROWS_AS(FramePoint(Eigen::Vector3d(1, 0, 0), Quaternion(2, 0, 0, 0)), DomainError);
    CHECK_THROWS_AS(FramePoint(Eigen::Vector3d::Zero(), Quaternion(1, 0, 0, 0)), DomainError);
  }

  TEST_CASE("rank dichotomy") {
    const auto w0 = omega_at(at_height(0.3), constant_profile(0.0));
    CHECK((w0 + w0.transpose()).norm() == 0.0);
    CHECK(form_rank(w0) == 4);
    CHECK(pfaffian(w0) == 0.0);
    const auto w = omega_at(at_height(0.0), standard_profile());
    CHECK(form_rank(w) == 6);
    CHECK((w + w.transpose()).norm() == 0.0);
  }

  TEST_CASE("pfaffian against the determinant") {
    std::mt19937_64 rng(42);
    const auto profile = standard_profile();
    for (int k = 0; k < 100; ++k) {
      const FramePoint pt = random_frame_point(rng);
      const auto w = omega_at(pt, profile);
      const double pf = pfaffian(w);
      CHECK(pf * pf == doctest::Approx(w.determinant()).epsilon(1e-9));
      const double x3 = pt.x[2];
      const double closed = -profile.dz(x3) * (1.0 - profile.z(x3));
      CHECK(pf == doctest::Approx(closed).epsilon(1e-12));
      CHECK(std::abs(pf) > 0.0);
    }
  }

  TEST_CASE("negated profile stays nondegenerate") {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 20; ++k) CHECK(form_rank(omega_at(random_frame_point(rng), negated_standard_profile())) == 6);
  }

  TEST_CASE("closedness") {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 20; ++k) {
      const FramePoint pt = random_frame_point(rng);
      CHECK(check_closed(pt, standard_profile(), 1e-4) <= 1e-6);
      CHECK(check_closed(pt, constant_profile(0.7), 1e-4) <= 1e-9);
    }
    const FramePoint pt = at_height(0.5, Quaternion(0.5, 0.5, 0.5, 0.5));
    CHECK(check_closed(pt, standard_profile(), 1e-4, -1.0) > 1e-3);
    CHECK_THROWS_AS(check_closed(pt, standard_profile(), 0.0), DomainError);
  }

  TEST_CASE("closedness error shrinks quadratically") {
    const FramePoint pt = at_height(0.8, Quaternion(0.5, -0.5, 0.5, 0.5));
    const double e1 = check_closed(pt, standard_profile(), 4e-2);
    const double e2 = check_closed(pt, standard_profile(), 2e-2);
    if (e1 > 1e-12) CHECK(std::log2(e1 / e2) > 1.5);
  }

  TEST_CASE("structure constants") {
    CHECK(frame_structure_constant(2, 0, 1) == -frame_structure_constant(2, 1, 0));
    CHECK(frame_structure_constant(2, 0, 1, -1.0) == -frame_structure_constant(2, 0, 1));
    for (int l = 0; l < 6; ++l)
      for (int k = 3; k < 6; ++k)
        for (int i = 0; i < 6; ++i) CHECK(frame_structure_constant(l, k, i) == 0.0);
  }

  TEST_CASE("Maurer-Cartan relations") {
    CHECK(maurer_cartan_residual(Quaternion(1, 0, 0, 0), 1e-4) <= 1e-6);
    CHECK(maurer_cartan_selftest(1e-4, 20, 42) <= 1e-6);
    const Quaternion g = Quaternion(1.0, 0.3, -0.2, 0.1).normalized();
    const double r1 = maurer_cartan_residual(g, 2e-2), r2 = maurer_cartan_residual(g, 1e-2);
    CHECK(std::log2(r1 / r2) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(maurer_cartan_residual(g, 1e-4, 2.0) > 1e-2);
    CHECK_THROWS_AS(maurer_cartan_residual(g, -1.0), DomainError);
  }
}
