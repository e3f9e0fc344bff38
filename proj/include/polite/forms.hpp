#pragma once

// Pointwise exterior calculus on Spin(3) x (R^3 \ 0) in the frame
// (psi_1, psi_2, psi_3, dx_1, dx_2, dx_3).
//
// psi = 2 Im(g^{-1} dg) for a unit quaternion g, which gives the
// Maurer-Cartan relations d psi_i = -psi_j ^ psi_k for (i, j, k) cyclic.

#include <Eigen/Dense>
#include <functional>
#include <random>

namespace polite::forms {

/// Quaternion stored as (w, x, y, z).
using Quaternion = Eigen::Vector4d;

Quaternion quat_mul(const Quaternion& a, const Quaternion& b);
Quaternion quat_conj(const Quaternion& a);

struct FramePoint {
  Eigen::Vector3d x;
  Quaternion g;

  FramePoint(const Eigen::Vector3d& base, const Quaternion& group);
};

/// Profile z(x_3) together with its derivative.
struct Profile {
  std::function<double(double)> z;
  std::function<double(double)> dz;
};

/// z(x) = x / sqrt(1 + x^2).
Profile standard_profile();
Profile constant_profile(double c);
Profile negated_standard_profile();

using TwoFormMatrix = Eigen::Matrix<double, 6, 6>;

/// omega = psi_1 ^ psi_2 + z'(x_3) dx_3 ^ psi_3 + z(x_3) d psi_3 + dx_1 ^ dx_2.
TwoFormMatrix omega_at(const FramePoint& pt, const Profile& profile);

/// Pfaffian of a 6x6 antisymmetric matrix.
double pfaffian(const TwoFormMatrix& w);
int form_rank(const TwoFormMatrix& w, double rel_tol = 1e-10);

/// Structure constants of the frame: [E_K, E_I] = c^L_{KI} E_L. `sign` = -1 flips them.
double frame_structure_constant(int l, int k, int i, double sign = 1.0);

/// Max |d omega(E_K, E_I, E_J)| over all index triples, with frame derivatives
/// of the coefficients taken by central differences of step h.
double check_closed(const FramePoint& pt, const Profile& profile, double h,
                    double structure_sign = 1.0);

/// Max residual of d psi_i + psi_j ^ psi_k in a quaternion chart around g,
/// with d psi computed by central differences of step h. `frame_scale`
/// multiplies the frame (scale 2 is a negative control).
double maurer_cartan_residual(const Quaternion& g, double h, double frame_scale = 1.0);

/// Residual at the identity and at `random_points` random unit quaternions.
double maurer_cartan_selftest(double h, int random_points = 20, std::uint64_t seed = 42);

Quaternion random_unit_quaternion(std::mt19937_64& rng);
FramePoint random_frame_point(std::mt19937_64& rng, double radius = 2.0);

}  // namespace polite::forms
