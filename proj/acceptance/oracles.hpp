#pragma once

// Independent reference computations used only by tests and the acceptance
// suite. Nothing here calls into the library's own numerics.

#include <Eigen/Dense>
#include <functional>
#include <random>

namespace polite::oracle {

/// K(k) = int_0^{pi/2} (1 - k^2 sin^2 t)^{-1/2} dt by adaptive Gauss-Kronrod.
double complete_K_quadrature(double k);

/// 2 pi (1 - 3/8 eps + 57/256 eps^2).
double duffing_series(double eps);

/// Printed oscillator flow matrix [[cos t, sin t], [-sin t, cos t]].
Eigen::Matrix2d oscillator_matrix(double t);

/// x(t) = 2 atan(e^t tan(x0 / 2)) for x0 in (0, pi).
double torus_x_closed_form(double x0, double t);

/// Fixed-step classical Runge-Kutta; returns the state at each multiple of
/// `step` up to t_final (inclusive).
std::vector<Eigen::VectorXd> rk4(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x0, double t_final, double step);

/// Champagne bottle field qdot = p, pdot = -(4|q|^2 - 2) q, written out directly.
Eigen::VectorXd champagne_field(const Eigen::VectorXd& x);

/// d/dt f(x(t)) at t = 0 along xdot = field(x), by a central difference of f
/// along the straight line x + s field(x); exact for quadratic f up to rounding.
double directional_derivative(const std::function<double(const Eigen::VectorXd&)>& f,
                              const Eigen::VectorXd& field, const Eigen::VectorXd& x,
                              double step = 1e-3);

/// Second derivative by the 5-point stencil.
double second_derivative(const std::function<double(double)>& f, double t, double step = 1e-3);

/// Haar-random orthogonal matrix with determinant +1.
Eigen::MatrixXd random_rotation(int n, std::mt19937_64& rng);

}  // namespace polite::oracle
