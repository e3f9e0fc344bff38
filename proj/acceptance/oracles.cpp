#include "oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

namespace polite::oracle {

double complete_K_quadrature(double k) {
  const auto f = [k](double t) {
    const double s = std::sin(t);
    return 1.0 / std::sqrt(1.0 - k * k * s * s);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.0, std::numbers::pi / 2.0, 15, 1e-15);
}

double duffing_series(double eps) {
  return 2.0 * std::numbers::pi * (1.0 - 3.0 / 8.0 * eps + 57.0 / 256.0 * eps * eps);
}

Eigen::Matrix2d oscillator_matrix(double t) {
  Eigen::Matrix2d m;
  m << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  return m;
}

double torus_x_closed_form(double x0, double t) {
  return 2.0 * std::atan(std::exp(t) * std::tan(x0 / 2.0));
}

std::vector<Eigen::VectorXd> rk4(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x0, double t_final, double step) {
  const long n = std::lround(t_final / step);
  std::vector<Eigen::VectorXd> out{x0};
  Eigen::VectorXd x = x0;
  for (long i = 0; i < n; ++i) {
    const Eigen::VectorXd k1 = f(x);
    const Eigen::VectorXd k2 = f(x + 0.5 * step * k1);
    const Eigen::VectorXd k3 = f(x + 0.5 * step * k2);
    const Eigen::VectorXd k4 = f(x + step * k3);
    x += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back(x);
  }
  return out;
}

Eigen::VectorXd champagne_field(const Eigen::VectorXd& x) {
  const double k = 4.0 * (x[0] * x[0] + x[1] * x[1]) - 2.0;
  Eigen::VectorXd v(4);
  v << x[2], x[3], -k * x[0], -k * x[1];
  return v;
}

double directional_derivative(const std::function<double(const Eigen::VectorXd&)>& f,
                              const Eigen::VectorXd& field, const Eigen::VectorXd& x,
                              double step) {
  return (f(x + step * field) - f(x - step * field)) / (2.0 * step);
}

double second_derivative(const std::function<double(double)>& f, double t, double step) {
  return (-f(t + 2 * step) + 16 * f(t + step) - 30 * f(t) + 16 * f(t - step) - f(t - 2 * step)) /
         (12.0 * step * step);
}

Eigen::MatrixXd random_rotation(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    if (r(i, i) < 0) q.col(i) *= -1.0;
  }
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

}  // namespace polite::oracle
