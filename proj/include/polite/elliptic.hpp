#pragma once

// Complete elliptic integral K, Jacobi cn and the stiff-spring period.
//
// Modulus convention: every function takes the modulus k (not the parameter
// m = k^2). With this convention q(t) = cn(sqrt(1+eps) t; k) and
// k = sqrt(eps / (2 (1 + eps))) solves q'' + q + eps q^3 = 0, q(0) = 1.

namespace polite::elliptic {

/// Elliptic modulus with 0 <= k < 1.
class EllipticModulus {
 public:
  explicit EllipticModulus(double k);
  double value() const noexcept { return k_; }
  /// Complementary modulus sqrt(1 - k^2).
  double complement() const noexcept;

 private:
  double k_;
};

/// Stiffness of the quartic spring; eps = 0 is the harmonic limit.
class StiffnessParam {
 public:
  explicit StiffnessParam(double eps);
  double value() const noexcept { return eps_; }

 private:
  double eps_;
};

/// Arithmetic-geometric mean of two positive numbers.
double agm(double a, double b);

/// K(k) = int_0^{pi/2} dtheta / sqrt(1 - k^2 sin^2 theta), by AGM.
double complete_K(EllipticModulus k);
double complete_K(double k);

/// cn(t; k) by the descending Landen (AGM) scheme.
double jacobi_cn(double t, EllipticModulus k);
double jacobi_cn(double t, double k);

/// Modulus of the cn solution of the Duffing problem with q(0)=1, q'(0)=0.
double duffing_modulus(StiffnessParam eps);

/// tau(eps) = 4 / sqrt(1 + eps) * K(sqrt(eps / (2 (1 + eps)))).
double duffing_period(StiffnessParam eps);
double duffing_period(double eps);

/// Partial sum 2 pi (1 - 3/8 eps + 57/256 eps^2) truncated at `order` (0, 1 or 2).
double duffing_period_series(StiffnessParam eps, int order);

/// Closed-form Duffing solution from q(0)=1, q'(0)=0.
double duffing_solution(double t, StiffnessParam eps);

}  // namespace polite::elliptic
