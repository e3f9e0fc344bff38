#include "polite/elliptic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "polite/error.hpp"

namespace polite::elliptic {

namespace {

constexpr int kMaxAgmSteps = 64;

}  // namespace

EllipticModulus::EllipticModulus(double k) : k_(k) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw DomainError("elliptic modulus must satisfy 0 <= k < 1, got " + std::to_string(k));
  }
}

double EllipticModulus::complement() const noexcept {
  // (1-k)(1+k) keeps precision as k -> 1
  return std::sqrt((1.0 - k_) * (1.0 + k_));
}

StiffnessParam::StiffnessParam(double eps) : eps_(eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw DomainError("stiffness must be finite and >= 0, got " + std::to_string(eps));
  }
}

double agm(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) {
    throw DomainError("agm requires positive arguments");
  }
  for (int i = 0; i < kMaxAgmSteps; ++i) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    if (std::abs(an - bn) <= 4.0 * std::numeric_limits<double>::epsilon() * an) {
      return 0.5 * (an + bn);
    }
    a = an;
    b = bn;
  }
  return 0.5 * (a + b);
}

double complete_K(EllipticModulus k) {
  return std::numbers::pi / (2.0 * agm(1.0, k.complement()));
}

double complete_K(double k) { return complete_K(EllipticModulus(k)); }

double jacobi_cn(double t, EllipticModulus k) {
  const double kv = k.value();
  if (kv == 0.0) {
    return std::cos(t);
  }
  // a_n, c_n of the AGM sequence seeded with (1, k', k).
  std::array<double, kMaxAgmSteps + 1> a{};
  std::array<double, kMaxAgmSteps + 1> c{};
  a[0] = 1.0;
  double b = k.complement();
  c[0] = kv;
  int n = 0;
  while (n < kMaxAgmSteps &&
         std::abs(c[n]) > std::numeric_limits<double>::epsilon() * a[n]) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * t, n);
  for (int i = n; i > 0; --i) {
    phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
  }
  return std::cos(phi);
}

double jacobi_cn(double t, double k) { return jacobi_cn(t, EllipticModulus(k)); }

double duffing_modulus(StiffnessParam eps) {
  const double e = eps.value();
  return std::sqrt(e / (2.0 * (1.0 + e)));
}

double duffing_period(StiffnessParam eps) {
  const double e = eps.value();
  return 4.0 / std::sqrt(1.0 + e) * complete_K(EllipticModulus(duffing_modulus(eps)));
}

double duffing_period(double eps) { return duffing_period(StiffnessParam(eps)); }

double duffing_period_series(StiffnessParam eps, int order) {
  if (order < 0 || order > 2) {
    throw DomainError("series coefficients are only known through eps^2; order must be 0, 1 or 2");
  }
  const double e = eps.value();
  constexpr std::array<double, 3> coeff{1.0, -3.0 / 8.0, 57.0 / 256.0};
  double sum = 0.0;
  double power = 1.0;
  for (int i = 0; i <= order; ++i) {
    sum += coeff[static_cast<std::size_t>(i)] * power;
    power *= e;
  }
  return 2.0 * std::numbers::pi * sum;
}

double duffing_solution(double t, StiffnessParam eps) {
  return jacobi_cn(std::sqrt(1.0 + eps.value()) * t, EllipticModulus(duffing_modulus(eps)));
}

}  // namespace polite::elliptic
