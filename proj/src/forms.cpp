#include "polite/forms.hpp"

#include <cmath>

#include "polite/error.hpp"
#include "polite/lie.hpp"

namespace polite::forms {

namespace {

constexpr int kPsi1 = 0, kPsi2 = 1, kPsi3 = 2, kDx1 = 3, kDx2 = 4, kDx3 = 5;

int levi_civita(int i, int j, int k) {
  return (i - j) * (j - k) * (k - i) / 2;
}

void set_pair(TwoFormMatrix& w, int i, int j, double v) {
  w(i, j) += v;
  w(j, i) -= v;
}

// Frame coefficients A(a, mu) = frame_scale * 2 Im_a(g^{-1} d_mu g) at chart point y.
Eigen::Matrix3d frame_coefficients(const Quaternion& g0, const Eigen::Vector3d& y, double scale) {
  const Quaternion q(1.0, y[0], y[1], y[2]);
  const double nq = q.norm();
  const Quaternion g = quat_mul(g0, q / nq);
  const Quaternion gi = quat_conj(g);
  Eigen::Matrix3d a;
  for (int mu = 0; mu < 3; ++mu) {
    Quaternion e = Quaternion::Zero();
    e[mu + 1] = 1.0;
    const Quaternion dq = e / nq - q * (q.dot(e)) / (nq * nq * nq);
    const Quaternion dg = quat_mul(g0, dq);
    const Quaternion w = quat_mul(gi, dg);
    for (int k = 0; k < 3; ++k) a(k, mu) = scale * 2.0 * w[k + 1];
  }
  return a;
}

}  // namespace

Quaternion quat_mul(const Quaternion& a, const Quaternion& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

Quaternion quat_conj(const Quaternion& a) { return {a[0], -a[1], -a[2], -a[3]}; }

FramePoint::FramePoint(const Eigen::Vector3d& base, const Quaternion& group) : x(base), g(group) {
  if (std::abs(g.norm() - 1.0) > 1e-12) throw DomainError("frame point: g must be a unit quaternion");
  if (!(x.norm() > 0.0)) throw DomainError("frame point: base point must be nonzero");
}

Profile standard_profile() {
  return {[](double x) { return x / std::sqrt(1.0 + x * x); },
          [](double x) { return std::pow(1.0 + x * x, -1.5); }};
}

Profile constant_profile(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }};
}

Profile negated_standard_profile() {
  return {[](double x) { return -x / std::sqrt(1.0 + x * x); },
          [](double x) { return -std::pow(1.0 + x * x, -1.5); }};
}

TwoFormMatrix omega_at(const FramePoint& pt, const Profile& profile) {
  const double x3 = pt.x[2];
  const double z = profile.z(x3);
  const double dz = profile.dz(x3);
  TwoFormMatrix w = TwoFormMatrix::Zero();
  set_pair(w, kPsi1, kPsi2, 1.0);
  set_pair(w, kDx3, kPsi3, dz);
  // z d psi_3 = -z psi_1 ^ psi_2
  set_pair(w, kPsi1, kPsi2, -z);
  set_pair(w, kDx1, kDx2, 1.0);
  return w;
}

double pfaffian(const TwoFormMatrix& w) {
  // Expansion along the first row, recursively on minors.
  const std::function<double(const std::vector<int>&)> pf = [&](const std::vector<int>& idx) -> double {
    if (idx.empty()) return 1.0;
    double sum = 0.0;
    const int i0 = idx[0];
    for (std::size_t j = 1; j < idx.size(); ++j) {
      std::vector<int> rest;
      for (std::size_t k = 1; k < idx.size(); ++k)
        if (k != j) rest.push_back(idx[k]);
      const double sign = (j % 2 == 1) ? 1.0 : -1.0;
      sum += sign * w(i0, idx[j]) * pf(rest);
    }
    return sum;
  };
  return pf({0, 1, 2, 3, 4, 5});
}

int form_rank(const TwoFormMatrix& w, double rel_tol) {
  return lie::numeric_rank(Eigen::MatrixXd(w), rel_tol);
}

double frame_structure_constant(int l, int k, int i, double sign) {
  if (l > kPsi3 || k > kPsi3 || i > kPsi3) return 0.0;
  return sign * levi_civita(l, k, i);
}

double check_closed(const FramePoint& pt, const Profile& profile, double h, double structure_sign) {
  if (!(h > 0.0)) throw DomainError("check_closed: step must be positive");
  const TwoFormMatrix w0 = omega_at(pt, profile);
  // E_K W for every frame direction by central differences along its flow.
  std::array<TwoFormMatrix, 6> dw;
  for (int k = 0; k < 6; ++k) {
    Eigen::Vector3d xp = pt.x, xm = pt.x;
    Quaternion gp = pt.g, gm = pt.g;
    if (k <= kPsi3) {
      // left-invariant field dual to psi_k: g -> g exp(s e_k / 2)
      Quaternion e(std::cos(0.5 * h), 0, 0, 0);
      e[k + 1] = std::sin(0.5 * h);
      Quaternion einv = quat_conj(e);
      gp = quat_mul(pt.g, e);
      gm = quat_mul(pt.g, einv);
    } else {
      xp[k - kDx1] += h;
      xm[k - kDx1] -= h;
    }
    dw[static_cast<std::size_t>(k)] =
        (omega_at(FramePoint(xp, gp.normalized()), profile) -
         omega_at(FramePoint(xm, gm.normalized()), profile)) /
        (2.0 * h);
  }
  auto c = [structure_sign](int l, int a, int b) {
    return frame_structure_constant(l, a, b, structure_sign);
  };
  double resid = 0.0;
  for (int k = 0; k < 6; ++k) {
    for (int i = k + 1; i < 6; ++i) {
      for (int j = i + 1; j < 6; ++j) {
        double v = dw[static_cast<std::size_t>(k)](i, j) - dw[static_cast<std::size_t>(i)](k, j) +
                   dw[static_cast<std::size_t>(j)](k, i);
        for (int l = 0; l < 6; ++l) {
          v += -c(l, k, i) * w0(l, j) + c(l, k, j) * w0(l, i) - c(l, i, j) * w0(l, k);
        }
        resid = std::max(resid, std::abs(v));
      }
    }
  }
  return resid;
}

double maurer_cartan_residual(const Quaternion& g, double h, double frame_scale) {
  if (!(h > 0.0)) throw DomainError("maurer_cartan_residual: step must be positive");
  // Evaluate at a generic chart point so truncation error is not cancelled by symmetry.
  const Eigen::Vector3d y0(0.3, -0.2, 0.1);
  const Eigen::Matrix3d a = frame_coefficients(g, y0, frame_scale);
  std::array<Eigen::Matrix3d, 3> da;  // da[nu](k, mu) = d_nu A(k, mu)
  for (int nu = 0; nu < 3; ++nu) {
    Eigen::Vector3d yp = y0, ym = y0;
    yp[nu] += h;
    ym[nu] -= h;
    da[static_cast<std::size_t>(nu)] =
        (frame_coefficients(g, yp, frame_scale) - frame_coefficients(g, ym, frame_scale)) / (2.0 * h);
  }
  double resid = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    for (int mu = 0; mu < 3; ++mu) {
      for (int nu = mu + 1; nu < 3; ++nu) {
        const double dpsi = da[static_cast<std::size_t>(mu)](i, nu) - da[static_cast<std::size_t>(nu)](i, mu);
        const double wedge = a(j, mu) * a(k, nu) - a(j, nu) * a(k, mu);
        resid = std::max(resid, std::abs(dpsi + wedge));
      }
    }
  }
  return resid;
}

Quaternion random_unit_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Quaternion q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized();
}

double maurer_cartan_selftest(double h, int random_points, std::uint64_t seed) {
  double r = maurer_cartan_residual(Quaternion(1, 0, 0, 0), h);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < random_points; ++i) {
    r = std::max(r, maurer_cartan_residual(random_unit_quaternion(rng), h));
  }
  return r;
}

FramePoint random_frame_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  Eigen::Vector3d x;
  do {
    x = Eigen::Vector3d(u(rng), u(rng), u(rng));
  } while (x.norm() < 1e-3);
  return FramePoint(x, random_unit_quaternion(rng));
}

}  // namespace polite::forms
