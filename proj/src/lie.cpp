#include "polite/lie.hpp"

#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "polite/error.hpp"

namespace polite::lie {

AlgebraSpec::AlgebraSpec(int dimension, std::vector<double> structure_constants,
                         std::vector<std::string> labels, std::string name)
    : dim_(dimension), c_(std::move(structure_constants)), labels_(std::move(labels)),
      name_(std::move(name)) {
  if (dim_ < 0) throw DomainError("algebra dimension must be non-negative");
  const auto n = static_cast<std::size_t>(dim_);
  if (c_.size() != n * n * n) throw DomainError("structure constant array has wrong size");
  if (labels_.empty()) {
    for (int i = 0; i < dim_; ++i) labels_.push_back("e" + std::to_string(i + 1));
  }
  if (labels_.size() != n) throw DomainError("label count does not match dimension");
}

Eigen::VectorXd AlgebraSpec::basis_vector(int i) const {
  return Eigen::VectorXd::Unit(dim_, i);
}

Eigen::VectorXd AlgebraSpec::bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  if (x.size() != dim_ || y.size() != dim_) throw DomainError("bracket: dimension mismatch");
  return ad(x) * y;
}

Eigen::MatrixXd AlgebraSpec::ad(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw DomainError("ad: dimension mismatch");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      for (int k = 0; k < dim_; ++k) m(k, j) += x[i] * c(i, j, k);
    }
  }
  return m;
}

double AlgebraSpec::antisymmetry_residual() const {
  double r = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) r = std::max(r, std::abs(c(i, j, k) + c(j, i, k)));
  return r;
}

double AlgebraSpec::jacobi_residual() const {
  double r = 0.0;
  for (int i = 0; i < dim_; ++i) {
    const Eigen::VectorXd ei = basis_vector(i);
    for (int j = 0; j < dim_; ++j) {
      const Eigen::VectorXd ej = basis_vector(j);
      for (int k = 0; k < dim_; ++k) {
        const Eigen::VectorXd ek = basis_vector(k);
        const Eigen::VectorXd s = bracket(ei, bracket(ej, ek)) + bracket(ej, bracket(ek, ei)) +
                                  bracket(ek, bracket(ei, ej));
        r = std::max(r, s.cwiseAbs().maxCoeff());
      }
    }
  }
  return r;
}

AlgebraSpec AlgebraSpec::from_json(const nlohmann::json& doc) {
  const int dim = doc.at("dimension").get<int>();
  if (dim < 0) throw DomainError("algebra dimension must be non-negative");
  std::vector<std::string> labels;
  if (doc.contains("labels")) labels = doc.at("labels").get<std::vector<std::string>>();
  const auto n = static_cast<std::size_t>(dim);
  std::vector<double> c(n * n * n, 0.0);
  std::vector<bool> seen(n * n * n, false);
  for (const auto& entry : doc.at("brackets")) {
    const int i = entry.at(0).get<int>();
    const int j = entry.at(1).get<int>();
    const auto coeffs = entry.at(2).get<std::vector<double>>();
    if (i < 0 || j < 0 || i >= dim || j >= dim || coeffs.size() != n) {
      throw DomainError("malformed bracket entry");
    }
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t a = (static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)) * n + k;
      const std::size_t b = (static_cast<std::size_t>(j) * n + static_cast<std::size_t>(i)) * n + k;
      c[a] = coeffs[k];
      if (!seen[b]) c[b] = -coeffs[k];
      seen[a] = true;
    }
  }
  AlgebraSpec alg(dim, std::move(c), std::move(labels), doc.value("name", std::string{}));
  if (alg.antisymmetry_residual() > 1e-12) throw DomainError("structure constants not antisymmetric");
  if (alg.jacobi_residual() > 1e-12) throw DomainError("structure constants violate the Jacobi identity");
  return alg;
}

nlohmann::json AlgebraSpec::to_json() const {
  nlohmann::json brackets = nlohmann::json::array();
  for (int i = 0; i < dim_; ++i) {
    for (int j = i + 1; j < dim_; ++j) {
      std::vector<double> coeffs(static_cast<std::size_t>(dim_));
      bool nonzero = false;
      for (int k = 0; k < dim_; ++k) {
        coeffs[static_cast<std::size_t>(k)] = c(i, j, k);
        nonzero = nonzero || c(i, j, k) != 0.0;
      }
      if (nonzero) brackets.push_back({i, j, coeffs});
    }
  }
  return {{"name", name_}, {"dimension", dim_}, {"labels", labels_}, {"brackets", brackets}};
}

Eigen::MatrixXd Subalgebra::projector() const { return basis * basis.transpose(); }

double Subalgebra::closure_residual() const {
  const Eigen::MatrixXd p = projector();
  double r = 0.0;
  for (Eigen::Index a = 0; a < basis.cols(); ++a) {
    for (Eigen::Index b = a + 1; b < basis.cols(); ++b) {
      const Eigen::VectorXd v = parent.bracket(basis.col(a), basis.col(b));
      r = std::max(r, (v - p * v).norm());
    }
  }
  return r;
}

bool Subalgebra::contains(const Subalgebra& other, double tol) const {
  if (other.basis.cols() == 0) return true;
  const Eigen::MatrixXd resid = other.basis - projector() * other.basis;
  return resid.cwiseAbs().maxCoeff() <= tol;
}

bool Subalgebra::same_span(const Subalgebra& other, double tol) const {
  return dimension() == other.dimension() && contains(other, tol) && other.contains(*this, tol);
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double rel_tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0 || n == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s.size() > 0 ? s[0] : 0.0;
  if (smax == 0.0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > rel_tol * smax) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

int numeric_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > rel_tol * s[0]) ++rank;
  }
  return rank;
}

Eigen::MatrixXd canonical_basis(const Eigen::MatrixXd& columns, double tol) {
  const Eigen::Index n = columns.rows();
  if (columns.cols() == 0) return Eigen::MatrixXd(n, 0);
  // Orthonormal basis of the span first, then project the standard basis.
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns, Eigen::ComputeThinU);
  const int r = numeric_rank(columns);
  const Eigen::MatrixXd q = svd.matrixU().leftCols(r);
  const Eigen::MatrixXd p = q * q.transpose();
  std::vector<Eigen::VectorXd> out;
  for (Eigen::Index i = 0; i < n && static_cast<int>(out.size()) < r; ++i) {
    Eigen::VectorXd v = p.col(i);
    for (const auto& u : out) v -= u.dot(v) * u;
    for (const auto& u : out) v -= u.dot(v) * u;
    const double nv = v.norm();
    if (nv > std::sqrt(tol)) out.push_back(v / nv);
  }
  Eigen::MatrixXd b(n, static_cast<Eigen::Index>(out.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    Eigen::VectorXd v = out[i];
    // Snap round-off so coordinate directions come back exactly.
    for (Eigen::Index k = 0; k < n; ++k) {
      if (std::abs(v[k]) < 1e-14) v[k] = 0.0;
    }
    b.col(static_cast<Eigen::Index>(i)) = v.normalized();
  }
  return b;
}

Subalgebra span(const AlgebraSpec& alg, const Eigen::MatrixXd& columns) {
  if (columns.rows() != alg.dimension()) throw DomainError("span: dimension mismatch");
  return Subalgebra{alg, canonical_basis(columns)};
}

Subalgebra whole(const AlgebraSpec& alg) {
  return Subalgebra{alg, Eigen::MatrixXd::Identity(alg.dimension(), alg.dimension())};
}

Covector coadjoint_generator(const AlgebraSpec& alg, const Eigen::VectorXd& xi, const Covector& mu) {
  if (xi.size() != alg.dimension() || mu.components.size() != alg.dimension()) {
    throw DomainError("coadjoint_generator: dimension mismatch");
  }
  // nu_j = -sum_k mu_k ad(xi)_{kj}
  return Covector{-alg.ad(xi).transpose() * mu.components};
}

Eigen::MatrixXd coadjoint_matrix(const AlgebraSpec& alg, const Covector& mu) {
  if (mu.components.size() != alg.dimension()) throw DomainError("coadjoint_matrix: dimension mismatch");
  Eigen::MatrixXd m(alg.dimension(), alg.dimension());
  for (int i = 0; i < alg.dimension(); ++i) {
    m.col(i) = coadjoint_generator(alg, alg.basis_vector(i), mu).components;
  }
  return m;
}

Eigen::MatrixXd coadjoint_flow_matrix(const AlgebraSpec& alg, const Eigen::VectorXd& xi) {
  return -alg.ad(xi).transpose();
}

Covector coadjoint_flow(const AlgebraSpec& alg, const Eigen::VectorXd& xi, const Covector& mu,
                        double t) {
  const Eigen::MatrixXd m = t * coadjoint_flow_matrix(alg, xi);
  return Covector{m.exp() * mu.components};
}

Subalgebra isotropy_algebra(const AlgebraSpec& alg, const Covector& mu) {
  return span(alg, null_space(coadjoint_matrix(alg, mu)));
}

int orbit_dimension(const AlgebraSpec& alg, const Covector& mu) {
  return numeric_rank(coadjoint_matrix(alg, mu));
}

Subalgebra normalizer_algebra(const AlgebraSpec& alg, const Subalgebra& h) {
  const int n = alg.dimension();
  if (h.dimension() == 0) return whole(alg);
  if (h.closure_residual() > 1e-10) throw DomainError("normalizer_algebra: input is not a subalgebra");
  const Eigen::MatrixXd perp = Eigen::MatrixXd::Identity(n, n) - h.projector();
  // [xi, h_b] = -ad(h_b) xi must have no component orthogonal to h.
  Eigen::MatrixXd stacked(n * h.dimension(), n);
  for (int b = 0; b < h.dimension(); ++b) {
    stacked.middleRows(static_cast<Eigen::Index>(b) * n, n) = perp * alg.ad(h.basis.col(b));
  }
  return span(alg, null_space(stacked));
}

AlgebraSpec quotient_algebra(const Subalgebra& n_alg, const Subalgebra& h) {
  const AlgebraSpec& g = n_alg.parent;
  if (!n_alg.contains(h)) throw DomainError("quotient_algebra: h is not contained in n");
  const Eigen::MatrixXd ph = h.projector();
  for (int a = 0; a < n_alg.dimension(); ++a) {
    for (int b = 0; b < h.dimension(); ++b) {
      const Eigen::VectorXd v = g.bracket(n_alg.basis.col(a), h.basis.col(b));
      if ((v - ph * v).norm() > 1e-10) throw DomainError("quotient_algebra: h is not an ideal of n");
    }
  }
  const int gd = g.dimension();
  const Eigen::MatrixXd comp_span =
      (Eigen::MatrixXd::Identity(gd, gd) - ph) * n_alg.projector();
  const Eigen::MatrixXd c = h.dimension() == n_alg.dimension()
                                ? Eigen::MatrixXd(gd, 0)
                                : canonical_basis(comp_span);
  const int q = static_cast<int>(c.cols());
  std::vector<double> sc(static_cast<std::size_t>(q * q * q), 0.0);
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      const Eigen::VectorXd coords = c.transpose() * g.bracket(c.col(a), c.col(b));
      for (int k = 0; k < q; ++k) {
        double v = coords[k];
        if (std::abs(v) < 1e-14) v = 0.0;
        sc[static_cast<std::size_t>((a * q + b) * q + k)] = v;
      }
    }
  }
  std::vector<std::string> labels;
  for (int a = 0; a < q; ++a) {
    std::string label = "[c" + std::to_string(a + 1) + "]";
    for (int i = 0; i < gd; ++i) {
      if (std::abs(std::abs(c(i, a)) - 1.0) < 1e-12) {
        label = std::string(c(i, a) < 0 ? "-" : "") + "[" + g.labels()[static_cast<std::size_t>(i)] + "]";
      }
    }
    labels.push_back(label);
  }
  return AlgebraSpec(q, std::move(sc), std::move(labels),
                     (g.name().empty() ? std::string("g") : g.name()) + " quotient");
}

std::vector<int> derived_series_dimensions(const AlgebraSpec& alg) {
  std::vector<int> dims;
  Eigen::MatrixXd cur = Eigen::MatrixXd::Identity(alg.dimension(), alg.dimension());
  dims.push_back(alg.dimension());
  while (cur.cols() > 0) {
    Eigen::MatrixXd br(alg.dimension(), cur.cols() * cur.cols());
    Eigen::Index col = 0;
    for (Eigen::Index a = 0; a < cur.cols(); ++a)
      for (Eigen::Index b = 0; b < cur.cols(); ++b) br.col(col++) = alg.bracket(cur.col(a), cur.col(b));
    const Eigen::MatrixXd next = canonical_basis(br);
    dims.push_back(static_cast<int>(next.cols()));
    if (next.cols() == cur.cols()) break;
    cur = next;
  }
  return dims;
}

bool is_solvable(const AlgebraSpec& alg) { return derived_series_dimensions(alg).back() == 0; }

bool is_abelian(const AlgebraSpec& alg, double tol) {
  for (int i = 0; i < alg.dimension(); ++i)
    for (int j = 0; j < alg.dimension(); ++j)
      for (int k = 0; k < alg.dimension(); ++k)
        if (std::abs(alg.c(i, j, k)) > tol) return false;
  return true;
}

AlgebraSpec make_class_S(int n) {
  if (n < 1) throw DomainError("class S algebra requires n >= 1");
  const int d = n + 1;
  std::vector<double> c(static_cast<std::size_t>(d * d * d), 0.0);
  const int y = n;
  auto at = [d](int i, int j, int k) { return static_cast<std::size_t>((i * d + j) * d + k); };
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) {
    c[at(y, i, i)] = 1.0;
    c[at(i, y, i)] = -1.0;
    labels.push_back("X" + std::to_string(i + 1));
  }
  labels.push_back("Y");
  return AlgebraSpec(d, std::move(c), std::move(labels), "classS(" + std::to_string(n) + ")");
}

AlgebraSpec make_sl2() {
  std::vector<double> c(27, 0.0);
  auto set = [&c](int i, int j, int k, double v) {
    c[static_cast<std::size_t>((i * 3 + j) * 3 + k)] = v;
    c[static_cast<std::size_t>((j * 3 + i) * 3 + k)] = -v;
  };
  constexpr int H = 0, E = 1, F = 2;
  set(H, E, E, 2.0);
  set(H, F, F, -2.0);
  set(E, F, H, 1.0);
  return AlgebraSpec(3, std::move(c), {"H", "E", "F"}, "sl2");
}

std::string to_string(Sl2Type t) {
  switch (t) {
    case Sl2Type::Elliptic: return "elliptic";
    case Sl2Type::Hyperbolic: return "hyperbolic";
    case Sl2Type::Parabolic: return "parabolic";
    case Sl2Type::Zero: return "zero";
  }
  return "unknown";
}

Eigen::Matrix2d sl2_matrix(const Eigen::Vector3d& v) {
  Eigen::Matrix2d m;
  m << v[0], v[1], v[2], -v[0];
  return m;
}

Eigen::Vector3d sl2_coordinates(const Eigen::Matrix2d& m) {
  if (std::abs(m.trace()) > 1e-12) throw DomainError("sl(2) matrix must be traceless");
  return {m(0, 0), m(0, 1), m(1, 0)};
}

Covector sl2_covector_from_matrix(const Eigen::Matrix2d& m) {
  // mu(xi) = tr(M xi) on the basis H, E, F.
  const AlgebraSpec alg = make_sl2();
  Eigen::VectorXd mu(3);
  for (int i = 0; i < 3; ++i) mu[i] = (m * sl2_matrix(alg.basis_vector(i))).trace();
  return Covector{mu};
}

Eigen::Matrix2d sl2_matrix_from_covector(const Covector& mu) {
  if (mu.components.size() != 3) throw DomainError("sl(2) covector must have 3 components");
  // M = a H + b E + c F has tr(MH) = 2a, tr(ME) = c, tr(MF) = b.
  return sl2_matrix(Eigen::Vector3d(0.5 * mu.components[0], mu.components[2], mu.components[1]));
}

Sl2Type sl2_classify(const AlgebraSpec& alg, const Covector& mu) {
  if (alg.dimension() != 3 || alg.name() != "sl2") {
    throw DomainError("sl2_classify requires the built-in sl(2) algebra");
  }
  const Eigen::Matrix2d m = sl2_matrix_from_covector(mu);
  if (m.cwiseAbs().maxCoeff() == 0.0) return Sl2Type::Zero;
  const double det = m.determinant();
  if (std::abs(det) < 1e-12) return Sl2Type::Parabolic;
  return det > 0.0 ? Sl2Type::Elliptic : Sl2Type::Hyperbolic;
}

bool sl2_normalizes_unipotent(const Eigen::Matrix2d& n, double tol) {
  if (std::abs(n.determinant() - 1.0) > 1e-9) throw DomainError("element is not in SL(2)");
  const Eigen::Matrix2d ninv = n.inverse();
  for (double t : {-3.0, -0.5, 0.25, 1.0, 7.0}) {
    Eigen::Matrix2d u;
    u << 1.0, t, 0.0, 1.0;
    const Eigen::Matrix2d c = ninv * u * n;
    const bool unipotent_upper = std::abs(c(1, 0)) <= tol && std::abs(std::abs(c(0, 0)) - 1.0) <= tol &&
                                 std::abs(c(1, 1) - c(0, 0)) <= tol;
    if (!unipotent_upper) return false;
  }
  return true;
}

}  // namespace polite::lie
