#pragma once

// Finite-dimensional real Lie algebras given by structure constants, and the
// algebra-level versions of isotropy, normalizer and quotient computations.

#include <Eigen/Dense>
#include <json.hpp>
#include <string>
#include <vector>

namespace polite::lie {

/// [e_i, e_j] = sum_k c(i, j, k) e_k.
class AlgebraSpec {
 public:
  AlgebraSpec() = default;
  AlgebraSpec(int dimension, std::vector<double> structure_constants,
              std::vector<std::string> labels, std::string name = {});

  int dimension() const noexcept { return dim_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  double c(int i, int j, int k) const { return c_[index(i, j, k)]; }

  Eigen::VectorXd bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  /// Matrix of ad_x in the basis: ad(x) * y = [x, y].
  Eigen::MatrixXd ad(const Eigen::VectorXd& x) const;
  Eigen::VectorXd basis_vector(int i) const;

  double antisymmetry_residual() const;
  double jacobi_residual() const;

  static AlgebraSpec from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
            static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(dim_) +
           static_cast<std::size_t>(k);
  }

  int dim_ = 0;
  std::vector<double> c_;
  std::vector<std::string> labels_;
  std::string name_;
};

/// Element of the dual space in the dual basis.
struct Covector {
  Eigen::VectorXd components;
};

/// Subalgebra spanned by the orthonormal columns of `basis`.
struct Subalgebra {
  AlgebraSpec parent;
  Eigen::MatrixXd basis;  ///< parent.dimension() x dim

  int dimension() const { return static_cast<int>(basis.cols()); }
  /// Orthogonal projector onto the span.
  Eigen::MatrixXd projector() const;
  /// Max distance of brackets of basis vectors from the span.
  double closure_residual() const;
  /// Every vector of `other` lies in this span to `tol`.
  bool contains(const Subalgebra& other, double tol = 1e-10) const;
  bool same_span(const Subalgebra& other, double tol = 1e-10) const;
};

/// Relative singular-value threshold for rank decisions.
inline constexpr double kRankTolerance = 1e-10;

/// Orthonormal basis of the null space of m (rank by relative singular value threshold).
Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double rel_tol = kRankTolerance);
int numeric_rank(const Eigen::MatrixXd& m, double rel_tol = kRankTolerance);

/// Orthonormal basis of span(columns) built by Gram-Schmidt on the projections
/// of the standard basis vectors, so coordinate subspaces come back as
/// coordinate vectors.
Eigen::MatrixXd canonical_basis(const Eigen::MatrixXd& columns, double tol = 1e-10);

Subalgebra span(const AlgebraSpec& alg, const Eigen::MatrixXd& columns);
Subalgebra whole(const AlgebraSpec& alg);

/// nu(eta) = -mu([xi, eta]).
Covector coadjoint_generator(const AlgebraSpec& alg, const Eigen::VectorXd& xi, const Covector& mu);
/// Column i is coadjoint_generator(e_i, mu).
Eigen::MatrixXd coadjoint_matrix(const AlgebraSpec& alg, const Covector& mu);
/// Matrix M with d mu / dt = M mu for the one-parameter subgroup of xi.
Eigen::MatrixXd coadjoint_flow_matrix(const AlgebraSpec& alg, const Eigen::VectorXd& xi);
/// exp(t M_xi) mu.
Covector coadjoint_flow(const AlgebraSpec& alg, const Eigen::VectorXd& xi, const Covector& mu,
                        double t);

Subalgebra isotropy_algebra(const AlgebraSpec& alg, const Covector& mu);
int orbit_dimension(const AlgebraSpec& alg, const Covector& mu);
/// {xi : [xi, h] subset h}.
Subalgebra normalizer_algebra(const AlgebraSpec& alg, const Subalgebra& h);
/// n / h in an orthonormal complement basis of h inside n. Throws unless h is an ideal of n.
AlgebraSpec quotient_algebra(const Subalgebra& n, const Subalgebra& h);

/// Dimensions of the derived series g, [g, g], [[g, g], [g, g]], ... until it stabilises.
std::vector<int> derived_series_dimensions(const AlgebraSpec& alg);
bool is_solvable(const AlgebraSpec& alg);
bool is_abelian(const AlgebraSpec& alg, double tol = 1e-12);

/// Basis X_1..X_n, Y with [Y, X_i] = X_i and [X_i, X_j] = 0.
AlgebraSpec make_class_S(int n);
/// Basis H, E, F with [H, E] = 2E, [H, F] = -2F, [E, F] = H.
AlgebraSpec make_sl2();

enum class Sl2Type { Elliptic, Hyperbolic, Parabolic, Zero };
std::string to_string(Sl2Type t);

/// Matrix of the sl(2) element with the given H, E, F coordinates.
Eigen::Matrix2d sl2_matrix(const Eigen::Vector3d& coords);
Eigen::Vector3d sl2_coordinates(const Eigen::Matrix2d& m);
/// Covector mu(xi) = tr(M xi) paired with a traceless matrix M.
Covector sl2_covector_from_matrix(const Eigen::Matrix2d& m);
Eigen::Matrix2d sl2_matrix_from_covector(const Covector& mu);
/// Sign of det of the trace-form representative.
Sl2Type sl2_classify(const AlgebraSpec& alg, const Covector& mu);

/// n^{-1} exp(tE) n stays in {+-exp(sE)} for the sampled t (group-level normalizer check).
bool sl2_normalizes_unipotent(const Eigen::Matrix2d& n, double tol = 1e-10);

}  // namespace polite::lie
