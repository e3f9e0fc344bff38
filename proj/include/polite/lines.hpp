#pragma once

// Oriented lines in R^n as the quotient of the unit-speed level set of the
// free particle by its flow, and the induced SE(n) action.

#include <Eigen/Dense>
#include <json.hpp>
#include <vector>

namespace polite::lines {

/// Line {m + s u}; m is the foot point closest to the origin.
struct OrientedLine {
  Eigen::VectorXd u;
  Eigen::VectorXd m;

  int dimension() const { return static_cast<int>(u.size()); }
  /// max(| |u| - 1 |, |u . m|)
  double constraint_residual() const;
  double distance(const OrientedLine& other) const;

  nlohmann::json to_json() const;
  static OrientedLine from_json(const nlohmann::json& doc);
};

inline constexpr double kLevelSetTolerance = 1e-10;
inline constexpr double kOrthogonalityTolerance = 1e-10;

/// u = p, m = q - (q . u) u. Requires |p| = 1 to 1e-10.
OrientedLine reduce_line(const Eigen::VectorXd& q, const Eigen::VectorXd& p);

/// Image of the line under x -> A x + b. Requires A^T A = I to 1e-10.
OrientedLine act_se_n(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const OrientedLine& line);

struct StabilizerSample {
  double s = 0.0;
  Eigen::VectorXd translation;  ///< s u
  double residual = 0.0;        ///< distance between the moved line and the line
};

/// The translations (I, s u) for s on an unbounded grid, each checked to fix the line.
std::vector<StabilizerSample> stabilizer_witness(const OrientedLine& line,
                                                 const std::vector<double>& grid = {0.0, 1.0, 1e1,
                                                                                    1e2, 1e3, 1e4,
                                                                                    1e5, 1e6});

/// Rotation about the line's axis by `angle` in the plane spanned by the unit
/// vectors w1, w2 orthogonal to u; returned as (A, b) with b = m - A m.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> axis_rotation(const OrientedLine& line,
                                                          const Eigen::VectorXd& w1,
                                                          const Eigen::VectorXd& w2, double angle);

/// Numeric rank of the Jacobian of (q, p) -> (u, m) restricted to |p| = 1 at a point.
int quotient_chart_rank(const Eigen::VectorXd& q, const Eigen::VectorXd& p, double h = 1e-6);

}  // namespace polite::lines
