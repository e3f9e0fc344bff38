#pragma once

// Catalogue of the dynamical systems used throughout the toolkit.
//
// States are flat coordinate vectors. Hamiltonian systems order coordinates
// as (q_1..q_n, p_1..p_n), so the canonical field is qdot = dh/dp,
// pdot = -dh/dq.

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace polite {

using State = Eigen::VectorXd;
using PhasePoint = State;
using VectorField = std::function<State(const State&)>;
using ScalarFunction = std::function<double(const State&)>;

struct ConservedQuantity {
  std::string name;
  ScalarFunction fn;
};

/// A Lie group action G x P -> P in local parameters; params = 0 is the identity.
struct GroupActionSpec {
  std::string name;
  int group_dimension = 0;
  std::function<State(const Eigen::VectorXd& params, const State& x)> act;
  std::vector<VectorField> generators;
  /// Set for circle groups R / period Z acting through a single parameter.
  std::optional<double> period;

  State operator()(const Eigen::VectorXd& params, const State& x) const { return act(params, x); }
  State operator()(double param, const State& x) const {
    return act(Eigen::VectorXd::Constant(1, param), x);
  }
};

struct SystemSpec {
  std::string name;
  int dimension = 0;
  VectorField vector_field;
  std::optional<ScalarFunction> hamiltonian;
  std::vector<ConservedQuantity> conserved;
  std::optional<GroupActionSpec> symmetry;
  /// Coordinates identified modulo 2 pi (torus); empty means flat.
  std::vector<bool> periodic;

  State field(const State& x) const { return vector_field(x); }
  bool is_hamiltonian() const { return hamiltonian.has_value(); }
  /// Canonical representative (componentwise reduction to [0, 2 pi) on periodic axes).
  State wrap(const State& x) const;
  /// b - a, taken as the shortest representative on periodic axes.
  State displacement(const State& a, const State& b) const;
  double distance(const State& a, const State& b) const { return displacement(a, b).norm(); }
};

using Rng = std::mt19937_64;

/// Reduce an angle to [0, 2 pi).
double wrap_angle(double a);
/// Reduce an angle difference to (-pi, pi].
double wrap_difference(double a);

SystemSpec make_harmonic();
SystemSpec make_stiff_spring(double eps);
SystemSpec make_champagne();

enum class FieldDomain { Plane, Torus };
SystemSpec make_torus_field(FieldDomain domain);
SystemSpec make_free_particle(int n);
/// SO(2) acting by rotations of the plane; the field is the rotation generator.
SystemSpec make_planar_rotation();

/// Look up a system by CLI name: harmonic, stiff:EPS, champagne, torus,
/// plane-field, free:N, rotation.
SystemSpec make_system(const std::string& name);

/// Closed-form flow of xdot = sin x, ydot = cos x (unwrapped coordinates).
State torus_field_flow(const State& x0, double t);

/// Rotation matrix of the harmonic flow, [[cos t, sin t], [-sin t, cos t]].
Eigen::Matrix2d harmonic_flow_matrix(double t);

/// Period of the stiff-spring orbit through x: the amplitude A solves
/// A^2/2 + eps A^4/4 = h(x) and the period is duffing_period(eps A^2).
double stiff_spring_period(double eps, const State& x);
double stiff_spring_amplitude(double eps, const State& x);

/// Champagne-bottle angular momentum q1 p2 - q2 p1.
double champagne_momentum(const State& x);
double champagne_energy(const State& x);

/// Rigid motion (A, b) acting on T*R^n as (q, p) -> (A q + b, A p).
State se_act(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const State& x);
/// Orthogonal matrix exp(Omega) from skew coordinates (pairs i<j in lexicographic order).
Eigen::MatrixXd rotation_from_skew(const Eigen::VectorXd& omega, int n);

/// Directional derivative of f along the field at x, central differences.
double lie_derivative(const ScalarFunction& f, const VectorField& field, const State& x,
                      double h = 1e-6);
/// Canonical field J grad h by central differences.
State canonical_field(const ScalarFunction& h, const State& x, double step = 1e-6);

struct ConsistencyReport {
  double conserved_residual = 0.0;    ///< max |X(c)| over samples and conserved quantities
  double hamiltonian_residual = 0.0;  ///< max |X - J grad h|
  double equivariance_residual = 0.0; ///< max |D act_g X(x) - X(act_g x)|
  double generator_residual = 0.0;    ///< max |d/ds act(s e_i) - generator_i|
  double identity_residual = 0.0;     ///< max |act(0, x) - x|
};

/// Sample states from a box of half-width `radius` and check the catalogue invariants.
ConsistencyReport check_consistency(const SystemSpec& system, Rng& rng, int samples,
                                    double radius = 1.0);

State random_state(int dim, double radius, Rng& rng);

}  // namespace polite
