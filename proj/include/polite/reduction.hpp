#pragma once

// Reduction of SO(2)-symmetric systems through invariant (Hilbert-map)
// coordinates: projection, the reduced equation, reconstruction of the group
// phase, period-lattice monodromy of the champagne bottle, and the torus
// example where invariant smooth functions fail to separate circle classes.

#include <Eigen/Dense>
#include <functional>
#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "polite/flows.hpp"
#include "polite/systems.hpp"

namespace polite::reduction {

using InvariantState = Eigen::VectorXd;

struct Invariant {
  std::string name;
  ScalarFunction fn;
};

struct ReductionChart {
  std::string system;
  std::vector<Invariant> invariants;
  /// Vanishes on the image of the projection.
  std::function<double(const InvariantState&)> relation;
  std::function<InvariantState(const InvariantState&)> reduced_field;
  /// Angular rate theta-dot of the group phase along a reduced trajectory.
  std::function<double(const InvariantState&)> reconstruction_rate;
  /// A point of the fiber over s (phase zero).
  std::function<State(const InvariantState&)> section;
  /// Group element with phase theta applied to x.
  std::function<State(double theta, const State&)> act;
  /// Phase of x relative to section(project(x)).
  std::function<double(const State&)> phase;
  /// Distance to the breakdown of the section and phase rate; unset when the
  /// chart covers the whole reduced space.
  std::function<double(const InvariantState&)> chart_margin;
  /// Indices of invariants constrained to be nonnegative.
  std::vector<int> nonnegative;
  /// Relation and positivity residual admitted by reduced_field.
  double admissible_tolerance = 1e-8;
};

/// sigma1 = |q|^2, sigma2 = |p|^2, sigma3 = q.p, j = q1 p2 - q2 p1.
ReductionChart champagne_chart();
/// Reduction of the oscillator by its own 2 pi periodic flow; one invariant q^2 + p^2.
ReductionChart harmonic_chart();

InvariantState project(const ReductionChart& chart, const State& x);
/// Largest of |relation| and the negative parts of the sign-constrained invariants.
double admissibility_residual(const ReductionChart& chart, const InvariantState& s);
InvariantState reduced_field(const ReductionChart& chart, const InvariantState& s);

struct ReducedTrajectory {
  std::vector<double> times;
  std::vector<InvariantState> invariant_states;
  double j_value = 0.0;
  Trajectory dense;

  InvariantState at(double t) const { return dense.at(t); }
};

ReducedTrajectory integrate_reduced(const ReductionChart& chart, const InvariantState& s0,
                                    double t_final, double tol = 1e-12);

/// Largest |relation| along the accepted steps.
double max_relation_residual(const ReductionChart& chart, const ReducedTrajectory& traj);

inline constexpr double kChartBreakdown = 1e-10;

/// Full trajectory over the reduced one starting at x0. Output times default
/// to the reduced step times. Throws if the reduced trajectory comes within
/// kChartBreakdown of the chart boundary before the last output time.
Trajectory reconstruct(const ReductionChart& chart, const ReducedTrajectory& reduced,
                       const State& x0, const std::vector<double>& times = {});

/// Phase theta(t) - theta(0) at the given times.
std::vector<double> reconstructed_phase(const ReductionChart& chart,
                                        const ReducedTrajectory& reduced,
                                        const std::vector<double>& times);

/// Relative equilibrium of the champagne reduced field with momentum j
/// (sigma3 = 0, sigma2 = (4 sigma1 - 2) sigma1, sigma1 sigma2 = j^2).
InvariantState champagne_reduced_equilibrium(double j);

/// Effective potential j^2 / (2u) + u^2 - u in u = |q|^2.
double champagne_effective_potential(double u, double j);

struct FiberData {
  double h = 0.0;
  double j = 0.0;
  double period = 0.0;    ///< radial first-return time
  double rotation = 0.0;  ///< rotation angle of that return, in (-pi, pi]
  /// Columns (0, 2 pi) and (T, -Theta): recurrence times of the (h, j) flows.
  Eigen::Matrix2d lattice;
};

/// Period lattice of the regular fiber over (h, j).
FiberData champagne_fiber(double h, double j, double tol = 1e-11);

struct MonodromyResult {
  std::vector<std::pair<double, double>> loop;  ///< refined loop actually used
  Eigen::Matrix2i matrix;
  /// Transported basis in the initial basis, recomputed at the closing point.
  Eigen::Matrix2d unrounded;
  std::vector<double> residuals;  ///< snap distance at each continuation step
  double max_residual = 0.0;
  /// max |unrounded - matrix|
  double closure_residual = 0.0;

  nlohmann::json to_json() const;
};

/// Continue a period-lattice basis around a closed loop of (h, j) values (the
/// first point is revisited at the end) and return the integer matrix of the
/// transported basis in the initial basis.
MonodromyResult monodromy(const std::vector<std::pair<double, double>>& hj_loop,
                          double tol = 1e-11, int max_refinements = 12);

/// Elliptical loop (h0 + dh cos a, j0 + dj sin a) with `points` samples.
std::vector<std::pair<double, double>> elliptic_loop(double h0, double j0, double dh, double dj,
                                                     int points = 16, bool reverse = false);

struct TorusGapReport {
  State start;
  double forward_distance = 0.0;   ///< distance to the circle x = pi at t = horizon
  double backward_distance = 0.0;  ///< distance to the circle x = 0 at t = -horizon
  double horizon = 12.0;
  double closed_form_error = 0.0;  ///< numeric flow vs closed form, sup over samples
  double gap_on_zero_circle = 0.0;
  double gap_on_pi_circle = 1.0;
  bool gap_locally_constant = false;
  /// A continuous invariant function must agree on both limit circles.
  double forced_difference = 0.0;
  bool equal_values_extend = false;
  bool obstruction_exhibited = false;

  nlohmann::json to_json() const;
};

TorusGapReport torus_function_gap_demo(const State& start, double horizon = 12.0);
TorusGapReport torus_function_gap_demo();

}  // namespace polite::reduction
