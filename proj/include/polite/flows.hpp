#pragma once

// Adaptive Dormand-Prince 5(4) integration with dense output and event
// location, plus a fixed-step Stormer-Verlet scheme for drift cross-checks.

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "polite/systems.hpp"

namespace polite {

/// Accepted steps of an integral curve with the Dormand-Prince dense interpolant.
class Trajectory {
 public:
  std::vector<double> times;
  std::vector<State> states;
  double tolerance = 0.0;

  /// Dense-output polynomial of the accepted step starting at times[i]. A step
  /// cut short at a terminal event keeps its original length.
  struct Segment {
    std::array<State, 5> coeff;
    double step = 0.0;
  };
  std::vector<Segment> dense;

  double t_begin() const { return times.front(); }
  double t_end() const { return times.back(); }
  std::size_t size() const { return times.size(); }
  /// Interpolated state; t must lie in [t_begin, t_end].
  State at(double t) const;
};

struct EventSpec {
  ScalarFunction event_function;
  int direction = 0;  ///< +1: increasing crossings only, -1: decreasing, 0: both
  bool terminal = true;
};

struct Crossing {
  double time = 0.0;
  State state;
};

struct IntegratorOptions {
  double tol = 1e-10;
  double max_step = 0.0;  ///< 0 means unbounded
  double initial_step = 0.0;
  std::size_t max_steps = 5'000'000;
  bool store = true;  ///< keep accepted states and dense output
  /// Crossings at t <= min_event_time are ignored.
  double min_event_time = 1e-9;
};

/// Event callback: return true to stop integration.
using CrossingCallback = std::function<bool(const Crossing&)>;

/// Integrate xdot = f(x) from t = 0 to t_final >= 0.
Trajectory integrate(const VectorField& field, const State& x0, double t_final,
                     const IntegratorOptions& options, const EventSpec* event = nullptr,
                     const CrossingCallback& on_crossing = nullptr);

/// Local tolerance used for a requested global tolerance over a time span:
/// tol / max(1, span), floored at 1e-14. With it the conserved-quantity drift
/// over the whole span stays within a few multiples of tol.
double span_tolerance(double tol, double span);

/// Integrate a catalogued system; `tol` is the global tolerance (see span_tolerance).
Trajectory integrate(const SystemSpec& system, const PhasePoint& x0, double t_final, double tol);

/// Flow map phi_t(x) for either sign of t, with global tolerance tol.
State flow_map(const SystemSpec& system, const State& x0, double t, double tol = 1e-12);

/// First crossing of the event surface at t > 0 in the requested direction.
Crossing first_return(const SystemSpec& system, const PhasePoint& x0, const EventSpec& event,
                      double tol, double horizon = 1e4);

/// The field tau(x) X(x). Each probe point must have positive period that is
/// constant along a short stretch of its orbit.
SystemSpec rescaled_field(const SystemSpec& system, const ScalarFunction& period_fn,
                          std::span<const State> probes, double tol = 1e-10);

/// The same system with the vector field reversed.
SystemSpec time_reversed(const SystemSpec& system);

/// Largest absolute deviation of each conserved quantity from its initial value.
double max_conserved_drift(const SystemSpec& system, const Trajectory& traj);

/// Fixed-step leapfrog for H = |p|^2/2 + V(q); `force` returns -grad V.
Trajectory verlet(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& force,
                  const PhasePoint& x0, double t_final, double step);

/// Header `t,x1,...,xn`, one row per accepted step, 17 significant digits.
void write_csv(const Trajectory& traj, std::ostream& out);

}  // namespace polite
