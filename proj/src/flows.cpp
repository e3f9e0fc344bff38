#include "polite/flows.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "polite/error.hpp"

namespace polite {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

State eval_dense(const std::array<State, 5>& r, double theta) {
  const double t1 = 1.0 - theta;
  return r[0] + theta * (r[1] + t1 * (r[2] + theta * (r[3] + t1 * r[4])));
}

bool is_crossing(double g0, double g1, int direction) {
  const bool up = g0 < 0.0 && g1 >= 0.0;
  const bool down = g0 > 0.0 && g1 <= 0.0;
  if (direction > 0) return up;
  if (direction < 0) return down;
  return up || down;
}

// Root of g(theta) on [0, 1] with g(0), g(1) of opposite sign (or g(1) == 0):
// Illinois-modified regula falsi with a bisection fallback.
double locate_root(const std::function<double(double)>& g, double g0, double g1) {
  double lo = 0.0, hi = 1.0;
  double glo = g0, ghi = g1;
  if (ghi == 0.0) return 1.0;
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    double mid = (lo * ghi - hi * glo) / (ghi - glo);
    if (!(mid > lo && mid < hi) || it % 4 == 3) {
      mid = 0.5 * (lo + hi);
    }
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
      if (side == -1) ghi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      ghi = gm;
      if (side == 1) glo *= 0.5;
      side = 1;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon()) break;
  }
  return std::abs(glo) < std::abs(ghi) ? lo : hi;
}

double error_norm(const State& err, const State& y0, const State& y1, double tol) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = tol + tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(err.size()));
}

double initial_step(const VectorField& f, const State& x0, const State& f0, double tol) {
  const double d0 = x0.norm() / std::sqrt(static_cast<double>(x0.size()));
  const double d1n = f0.norm() / std::sqrt(static_cast<double>(x0.size()));
  double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * (d0 + tol) / d1n;
  const State x1 = x0 + h0 * f0;
  const double d2 = (f(x1) - f0).norm() / std::sqrt(static_cast<double>(x0.size())) / h0;
  const double dm = std::max(d1n, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  return std::min(100.0 * h0, h1);
}

}  // namespace

State Trajectory::at(double t) const {
  if (times.empty()) throw DomainError("empty trajectory");
  if (t <= times.front()) return states.front();
  if (t >= times.back()) return states.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times.begin()) - 1;
  if (dense.size() <= i) {
    // linear fallback when only states were kept
    const double th = (t - times[i]) / (times[i + 1] - times[i]);
    return (1.0 - th) * states[i] + th * states[i + 1];
  }
  return eval_dense(dense[i].coeff, (t - times[i]) / dense[i].step);
}

Trajectory integrate(const VectorField& f, const State& x0, double t_final,
                     const IntegratorOptions& opt, const EventSpec* event,
                     const CrossingCallback& on_crossing) {
  if (!(opt.tol > 0.0)) throw DomainError("integration tolerance must be positive");
  if (!(t_final >= 0.0)) throw DomainError("integrate runs forward in time; use flow_map");
  Trajectory traj;
  traj.tolerance = opt.tol;
  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  if (t_final == 0.0) return traj;

  State y = x0;
  State k1 = f(y);
  double t = 0.0;
  double h = opt.initial_step > 0.0 ? opt.initial_step : initial_step(f, y, k1, opt.tol);
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  double g_prev = event ? event->event_function(y) : 0.0;
  const double h_min_factor = 16.0 * std::numeric_limits<double>::epsilon();

  for (std::size_t n = 0; n < opt.max_steps; ++n) {
    if (t + h > t_final) h = t_final - t;
    if (h <= h_min_factor * std::max(1.0, std::abs(t))) {
      throw IntegrationError("step size underflow at t = " + std::to_string(t), t);
    }
    const State k2 = f(y + h * (a21 * k1));
    const State k3 = f(y + h * (a31 * k1 + a32 * k2));
    const State k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const State k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const State k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const State y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const State k7 = f(y_new);
    if (!y_new.allFinite()) {
      h *= 0.25;
      continue;
    }
    const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = error_norm(err, y, y_new, opt.tol);
    if (en > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      continue;
    }

    std::array<State, 5> r;
    r[0] = y;
    r[1] = y_new - y;
    r[2] = h * k1 - r[1];
    r[3] = r[1] - h * k7 - r[2];
    r[4] = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

    const double t_new = t + h;
    if (event) {
      const double g_new = event->event_function(y_new);
      if (is_crossing(g_prev, g_new, event->direction)) {
        const auto g_theta = [&](double theta) {
          return event->event_function(eval_dense(r, theta));
        };
        const double theta = locate_root(g_theta, g_prev, g_new);
        Crossing c{t + theta * h, eval_dense(r, theta)};
        if (c.time > opt.min_event_time) {
          const bool user_stop = on_crossing ? on_crossing(c) : false;
          if (event->terminal || user_stop) {
            // Truncate the step at the crossing; the interpolant keeps its full step length.
            if (opt.store) {
              traj.times.push_back(c.time);
              traj.states.push_back(c.state);
              traj.dense.push_back({std::move(r), h});
            } else {
              traj.times.back() = c.time;
              traj.states.back() = c.state;
            }
            return traj;
          }
        }
      }
      g_prev = g_new;
    }
    if (opt.store) {
      traj.times.push_back(t_new);
      traj.states.push_back(y_new);
      traj.dense.push_back({std::move(r), h});
    } else {
      traj.times.back() = t_new;
      traj.states.back() = y_new;
    }
    t = t_new;
    y = y_new;
    k1 = k7;
    if (t >= t_final) return traj;
    double fac = en == 0.0 ? 5.0 : 0.9 * std::pow(en, -0.2);
    h *= std::clamp(fac, 0.2, 5.0);
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  }
  throw IntegrationError("maximum step count exceeded", t);
}

double span_tolerance(double tol, double span) {
  if (!(tol > 0.0)) throw DomainError("integration tolerance must be positive");
  return std::max(tol / std::max(1.0, std::abs(span)), std::min(tol, 1e-14));
}

Trajectory integrate(const SystemSpec& system, const PhasePoint& x0, double t_final, double tol) {
  if (x0.size() != system.dimension) throw DomainError("state dimension mismatch");
  IntegratorOptions opt;
  opt.tol = span_tolerance(tol, t_final);
  Trajectory traj = integrate(system.vector_field, x0, t_final, opt);
  traj.tolerance = tol;
  return traj;
}

State flow_map(const SystemSpec& system, const State& x0, double t, double tol) {
  IntegratorOptions opt;
  opt.tol = span_tolerance(tol, t);
  opt.store = false;
  if (t >= 0.0) return integrate(system.vector_field, x0, t, opt).states.back();
  const VectorField& f = system.vector_field;
  const VectorField back = [&f](const State& x) -> State { return -f(x); };
  return integrate(back, x0, -t, opt).states.back();
}

Crossing first_return(const SystemSpec& system, const PhasePoint& x0, const EventSpec& event,
                      double tol, double horizon) {
  if (x0.size() != system.dimension) throw DomainError("state dimension mismatch");
  IntegratorOptions opt;
  opt.tol = tol;
  opt.store = false;
  std::optional<Crossing> hit;
  EventSpec ev = event;
  ev.terminal = true;
  integrate(system.vector_field, x0, horizon, opt, &ev, [&hit](const Crossing& c) {
    hit = c;
    return true;
  });
  if (!hit) {
    throw NoCrossingError("no crossing of the event surface before t = " + std::to_string(horizon));
  }
  return *hit;
}

SystemSpec rescaled_field(const SystemSpec& system, const ScalarFunction& period_fn,
                          std::span<const State> probes, double tol) {
  for (const State& x : probes) {
    const double tau = period_fn(x);
    if (!(tau > 0.0) || !std::isfinite(tau)) {
      throw DomainError("period function must be positive, got " + std::to_string(tau));
    }
    for (double s : {0.37, 1.0}) {
      const State y = flow_map(system, x, s, tol);
      const double tau_y = period_fn(y);
      if (std::abs(tau_y - tau) > 1e-6 * tau) {
        throw DomainError("period function is not constant along orbits");
      }
    }
  }
  SystemSpec out = system;
  out.name = system.name + "/rescaled";
  out.hamiltonian.reset();
  out.symmetry.reset();
  const VectorField f = system.vector_field;
  out.vector_field = [f, period_fn](const State& x) -> State { return period_fn(x) * f(x); };
  return out;
}

SystemSpec time_reversed(const SystemSpec& system) {
  SystemSpec out = system;
  out.name = system.name + "/reversed";
  const VectorField f = system.vector_field;
  out.vector_field = [f](const State& x) -> State { return -f(x); };
  if (system.hamiltonian) {
    const ScalarFunction h = *system.hamiltonian;
    out.hamiltonian = [h](const State& x) { return -h(x); };
  }
  out.symmetry.reset();
  return out;
}

double max_conserved_drift(const SystemSpec& system, const Trajectory& traj) {
  double drift = 0.0;
  for (const auto& c : system.conserved) {
    const double c0 = c.fn(traj.states.front());
    for (const State& x : traj.states) drift = std::max(drift, std::abs(c.fn(x) - c0));
  }
  return drift;
}

Trajectory verlet(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& force,
                  const PhasePoint& x0, double t_final, double step) {
  if (!(step > 0.0)) throw DomainError("Verlet step must be positive");
  const Eigen::Index n = x0.size() / 2;
  Eigen::VectorXd q = x0.head(n);
  Eigen::VectorXd p = x0.tail(n);
  Trajectory traj;
  traj.tolerance = step * step;
  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  const auto steps = static_cast<long>(std::ceil(t_final / step - 1e-12));
  const double h = steps > 0 ? t_final / static_cast<double>(steps) : 0.0;
  Eigen::VectorXd fq = force(q);
  for (long i = 0; i < steps; ++i) {
    p += 0.5 * h * fq;
    q += h * p;
    fq = force(q);
    p += 0.5 * h * fq;
    State x(2 * n);
    x << q, p;
    traj.times.push_back(static_cast<double>(i + 1) * h);
    traj.states.push_back(std::move(x));
  }
  return traj;
}

void write_csv(const Trajectory& traj, std::ostream& out) {
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  out << "t";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",x" << i;
  out << '\n';
  char buf[64];
  for (std::size_t r = 0; r < traj.times.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%.17g", traj.times[r]);
    out << buf;
    for (Eigen::Index i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", traj.states[r][i]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace polite
