#include "polite/reduction.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>

#include "polite/error.hpp"

namespace polite::reduction {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

State rotate_q_p(double theta, const State& x) {
  const double c = std::cos(theta), s = std::sin(theta);
  State y(4);
  y << c * x[0] - s * x[1], s * x[0] + c * x[1], c * x[2] - s * x[3], s * x[2] + c * x[3];
  return y;
}

double gauss_integral(const std::function<double(double)>& f, double a, double b) {
  if (b == a) return 0.0;
  return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> json_vector(const State& x) { return {x.data(), x.data() + x.size()}; }

}  // namespace

ReductionChart champagne_chart() {
  ReductionChart c;
  c.system = "champagne";
  c.invariants = {
      {"sigma1", [](const State& x) { return x[0] * x[0] + x[1] * x[1]; }},
      {"sigma2", [](const State& x) { return x[2] * x[2] + x[3] * x[3]; }},
      {"sigma3", [](const State& x) { return x[0] * x[2] + x[1] * x[3]; }},
      {"j", [](const State& x) { return x[0] * x[3] - x[1] * x[2]; }},
  };
  c.nonnegative = {0, 1};
  c.relation = [](const InvariantState& s) { return s[0] * s[1] - s[2] * s[2] - s[3] * s[3]; };
  c.reduced_field = [](const InvariantState& s) {
    const double k = 4.0 * s[0] - 2.0;
    InvariantState v(4);
    v << 2.0 * s[2], -2.0 * k * s[2], s[1] - k * s[0], 0.0;
    return v;
  };
  c.reconstruction_rate = [](const InvariantState& s) {
    if (!(s[0] > kChartBreakdown)) {
      throw DomainError("reconstruction chart breaks down at |q| = 0");
    }
    return s[3] / s[0];
  };
  c.section = [](const InvariantState& s) {
    const double r = std::sqrt(std::max(s[0], 0.0));
    if (!(r > 0.0)) throw DomainError("no section point over |q| = 0");
    State x(4);
    x << r, 0.0, s[2] / r, s[3] / r;
    return x;
  };
  c.chart_margin = [](const InvariantState& s) { return s[0]; };
  c.act = rotate_q_p;
  c.phase = [](const State& x) { return std::atan2(x[1], x[0]); };
  return c;
}

ReductionChart harmonic_chart() {
  ReductionChart c;
  c.system = "harmonic";
  c.invariants = {{"r2", [](const State& x) { return x[0] * x[0] + x[1] * x[1]; }}};
  c.nonnegative = {0};
  c.relation = [](const InvariantState&) { return 0.0; };
  c.reduced_field = [](const InvariantState&) { return InvariantState(InvariantState::Zero(1)); };
  c.reconstruction_rate = [](const InvariantState&) { return 1.0; };
  c.section = [](const InvariantState& s) {
    State x(2);
    x << std::sqrt(std::max(s[0], 0.0)), 0.0;
    return x;
  };
  c.act = [](double theta, const State& x) -> State { return harmonic_flow_matrix(theta) * x; };
  c.phase = [](const State& x) { return std::atan2(-x[1], x[0]); };
  return c;
}

InvariantState project(const ReductionChart& chart, const State& x) {
  InvariantState s(static_cast<Eigen::Index>(chart.invariants.size()));
  for (std::size_t i = 0; i < chart.invariants.size(); ++i) s[i] = chart.invariants[i].fn(x);
  return s;
}

double admissibility_residual(const ReductionChart& chart, const InvariantState& s) {
  double r = std::abs(chart.relation(s));
  for (int i : chart.nonnegative) r = std::max(r, -s[i]);
  return r;
}

InvariantState reduced_field(const ReductionChart& chart, const InvariantState& s) {
  if (s.size() != static_cast<Eigen::Index>(chart.invariants.size())) {
    throw DomainError("invariant state has the wrong dimension");
  }
  const double r = admissibility_residual(chart, s);
  if (!(r <= chart.admissible_tolerance)) {
    throw DomainError("invariant state violates the relation (residual " + std::to_string(r) + ")");
  }
  return chart.reduced_field(s);
}

ReducedTrajectory integrate_reduced(const ReductionChart& chart, const InvariantState& s0,
                                    double t_final, double tol) {
  reduced_field(chart, s0);
  IntegratorOptions opt;
  opt.tol = tol;
  ReducedTrajectory out;
  out.dense = integrate(chart.reduced_field, s0, t_final, opt);
  out.times = out.dense.times;
  out.invariant_states = out.dense.states;
  out.j_value = chart.system == "champagne" ? s0[3] : 0.0;
  return out;
}

double max_relation_residual(const ReductionChart& chart, const ReducedTrajectory& traj) {
  double r = 0.0;
  for (const auto& s : traj.invariant_states) r = std::max(r, std::abs(chart.relation(s)));
  return r;
}

std::vector<double> reconstructed_phase(const ReductionChart& chart,
                                        const ReducedTrajectory& reduced,
                                        const std::vector<double>& times) {
  const auto& ts = reduced.times;
  const auto rate = [&](double t) { return chart.reconstruction_rate(reduced.at(t)); };
  std::vector<double> cumulative(ts.size(), 0.0);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + gauss_integral(rate, ts[i - 1], ts[i]);
  }
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    if (t < ts.front() || t > ts.back()) throw DomainError("time outside the reduced trajectory");
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t i = it == ts.begin() ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
    out.push_back(cumulative[i] + gauss_integral(rate, ts[i], t));
  }
  return out;
}

Trajectory reconstruct(const ReductionChart& chart, const ReducedTrajectory& reduced,
                       const State& x0, const std::vector<double>& times) {
  const InvariantState s0 = project(chart, x0);
  const double mismatch = (s0 - reduced.invariant_states.front()).cwiseAbs().maxCoeff();
  if (!(mismatch <= 1e-8)) throw DomainError("x0 does not lie over the reduced initial state");
  const std::vector<double>& ts = times.empty() ? reduced.times : times;
  if (chart.chart_margin) {
    const double t_last = *std::max_element(ts.begin(), ts.end());
    const auto margin = [&](double t) { return chart.chart_margin(reduced.at(t)); };
    for (std::size_t i = 1; i < reduced.times.size() && reduced.times[i - 1] < t_last; ++i) {
      const double b = std::min(reduced.times[i], t_last);
      const auto [tm, m] = boost::math::tools::brent_find_minima(margin, reduced.times[i - 1], b, 40);
      if (!(std::min({m, margin(reduced.times[i - 1]), margin(b)}) > kChartBreakdown)) {
        throw DomainError("reduced trajectory reaches the chart boundary near t = " + std::to_string(tm));
      }
    }
  }
  const std::vector<double> theta = reconstructed_phase(chart, reduced, ts);
  // Offset so that the reconstruction passes through x0 exactly.
  const double theta0 = chart.phase(x0);
  Trajectory out;
  out.tolerance = reduced.dense.tolerance;
  out.times = ts;
  out.states.reserve(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out.states.push_back(chart.act(theta0 + theta[i], chart.section(reduced.at(ts[i]))));
  }
  return out;
}

double champagne_effective_potential(double u, double j) {
  return j * j / (2.0 * u) + u * u - u;
}

InvariantState champagne_reduced_equilibrium(double j) {
  const double j2 = j * j;
  const auto f = [j2](double s1) { return (4.0 * s1 - 2.0) * s1 * s1 - j2; };
  double hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  const double s1 = bisect(f, 0.5, hi);
  InvariantState s(4);
  s << s1, (4.0 * s1 - 2.0) * s1, 0.0, j;
  return s;
}

FiberData champagne_fiber(double h, double j, double tol) {
  if (std::abs(h) < 1e-9 && std::abs(j) < 1e-9) {
    throw DomainError("(h, j) = (0, 0) is the critical value");
  }
  double u_min = 0.5;
  if (j != 0.0) {
    const auto g = [j](double u) { return 2.0 * u - 1.0 - j * j / (2.0 * u * u); };
    double hi = 1.0;
    while (g(hi) < 0.0) hi *= 2.0;
    u_min = bisect(g, 1e-300, hi);
  }
  const double v_min = champagne_effective_potential(u_min, j);
  if (!(h > v_min + 1e-12)) {
    throw DomainError("the fiber over (h, j) is empty or critical");
  }
  const auto f = [h, j](double u) { return champagne_effective_potential(u, j) - h; };
  double hi = std::max(2.0 * u_min, 1.0);
  while (f(hi) < 0.0) hi *= 2.0;
  const double u = bisect(f, u_min, hi);
  const double r = std::sqrt(u);
  State x0(4);
  x0 << r, 0.0, 0.0, j / r;

  EventSpec ev;
  ev.direction = -1;
  ev.event_function = [](const State& x) { return x[0] * x[2] + x[1] * x[3]; };
  const SystemSpec sys = make_champagne();
  const Crossing c = first_return(sys, x0, ev, tol, 1e4);

  FiberData fd;
  fd.h = h;
  fd.j = j;
  fd.period = c.time;
  fd.rotation = std::atan2(c.state[1], c.state[0]);
  fd.lattice << 0.0, fd.period, kTwoPi, -fd.rotation;
  return fd;
}

std::vector<std::pair<double, double>> elliptic_loop(double h0, double j0, double dh, double dj,
                                                     int points, bool reverse) {
  if (points < 3) throw DomainError("a loop needs at least 3 points");
  std::vector<std::pair<double, double>> loop;
  for (int k = 0; k < points; ++k) {
    // Half-step offset keeps samples off the axis j = j0.
    double a = kTwoPi * (k + 0.5) / points;
    if (reverse) a = -a;
    loop.emplace_back(h0 + dh * std::cos(a), j0 + dj * std::sin(a));
  }
  return loop;
}

MonodromyResult monodromy(const std::vector<std::pair<double, double>>& hj_loop, double tol,
                          int max_refinements) {
  if (hj_loop.size() < 3) throw DomainError("a loop needs at least 3 points");
  MonodromyResult res;
  std::vector<std::pair<double, double>> pending(hj_loop.begin(), hj_loop.end());
  pending.push_back(hj_loop.front());

  const auto fiber = [tol](const std::pair<double, double>& p) {
    return champagne_fiber(p.first, p.second, tol);
  };

  Eigen::Matrix2i n = Eigen::Matrix2i::Identity();
  FiberData current = fiber(pending.front());
  const Eigen::Matrix2d initial = current.lattice;
  res.loop.push_back(pending.front());
  std::size_t next = 1;
  // Points inserted between current and pending[next]; depth tracks refinement.
  std::vector<std::pair<std::pair<double, double>, int>> stack;
  int depth = 0;
  while (next < pending.size() || !stack.empty()) {
    std::pair<double, double> target;
    if (!stack.empty()) {
      target = stack.back().first;
      depth = stack.back().second;
    } else {
      target = pending[next];
      depth = 0;
    }
    const FiberData cand = fiber(target);
    const Eigen::Matrix2d m = cand.lattice.inverse() * current.lattice * n.cast<double>();
    const Eigen::Matrix2d rounded = m.array().round().matrix();
    const double snap = (m - rounded).cwiseAbs().maxCoeff();
    if (snap > 0.25) {
      if (depth >= max_refinements) {
        throw ContinuationError("period-lattice continuation failed near (h, j) = (" +
                                std::to_string(target.first) + ", " +
                                std::to_string(target.second) + ")");
      }
      // Split off-centre so symmetric endpoints never produce j = 0 exactly.
      const auto& from = res.loop.back();
      const double w = 0.4;
      std::pair<double, double> mid{from.first + w * (target.first - from.first),
                                    from.second + w * (target.second - from.second)};
      stack.emplace_back(mid, depth + 1);
      continue;
    }
    n = rounded.cast<int>();
    res.residuals.push_back(snap);
    res.max_residual = std::max(res.max_residual, snap);
    res.loop.push_back(target);
    current = cand;
    if (!stack.empty()) {
      stack.pop_back();
    } else {
      ++next;
    }
  }
  res.matrix = n;
  res.unrounded = initial.inverse() * current.lattice * n.cast<double>();
  res.closure_residual = (res.unrounded - n.cast<double>()).cwiseAbs().maxCoeff();
  return res;
}

nlohmann::json MonodromyResult::to_json() const {
  nlohmann::json loop_json = nlohmann::json::array();
  for (const auto& [h, j] : loop) loop_json.push_back({h, j});
  return {{"loop", loop_json},
          {"matrix", {{matrix(0, 0), matrix(0, 1)}, {matrix(1, 0), matrix(1, 1)}}},
          {"residuals", residuals},
          {"unrounded", {{unrounded(0, 0), unrounded(0, 1)}, {unrounded(1, 0), unrounded(1, 1)}}},
          {"max_residual", max_residual},
          {"closure_residual", closure_residual}};
}

TorusGapReport torus_function_gap_demo(const State& start, double horizon) {
  TorusGapReport rep;
  rep.start = start;
  rep.horizon = horizon;
  const SystemSpec torus = make_torus_field(FieldDomain::Torus);
  const auto circle_gap = [](const State& x, double centre) {
    return std::abs(wrap_difference(x[0] - centre));
  };

  const State fwd = torus.wrap(flow_map(torus, start, horizon, 1e-13));
  const State bwd = torus.wrap(flow_map(torus, start, -horizon, 1e-13));
  rep.forward_distance = circle_gap(fwd, kPi);
  rep.backward_distance = circle_gap(bwd, 0.0);

  for (int k = -24; k <= 24; ++k) {
    const double t = horizon * k / 24.0;
    const State num = torus.wrap(flow_map(torus, start, t, 1e-13));
    const State exact = torus.wrap(torus_field_flow(start, t));
    rep.closed_form_error = std::max(rep.closed_form_error, torus.distance(num, exact));
  }

  // The gap function on the two-circle stratum: 0 on x = 0, 1 on x = pi.
  const auto gap = [](const State& x) { return std::cos(x[0]) > 0.0 ? 0.0 : 1.0; };
  bool constant = true;
  for (int k = 0; k < 16; ++k) {
    const double y = kTwoPi * k / 16.0;
    State a(2), b(2);
    a << 0.0, y;
    b << kPi, y;
    constant = constant && gap(a) == 0.0 && gap(b) == 1.0;
  }
  rep.gap_on_zero_circle = 0.0;
  rep.gap_on_pi_circle = 1.0;
  rep.gap_locally_constant = constant;

  // Any continuous invariant F is constant along the orbit, and its limits
  // along the orbit are its values on the two limit circles. The smooth
  // interpolant (1 - cos x) / 2 shows how far the gap function is from that.
  const auto interpolant = [](const State& x) { return 0.5 * (1.0 - std::cos(x[0])); };
  rep.forced_difference = std::abs(interpolant(fwd) - interpolant(bwd));
  const auto zero = [](const State&) { return 0.0; };
  rep.equal_values_extend = zero(fwd) == zero(bwd);
  rep.obstruction_exhibited = rep.forward_distance < 1e-4 && rep.backward_distance < 1e-4 &&
                              std::abs(rep.gap_on_pi_circle - rep.gap_on_zero_circle) > 0.5 &&
                              rep.forced_difference > 0.5;
  return rep;
}

TorusGapReport torus_function_gap_demo() {
  State start(2);
  start << kPi / 2.0, 0.0;
  return torus_function_gap_demo(start);
}

nlohmann::json TorusGapReport::to_json() const {
  return {{"start", json_vector(start)},
          {"horizon", horizon},
          {"forward_distance", forward_distance},
          {"backward_distance", backward_distance},
          {"closed_form_error", closed_form_error},
          {"gap_values", {gap_on_zero_circle, gap_on_pi_circle}},
          {"gap_locally_constant", gap_locally_constant},
          {"forced_difference", forced_difference},
          {"equal_values_extend", equal_values_extend},
          {"obstruction_exhibited", obstruction_exhibited}};
}

}  // namespace polite::reduction
