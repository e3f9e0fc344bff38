#include "polite/strata.hpp"

#include <cmath>
#include <numbers>

#include "polite/error.hpp"
#include "polite/lines.hpp"

namespace polite::strata {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

State vec2(double a, double b) {
  State v(2);
  v << a, b;
  return v;
}

Eigen::VectorXd constant_invariant(const State&) { return Eigen::VectorXd::Zero(1); }

GroupActionSpec trivial_group() {
  GroupActionSpec g;
  g.name = "trivial";
  g.group_dimension = 0;
  g.act = [](const Eigen::VectorXd&, const State& x) { return x; };
  return g;
}

double euclid(const State& a, const State& b) { return (a - b).norm(); }

// Fixed point at the origin of R^d with isotropy the whole group.
Stratum origin_stratum(std::shared_ptr<const SystemSpec> sys, const std::string& label) {
  Stratum s;
  const int d = sys->dimension;
  s.system = sys;
  s.isotropy_label = label;
  s.chart_dimension = 0;
  s.membership_residual = [](const State& x) { return x.norm(); };
  s.isotropy_invariant = constant_invariant;
  s.sample = [d](Rng&) { return State(State::Zero(d)); };
  s.gh_action = trivial_group();
  s.distance = euclid;
  s.normalizer_move = [sys](const State& x, Rng& rng) {
    if (!sys->symmetry) return x;
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    Eigen::VectorXd params(sys->symmetry->group_dimension);
    for (Eigen::Index i = 0; i < params.size(); ++i) params[i] = u(rng);
    return sys->symmetry->act(params, x);
  };
  s.saturation = [](const State& x) { return x.norm() == 0.0; };
  s.analytic_properness = ProperStatus::Compact;
  s.fixed_points = true;
  return s;
}

State random_annulus_point(int d, double rmin, double rmax, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(rmin, rmax);
  State x(d);
  for (int i = 0; i < d; ++i) x[i] = n(rng);
  return u(rng) * x.normalized();
}

// Complement of the origin, acted on by a compact circle group.
Stratum punctured_stratum(std::shared_ptr<const SystemSpec> sys, const std::string& label,
                          GroupActionSpec gh) {
  Stratum s;
  const int d = sys->dimension;
  s.system = sys;
  s.isotropy_label = label;
  s.chart_dimension = d;
  s.membership_residual = [](const State& x) { return x.norm() > 0.0 ? 0.0 : 1.0; };
  s.isotropy_invariant = constant_invariant;
  s.sample = [d](Rng& rng) { return random_annulus_point(d, 0.1, 1.5, rng); };
  s.gh_action = std::move(gh);
  s.distance = euclid;
  s.normalizer_move = [sys](const State& x, Rng& rng) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    Eigen::VectorXd params(sys->symmetry->group_dimension);
    for (Eigen::Index i = 0; i < params.size(); ++i) params[i] = u(rng);
    return sys->symmetry->act(params, x);
  };
  s.saturation = [](const State& x) { return x.norm() > 0.0; };
  s.analytic_properness = ProperStatus::Compact;
  return s;
}

GroupActionSpec circle_from_flow(const std::string& name, const GroupActionSpec& flow, double period) {
  GroupActionSpec g = flow;
  g.name = name;
  g.period = period;
  return g;
}

std::vector<Stratum> harmonic_strata(std::shared_ptr<const SystemSpec> sys) {
  return {origin_stratum(sys, "R"),
          punctured_stratum(sys, "2piZ", circle_from_flow("R/2piZ", *sys->symmetry, kTwoPi))};
}

std::vector<Stratum> stiff_strata(std::shared_ptr<const SystemSpec> sys, double eps) {
  std::vector<Stratum> out{origin_stratum(sys, "R")};
  GroupActionSpec gh;
  gh.name = "R/tau(h)Z, unit period";
  gh.group_dimension = 1;
  gh.period = 1.0;
  gh.act = [sys, eps](const Eigen::VectorXd& s, const State& x) {
    return sys->symmetry->act(Eigen::VectorXd::Constant(1, s[0] * stiff_spring_period(eps, x)), x);
  };
  gh.generators = {[sys, eps](const State& x) -> State {
    return stiff_spring_period(eps, x) * sys->field(x);
  }};
  Stratum s = punctured_stratum(sys, "tau(h)Z", gh);
  // one circle per energy level, H = tau(h) Z
  s.chart_dimension = 1;
  s.isotropy_invariant = [eps](const State& x) {
    return Eigen::VectorXd::Constant(1, stiff_spring_period(eps, x));
  };
  out.push_back(std::move(s));
  return out;
}

std::vector<Stratum> champagne_strata(std::shared_ptr<const SystemSpec> sys) {
  return {origin_stratum(sys, "SO(2)"), punctured_stratum(sys, "trivial", *sys->symmetry)};
}

std::vector<Stratum> rotation_strata(std::shared_ptr<const SystemSpec> sys) {
  return {origin_stratum(sys, "SO(2)"), punctured_stratum(sys, "trivial", *sys->symmetry)};
}

double circle_distance(const State& x) {
  return std::min(std::abs(wrap_difference(x[0])), std::abs(wrap_difference(x[0] - kPi)));
}

std::vector<Stratum> torus_strata(std::shared_ptr<const SystemSpec> sys) {
  std::vector<Stratum> out;
  {
    Stratum s;
    s.system = sys;
    s.isotropy_label = "2piZ";
    s.chart_dimension = 1;
    s.membership_residual = circle_distance;
    s.isotropy_invariant = [](const State& x) {
      // which circle: +1 on x = 0, -1 on x = pi
      return Eigen::VectorXd::Constant(1, std::cos(x[0]) > 0.0 ? 1.0 : -1.0);
    };
    s.sample = [](Rng& rng) {
      std::uniform_real_distribution<double> u(0.0, kTwoPi);
      std::bernoulli_distribution b(0.5);
      return vec2(b(rng) ? 0.0 : kPi, u(rng));
    };
    s.gh_action = circle_from_flow("R/2piZ", *sys->symmetry, kTwoPi);
    s.distance = [sys](const State& a, const State& b) { return sys->distance(a, b); };
    s.normalizer_move = [sys](const State& x, Rng& rng) {
      std::uniform_real_distribution<double> u(-10.0, 10.0);
      return (*sys->symmetry)(u(rng), x);
    };
    s.saturation = [](const State& x) { return circle_distance(x) == 0.0; };
    s.analytic_properness = ProperStatus::Compact;
    out.push_back(std::move(s));
  }
  {
    Stratum s;
    s.system = sys;
    s.isotropy_label = "trivial";
    s.chart_dimension = 2;
    s.membership_residual = [](const State& x) { return circle_distance(x) > 0.0 ? 0.0 : 1.0; };
    s.isotropy_invariant = [](const State& x) {
      return Eigen::VectorXd::Constant(1, std::sin(x[0]) > 0.0 ? 1.0 : -1.0);
    };
    s.sample = [](Rng& rng) {
      std::uniform_real_distribution<double> ux(0.05, kPi - 0.05);
      std::uniform_real_distribution<double> uy(0.0, kTwoPi);
      std::bernoulli_distribution b(0.5);
      const double x = ux(rng);
      return vec2(b(rng) ? x : x + kPi, uy(rng));
    };
    s.gh_action = *sys->symmetry;
    s.distance = [sys](const State& a, const State& b) { return sys->distance(a, b); };
    s.normalizer_move = [sys](const State& x, Rng& rng) {
      std::uniform_real_distribution<double> u(-10.0, 10.0);
      return (*sys->symmetry)(u(rng), x);
    };
    s.saturation = [](const State& x) { return circle_distance(x) > 0.0; };
    s.analytic_properness = ProperStatus::Proper;
    Box region;
    region.lower = vec2(0.2, 0.0);
    region.upper = vec2(kPi - 0.2, kTwoPi);
    s.probe_region = region;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Stratum> plane_field_strata(std::shared_ptr<const SystemSpec> sys) {
  Stratum s;
  s.system = sys;
  s.isotropy_label = "trivial";
  s.chart_dimension = 2;
  s.membership_residual = [](const State&) { return 0.0; };
  s.isotropy_invariant = constant_invariant;
  s.sample = [](Rng& rng) { return random_state(2, 3.0, rng); };
  s.gh_action = *sys->symmetry;
  s.distance = euclid;
  s.normalizer_move = [sys](const State& x, Rng& rng) {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    return (*sys->symmetry)(u(rng), x);
  };
  s.saturation = [](const State&) { return true; };
  s.analytic_properness = ProperStatus::NotProper;
  s.probe_region = plane_field_region();
  return {s};
}

lines::OrientedLine line_of(const State& x) {
  const Eigen::Index n = x.size() / 2;
  return lines::reduce_line(x.head(n), x.tail(n));
}

// Unit vector orthogonal to u, deterministic.
Eigen::VectorXd orthogonal_unit(const Eigen::VectorXd& u) {
  Eigen::Index k = 0;
  u.cwiseAbs().minCoeff(&k);
  Eigen::VectorXd w = Eigen::VectorXd::Unit(u.size(), k);
  w -= w.dot(u) * u;
  return w.normalized();
}

std::vector<Stratum> free_particle_strata(std::shared_ptr<const SystemSpec> sys) {
  const int n = sys->dimension / 2;
  Stratum s;
  s.system = sys;
  s.isotropy_label = "SO(" + std::to_string(n - 1) + ")xR line stabilizer";
  // P_H for a fixed line stabilizer H: unit-speed states along the line, either orientation.
  s.chart_dimension = 1;
  s.membership_residual = [n](const State& x) { return std::abs(x.tail(n).norm() - 1.0); };
  s.isotropy_invariant = [](const State& x) {
    const lines::OrientedLine l = line_of(x);
    const Eigen::Index d = l.u.size();
    Eigen::VectorXd inv(d * d + d);
    const Eigen::MatrixXd uu = l.u * l.u.transpose();
    inv.head(d * d) = Eigen::Map<const Eigen::VectorXd>(uu.data(), d * d);
    inv.tail(d) = l.m;
    return inv;
  };
  s.sample = [n](Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    State x(2 * n);
    for (int i = 0; i < 2 * n; ++i) x[i] = g(rng);
    x.tail(n).normalize();
    return x;
  };
  GroupActionSpec flip;
  flip.name = "Z2 orientation flip";
  flip.group_dimension = 1;
  flip.period = 2.0;
  flip.act = [n](const Eigen::VectorXd& k, const State& x) -> State {
    const long parity = std::lround(k[0]) % 2;
    if (parity == 0) return x;
    const lines::OrientedLine l = line_of(x);
    const Eigen::VectorXd w = orthogonal_unit(l.u);
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - 2.0 * l.u * l.u.transpose() -
                              2.0 * w * w.transpose();
    return se_act(a, l.m - a * l.m, x);
  };
  s.gh_action = flip;
  s.discrete_elements = {Eigen::VectorXd::Constant(1, 1.0)};
  s.distance = [](const State& a, const State& b) { return line_of(a).distance(line_of(b)); };
  s.normalizer_move = [n, flip](const State& x, Rng& rng) -> State {
    // translation along the line, a rotation about its axis, optionally the flip
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::bernoulli_distribution b(0.5);
    const lines::OrientedLine l = line_of(x);
    State y = se_act(Eigen::MatrixXd::Identity(n, n), u(rng) * l.u, x);
    if (n >= 3) {
      const Eigen::VectorXd w1 = orthogonal_unit(l.u);
      Eigen::VectorXd w2 = Eigen::VectorXd::Zero(n);
      for (Eigen::Index k = 0; k < n && w2.norm() < 0.5; ++k) {
        Eigen::VectorXd e = Eigen::VectorXd::Unit(n, k);
        e -= e.dot(l.u) * l.u + e.dot(w1) * w1;
        if (e.norm() > 0.5) w2 = e.normalized();
      }
      const auto [a, t] = lines::axis_rotation(l, w1, w2, u(rng));
      y = se_act(a, t, y);
    }
    if (b(rng)) y = flip(1.0, y);
    return y;
  };
  s.saturation = [n](const State& x) { return std::abs(x.tail(n).norm() - 1.0) <= 1e-10; };
  s.analytic_properness = ProperStatus::Compact;
  return {s};
}

}  // namespace

bool Box::contains(const State& x, double slack) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] - slack || x[i] > upper[i] + slack) return false;
  }
  return true;
}

Box plane_field_region() {
  Box b;
  b.lower = vec2(0.0, -1.0);
  b.upper = vec2(kPi, 1.0);
  return b;
}

std::vector<State> plane_field_sequence(int n_first, int n_last) {
  std::vector<State> out;
  for (int k = n_first; k <= n_last; ++k) out.push_back(vec2(1.0 / k, 0.0));
  return out;
}

std::vector<Stratum> enumerate_strata(const SystemSpec& system) {
  auto sys = std::make_shared<const SystemSpec>(system);
  const std::string& name = system.name;
  if (name == "harmonic") return harmonic_strata(sys);
  if (name.rfind("stiff:", 0) == 0) return stiff_strata(sys, std::stod(name.substr(6)));
  if (name == "champagne") return champagne_strata(sys);
  if (name == "torus") return torus_strata(sys);
  if (name == "plane-field") return plane_field_strata(sys);
  if (name.rfind("free:", 0) == 0) return free_particle_strata(sys);
  if (name == "rotation") return rotation_strata(sys);
  throw DomainError("no strata catalogued for system '" + name + "'");
}

FlowInvarianceReport check_flow_invariance(const Stratum& stratum, double tol, int samples,
                                           Rng& rng, double t_final) {
  FlowInvarianceReport rep;
  const SystemSpec& sys = *stratum.system;
  for (int k = 0; k < samples; ++k) {
    const State x0 = stratum.sample(rng);
    const Eigen::VectorXd inv0 = stratum.isotropy_invariant(x0);
    const Trajectory traj = integrate(sys, x0, t_final, 1e-11);
    ++rep.samples;
    // Check accepted states and midpoints of the dense output.
    for (std::size_t i = 0; i < traj.size(); ++i) {
      std::vector<std::pair<double, State>> pts{{traj.times[i], traj.states[i]}};
      if (i + 1 < traj.size()) {
        const double tm = 0.5 * (traj.times[i] + traj.times[i + 1]);
        pts.emplace_back(tm, traj.at(tm));
      }
      for (const auto& [t, x] : pts) {
        const double r = stratum.membership_residual(x);
        const double dev = (stratum.isotropy_invariant(x) - inv0).cwiseAbs().maxCoeff() /
                           std::max(1.0, inv0.cwiseAbs().maxCoeff());
        rep.max_residual = std::max(rep.max_residual, r);
        rep.max_invariant_deviation = std::max(rep.max_invariant_deviation, dev);
        if ((r > tol || dev > tol) && rep.ok) {
          rep.ok = false;
          rep.counterexample = x;
          rep.counterexample_time = t;
        }
      }
    }
  }
  return rep;
}

FreenessReport check_freeness(const Stratum& stratum, int samples, Rng& rng, double identity_gap,
                              double threshold) {
  FreenessReport rep;
  rep.min_displacement = std::numeric_limits<double>::infinity();
  const GroupActionSpec& g = stratum.gh_action;
  if (g.group_dimension == 0) {
    // Trivial G_H acts freely on anything.
    rep.samples = 0;
    return rep;
  }
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < samples; ++k) {
    const State p = stratum.sample(rng);
    std::vector<Eigen::VectorXd> elements = stratum.discrete_elements;
    if (elements.empty()) {
      Eigen::VectorXd params(g.group_dimension);
      for (int i = 0; i < g.group_dimension; ++i) {
        if (g.period) {
          params[i] = identity_gap + u01(rng) * (*g.period - 2.0 * identity_gap);
        } else {
          const double mag = identity_gap + u01(rng) * 10.0;
          params[i] = u01(rng) < 0.5 ? -mag : mag;
        }
      }
      // Include the parameter closest to the identity explicitly now and then.
      if (k % 4 == 0) params.setConstant(identity_gap);
      elements.push_back(params);
    }
    for (const auto& params : elements) {
      const double d = stratum.distance(g.act(params, p), p);
      ++rep.samples;
      if (d < rep.min_displacement) {
        rep.min_displacement = d;
        if (d <= threshold) {
          rep.free = false;
          rep.counterexample = p;
          rep.counterexample_params = params;
        }
      }
    }
  }
  return rep;
}

NormalizerReport check_normalizer_invariance(const Stratum& stratum, int samples, Rng& rng,
                                             double tol) {
  NormalizerReport rep;
  for (int k = 0; k < samples; ++k) {
    const State p = stratum.sample(rng);
    const State q = stratum.normalizer_move(p, rng);
    const Eigen::VectorXd i0 = stratum.isotropy_invariant(p);
    const double r = stratum.membership_residual(q);
    const double dev = (stratum.isotropy_invariant(q) - i0).cwiseAbs().maxCoeff() /
                       std::max(1.0, i0.cwiseAbs().maxCoeff());
    rep.max_residual = std::max(rep.max_residual, r);
    rep.max_invariant_deviation = std::max(rep.max_invariant_deviation, dev);
    if (r > tol || dev > tol) rep.ok = false;
  }
  return rep;
}

std::vector<std::optional<Crossing>> section_returns(const SystemSpec& system,
                                                     const State& reference,
                                                     const std::vector<State>& starts,
                                                     const Box& region, double horizon,
                                                     double tol) {
  const State normal = system.field(reference);
  if (!(normal.norm() > 0.0)) throw DomainError("section reference point is an equilibrium");
  EventSpec ev;
  ev.direction = 0;
  ev.terminal = false;
  ev.event_function = [&system, reference, normal](const State& x) {
    return system.displacement(reference, x).dot(normal);
  };
  IntegratorOptions opt;
  opt.tol = tol;
  opt.store = false;
  opt.min_event_time = 1e-6;
  std::vector<std::optional<Crossing>> out;
  for (const State& x0 : starts) {
    std::optional<Crossing> hit;
    integrate(system.vector_field, x0, horizon, opt, &ev, [&](const Crossing& c) {
      if (region.contains(system.wrap(c.state), 1e-9)) {
        hit = c;
        return true;
      }
      return false;
    });
    out.push_back(hit);
  }
  return out;
}

std::optional<PropernessWitness> witness_from_sequence(const SystemSpec& system,
                                                       const State& reference,
                                                       const std::vector<State>& starts,
                                                       const Box& region, double horizon,
                                                       bool require_growth) {
  if (starts.size() < 3) return std::nullopt;
  for (const State& x : starts) {
    if (!region.contains(x)) return std::nullopt;
  }
  const auto returns = section_returns(system, reference, starts, region, horizon);
  PropernessWitness w;
  w.compact_radius = region.radius();
  w.reference_start = reference;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (!returns[i]) return std::nullopt;
    w.times.push_back(returns[i]->time);
    w.start_points.push_back(starts[i]);
    w.end_points.push_back(system.wrap(returns[i]->state));
  }
  for (std::size_t i = 1; i < w.times.size(); ++i) {
    if (!(w.times[i] > w.times[i - 1])) return std::nullopt;
  }
  if (require_growth) {
    const double first = w.times[1] - w.times[0];
    const double last = w.times.back() - w.times[w.times.size() - 2];
    if (!(last >= 0.5 * first) || !(w.times.back() - w.times.front() > 1.0)) return std::nullopt;
  }
  w.reference_end = w.end_points.back();
  return w;
}

std::optional<PropernessWitness> properness_probe(const SystemSpec& system, const Box& region,
                                                  double horizon) {
  const Eigen::Index d = region.lower.size();
  if (d != system.dimension) throw DomainError("probe region dimension mismatch");
  const Eigen::VectorXd width = region.upper - region.lower;
  const double delta0 = 0.25 * width.minCoeff();
  constexpr int kGrid = 3;
  constexpr int kSteps = 8;
  Eigen::Index total = 1;
  for (Eigen::Index i = 0; i < d; ++i) total *= kGrid;
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    State p(d);
    Eigen::Index rem = idx;
    for (Eigen::Index i = 0; i < d; ++i) {
      p[i] = region.lower[i] + width[i] * static_cast<double>(rem % kGrid) / (kGrid - 1);
      rem /= kGrid;
    }
    const State f = system.field(p);
    if (!(f.norm() > 1e-12)) continue;
    // Approach directions inside the section: coordinate axes projected off the field.
    for (Eigen::Index axis = 0; axis < d; ++axis) {
      State v = State::Unit(d, axis);
      v -= v.dot(f) / f.squaredNorm() * f;
      if (v.norm() < 1e-6) continue;
      v.normalize();
      for (double sign : {1.0, -1.0}) {
        std::vector<State> starts;
        for (int k = 0; k <= kSteps; ++k) starts.push_back(p + sign * delta0 * std::ldexp(1.0, -k) * v);
        if (auto w = witness_from_sequence(system, p, starts, region, horizon, true)) return w;
      }
    }
  }
  return std::nullopt;
}

std::string to_string(ProbeOutcome p) {
  switch (p) {
    case ProbeOutcome::Polite: return "polite";
    case ProbeOutcome::Witness: return "witness";
    case ProbeOutcome::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

PolitenessReport politeness_report(const SystemSpec& system, Rng& rng, int samples) {
  PolitenessReport rep;
  rep.system = system.name;
  bool polite = true;
  for (const Stratum& s : enumerate_strata(system)) {
    StratumSummary sum;
    sum.isotropy = s.isotropy_label;
    sum.dimension = s.chart_dimension;
    const FreenessReport fr = check_freeness(s, samples, rng);
    sum.free = fr.free;
    sum.min_displacement = fr.min_displacement;
    sum.flow_invariant = check_flow_invariance(s, 1e-8, std::max(1, samples / 4), rng).ok;
    if (s.analytic_properness == ProperStatus::Compact) {
      sum.properness = ProbeOutcome::Polite;
    } else if (s.probe_region) {
      sum.witness = properness_probe(system, *s.probe_region, 200.0);
      sum.properness = sum.witness ? ProbeOutcome::Witness : ProbeOutcome::Inconclusive;
    }
    const bool stratum_ok = sum.free && sum.flow_invariant &&
                            sum.properness != ProbeOutcome::Witness &&
                            (sum.properness == ProbeOutcome::Polite ||
                             s.analytic_properness == ProperStatus::Proper);
    polite = polite && stratum_ok;
    rep.strata.push_back(std::move(sum));
  }
  rep.polite = polite;
  return rep;
}

nlohmann::json PolitenessReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : strata) {
    nlohmann::json j{{"isotropy", s.isotropy},     {"dimension", s.dimension},
                     {"free", s.free},             {"min_displacement", s.min_displacement},
                     {"flow_invariant", s.flow_invariant},
                     {"properness", to_string(s.properness)}};
    if (s.witness) {
      nlohmann::json w{{"times", s.witness->times}, {"compact_radius", s.witness->compact_radius}};
      nlohmann::json starts = nlohmann::json::array(), ends = nlohmann::json::array();
      for (const auto& x : s.witness->start_points) starts.push_back(std::vector<double>(x.data(), x.data() + x.size()));
      for (const auto& x : s.witness->end_points) ends.push_back(std::vector<double>(x.data(), x.data() + x.size()));
      w["start_points"] = starts;
      w["end_points"] = ends;
      j["witness"] = w;
    }
    arr.push_back(j);
  }
  return {{"system", system}, {"strata", arr}, {"polite", polite}};
}

}  // namespace polite::strata
