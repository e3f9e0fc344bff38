#include "polite/systems.hpp"

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "polite/elliptic.hpp"
#include "polite/error.hpp"
#include "polite/flows.hpp"

namespace polite {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

State vec2(double a, double b) {
  State v(2);
  v << a, b;
  return v;
}

// log(cosh(u)) without overflow.
double log_cosh(double u) {
  const double a = std::abs(u);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

GroupActionSpec time_flow_action(const std::string& name, VectorField field,
                                 std::function<State(double, const State&)> flow) {
  GroupActionSpec g;
  g.name = name;
  g.group_dimension = 1;
  g.act = [flow](const Eigen::VectorXd& t, const State& x) { return flow(t[0], x); };
  g.generators = {std::move(field)};
  return g;
}

State rotate_pairs(const State& x, double angle) {
  // Rotates (q1, q2) and (p1, p2) of a 4-dimensional state jointly.
  const double c = std::cos(angle), s = std::sin(angle);
  State y(4);
  y << c * x[0] - s * x[1], s * x[0] + c * x[1], c * x[2] - s * x[3], s * x[2] + c * x[3];
  return y;
}

}  // namespace

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double wrap_difference(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

State SystemSpec::wrap(const State& x) const {
  if (periodic.empty()) return x;
  State y = x;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (periodic[static_cast<std::size_t>(i)]) y[i] = wrap_angle(y[i]);
  }
  return y;
}

State SystemSpec::displacement(const State& a, const State& b) const {
  State d = b - a;
  if (periodic.empty()) return d;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (periodic[static_cast<std::size_t>(i)]) d[i] = wrap_difference(d[i]);
  }
  return d;
}

Eigen::Matrix2d harmonic_flow_matrix(double t) {
  Eigen::Matrix2d m;
  m << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  return m;
}

SystemSpec make_harmonic() {
  SystemSpec s;
  s.name = "harmonic";
  s.dimension = 2;
  s.vector_field = [](const State& x) { return vec2(x[1], -x[0]); };
  const ScalarFunction h = [](const State& x) { return 0.5 * x[1] * x[1] + 0.5 * x[0] * x[0]; };
  s.hamiltonian = h;
  s.conserved = {{"h", h}};
  auto g = time_flow_action("R time flow", s.vector_field, [](double t, const State& x) -> State {
    return harmonic_flow_matrix(t) * x;
  });
  s.symmetry = g;
  return s;
}

SystemSpec make_stiff_spring(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw DomainError("stiff spring requires eps >= 0");
  }
  SystemSpec s;
  s.name = "stiff:" + std::to_string(eps);
  s.dimension = 2;
  s.vector_field = [eps](const State& x) { return vec2(x[1], -x[0] - eps * x[0] * x[0] * x[0]); };
  const ScalarFunction h = [eps](const State& x) {
    const double q2 = x[0] * x[0];
    return 0.5 * x[1] * x[1] + 0.5 * q2 + 0.25 * eps * q2 * q2;
  };
  s.hamiltonian = h;
  s.conserved = {{"h", h}};
  SystemSpec plain = s;
  s.symmetry = time_flow_action("R time flow", s.vector_field,
                                [plain](double t, const State& x) -> State {
                                  return flow_map(plain, x, t, 1e-13);
                                });
  return s;
}

double stiff_spring_amplitude(double eps, const State& x) {
  const double q2 = x[0] * x[0];
  const double h = 0.5 * x[1] * x[1] + 0.5 * q2 + 0.25 * eps * q2 * q2;
  if (eps == 0.0) return std::sqrt(2.0 * h);
  // A^2 = (sqrt(1 + 4 eps h) - 1) / eps, written without cancellation.
  const double a2 = 4.0 * h / (std::sqrt(1.0 + 4.0 * eps * h) + 1.0);
  return std::sqrt(a2);
}

double stiff_spring_period(double eps, const State& x) {
  const double a = stiff_spring_amplitude(eps, x);
  return elliptic::duffing_period(eps * a * a);
}

double champagne_momentum(const State& x) { return x[0] * x[3] - x[1] * x[2]; }

double champagne_energy(const State& x) {
  const double r2 = x[0] * x[0] + x[1] * x[1];
  return 0.5 * (x[2] * x[2] + x[3] * x[3]) + r2 * r2 - r2;
}

SystemSpec make_champagne() {
  SystemSpec s;
  s.name = "champagne";
  s.dimension = 4;
  s.vector_field = [](const State& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    const double k = 4.0 * r2 - 2.0;
    State v(4);
    v << x[2], x[3], -k * x[0], -k * x[1];
    return v;
  };
  s.hamiltonian = ScalarFunction(champagne_energy);
  s.conserved = {{"h", champagne_energy}, {"j", champagne_momentum}};
  GroupActionSpec g;
  g.name = "SO(2) diagonal rotation";
  g.group_dimension = 1;
  g.period = kTwoPi;
  g.act = [](const Eigen::VectorXd& a, const State& x) { return rotate_pairs(x, a[0]); };
  g.generators = {[](const State& x) {
    State v(4);
    v << -x[1], x[0], -x[3], x[2];
    return v;
  }};
  s.symmetry = g;
  return s;
}

State torus_field_flow(const State& x0, double t) {
  // Unwrapped branch: x0 = 2 pi k + r with r in (-pi, pi].
  const double k = std::round(x0[0] / kTwoPi);
  const double r = x0[0] - kTwoPi * k;
  const double base = kTwoPi * k;
  const double s = std::sin(r);
  if (s == 0.0 || std::abs(r) >= std::numbers::pi) {
    // Invariant circles: x = 0 moves upward, x = pi downward.
    const double c = std::cos(r);
    return vec2(x0[0], x0[1] + c * t);
  }
  const double tau = std::tan(0.5 * r);
  const double lt = std::log(std::abs(tau));
  const double x = base + 2.0 * std::atan(std::exp(t) * tau);
  const double y = x0[1] - log_cosh(t + lt) + log_cosh(lt);
  return vec2(x, y);
}

SystemSpec make_torus_field(FieldDomain domain) {
  SystemSpec s;
  const bool torus = domain == FieldDomain::Torus;
  s.name = torus ? "torus" : "plane-field";
  s.dimension = 2;
  s.vector_field = [](const State& x) { return vec2(std::sin(x[0]), std::cos(x[0])); };
  if (torus) s.periodic = {true, true};
  s.symmetry = time_flow_action("R time flow", s.vector_field,
                                [torus](double t, const State& x) -> State {
                                  State y = torus_field_flow(x, t);
                                  if (torus) {
                                    y[0] = wrap_angle(y[0]);
                                    y[1] = wrap_angle(y[1]);
                                  }
                                  return y;
                                });
  return s;
}

Eigen::MatrixXd rotation_from_skew(const Eigen::VectorXd& omega, int n) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  Eigen::Index k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      w(i, j) = -omega[k];
      w(j, i) = omega[k];
      ++k;
    }
  }
  return w.exp();
}

State se_act(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const State& x) {
  const Eigen::Index n = a.rows();
  State y(2 * n);
  y.head(n) = a * x.head(n) + b;
  y.tail(n) = a * x.tail(n);
  return y;
}

SystemSpec make_free_particle(int n) {
  if (n < 2) throw DomainError("free particle requires n >= 2");
  SystemSpec s;
  s.name = "free:" + std::to_string(n);
  s.dimension = 2 * n;
  s.vector_field = [n](const State& x) {
    State v = State::Zero(2 * n);
    v.head(n) = x.tail(n);
    return v;
  };
  const ScalarFunction h = [n](const State& x) { return 0.5 * x.tail(n).squaredNorm(); };
  s.hamiltonian = h;
  s.conserved.push_back({"h", h});
  for (int i = 0; i < n; ++i) {
    s.conserved.push_back({"p" + std::to_string(i + 1), [n, i](const State& x) { return x[n + i]; }});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      s.conserved.push_back({"L" + std::to_string(i + 1) + std::to_string(j + 1),
                             [n, i, j](const State& x) {
                               return x[i] * x[n + j] - x[j] * x[n + i];
                             }});
    }
  }
  const int rot = n * (n - 1) / 2;
  GroupActionSpec g;
  g.name = "SE(" + std::to_string(n) + ")";
  g.group_dimension = rot + n;
  g.act = [n, rot](const Eigen::VectorXd& params, const State& x) {
    const Eigen::MatrixXd a = rotation_from_skew(params.head(rot), n);
    return se_act(a, params.tail(n), x);
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      g.generators.push_back([n, i, j](const State& x) {
        State v = State::Zero(2 * n);
        v[i] = -x[j];
        v[j] = x[i];
        v[n + i] = -x[n + j];
        v[n + j] = x[n + i];
        return v;
      });
    }
  }
  for (int i = 0; i < n; ++i) {
    g.generators.push_back([n, i](const State&) {
      State v = State::Zero(2 * n);
      v[i] = 1.0;
      return v;
    });
  }
  s.symmetry = g;
  return s;
}

SystemSpec make_planar_rotation() {
  SystemSpec s;
  s.name = "rotation";
  s.dimension = 2;
  s.vector_field = [](const State& x) { return vec2(-x[1], x[0]); };
  s.conserved = {{"r2", [](const State& x) { return x.squaredNorm(); }}};
  GroupActionSpec g;
  g.name = "SO(2) rotation";
  g.group_dimension = 1;
  g.period = kTwoPi;
  g.act = [](const Eigen::VectorXd& a, const State& x) {
    const double c = std::cos(a[0]), sn = std::sin(a[0]);
    return vec2(c * x[0] - sn * x[1], sn * x[0] + c * x[1]);
  };
  g.generators = {s.vector_field};
  s.symmetry = g;
  return s;
}

SystemSpec make_system(const std::string& name) {
  if (name == "harmonic") return make_harmonic();
  if (name == "champagne") return make_champagne();
  if (name == "torus") return make_torus_field(FieldDomain::Torus);
  if (name == "plane-field") return make_torus_field(FieldDomain::Plane);
  if (name == "rotation") return make_planar_rotation();
  const auto colon = name.find(':');
  if (colon != std::string::npos) {
    const std::string head = name.substr(0, colon);
    const std::string arg = name.substr(colon + 1);
    std::size_t used = 0;
    try {
      if (head == "stiff") {
        const double eps = std::stod(arg, &used);
        if (used == arg.size()) return make_stiff_spring(eps);
      } else if (head == "free") {
        const int n = std::stoi(arg, &used);
        if (used == arg.size()) return make_free_particle(n);
      }
    } catch (const std::invalid_argument&) {
    } catch (const std::out_of_range&) {
    }
  }
  throw DomainError("unknown system '" + name + "'");
}

double lie_derivative(const ScalarFunction& f, const VectorField& field, const State& x, double h) {
  const State v = field(x);
  const double scale = std::max(1.0, v.norm());
  const double s = h / scale;
  return (f(x + s * v) - f(x - s * v)) / (2.0 * s);
}

State canonical_field(const ScalarFunction& h, const State& x, double step) {
  const Eigen::Index n = x.size() / 2;
  State grad(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    State a = x, b = x;
    a[i] += step;
    b[i] -= step;
    grad[i] = (h(a) - h(b)) / (2.0 * step);
  }
  State v(x.size());
  v.head(n) = grad.tail(n);
  v.tail(n) = -grad.head(n);
  return v;
}

State random_state(int dim, double radius, Rng& rng) {
  std::uniform_real_distribution<double> u(-radius, radius);
  State x(dim);
  for (int i = 0; i < dim; ++i) x[i] = u(rng);
  return x;
}

ConsistencyReport check_consistency(const SystemSpec& system, Rng& rng, int samples,
                                    double radius) {
  ConsistencyReport rep;
  std::uniform_real_distribution<double> ug(-1.0, 1.0);
  for (int k = 0; k < samples; ++k) {
    const State x = random_state(system.dimension, radius, rng);
    const State fx = system.field(x);
    for (const auto& c : system.conserved) {
      rep.conserved_residual =
          std::max(rep.conserved_residual, std::abs(lie_derivative(c.fn, system.vector_field, x)));
    }
    if (system.hamiltonian) {
      const State j = canonical_field(*system.hamiltonian, x);
      rep.hamiltonian_residual = std::max(rep.hamiltonian_residual, (j - fx).norm());
    }
    if (!system.symmetry) continue;
    const GroupActionSpec& g = *system.symmetry;
    Eigen::VectorXd params(g.group_dimension);
    for (int i = 0; i < g.group_dimension; ++i) params[i] = ug(rng);
    const State gx = g.act(params, x);
    // D act_g (x) . X(x) by central differences
    const double hs = 1e-6;
    const State push = system.displacement(g.act(params, x - hs * fx), g.act(params, x + hs * fx)) /
                       (2.0 * hs);
    rep.equivariance_residual = std::max(rep.equivariance_residual, (push - system.field(gx)).norm());
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(g.group_dimension);
    rep.identity_residual = std::max(rep.identity_residual, system.distance(g.act(zero, x), x));
    for (int i = 0; i < g.group_dimension; ++i) {
      Eigen::VectorXd e = zero;
      e[i] = hs;
      const State fd = system.displacement(g.act(-e, x), g.act(e, x)) / (2.0 * hs);
      rep.generator_residual =
          std::max(rep.generator_residual, (fd - g.generators[static_cast<std::size_t>(i)](x)).norm());
    }
  }
  return rep;
}

}  // namespace polite
