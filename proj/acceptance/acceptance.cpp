#include "acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "oracles.hpp"
#include "polite/elliptic.hpp"
#include "polite/flows.hpp"
#include "polite/forms.hpp"
#include "polite/lie.hpp"
#include "polite/lines.hpp"
#include "polite/reduction.hpp"
#include "polite/strata.hpp"
#include "polite/systems.hpp"

namespace polite::acceptance {

namespace {

constexpr double kPi = std::numbers::pi;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

class Checks {
 public:
  explicit Checks(CriterionResult& r) : r_(r) {}
  bool add(bool ok, const std::string& name, const std::string& detail) {
    r_.checks.push_back(std::string(ok ? "ok   " : "FAIL ") + name + ": " + detail);
    all_ = all_ && ok;
    return ok;
  }
  bool below(double value, double tol, const std::string& name) {
    return add(value <= tol, name, sci(value) + " <= " + sci(tol));
  }
  bool above(double value, double tol, const std::string& name) {
    return add(value > tol, name, sci(value) + " > " + sci(tol));
  }
  bool all() const { return all_; }

 private:
  CriterionResult& r_;
  bool all_ = true;
};

State vec(std::initializer_list<double> v) {
  State x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x[i++] = a;
  return x;
}

// ---------------------------------------------------------------------------

CriterionResult duffing_period_criterion(std::uint64_t) {
  CriterionResult r;
  Checks c(r);
  EventSpec ev;
  ev.direction = -1;
  ev.event_function = [](const State& x) { return x[1]; };
  for (double eps : {0.1, 0.5, 1.0}) {
    const double closed = elliptic::duffing_period(eps);
    const SystemSpec sys = make_stiff_spring(eps);
    const double measured = first_return(sys, vec({1.0, 0.0}), ev, 1e-13).time;
    c.below(std::abs(measured - closed) / closed, 1e-8, "eps=" + sci(eps) + " closed vs measured (rel)");
  }
  for (double eps : {0.01, 0.05}) {
    const double closed = elliptic::duffing_period(eps);
    const double series = oracle::duffing_series(eps);
    c.below(std::abs(series - closed), 5.0 * eps * eps * eps, "eps=" + sci(eps) + " series vs closed");
    c.below(std::abs(elliptic::duffing_period_series(elliptic::StiffnessParam(eps), 2) - series), 1e-15,
            "eps=" + sci(eps) + " library series vs printed series");
  }
  r.pass = c.all();
  return r;
}

CriterionResult harmonic_criterion(std::uint64_t seed) {
  CriterionResult r;
  Checks c(r);
  const SystemSpec sys = make_harmonic();
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const State x0 = random_state(2, 2.0, rng);
    for (double t : {kPi / 2.0, kPi, 2.0 * kPi}) {
      const State num = integrate(sys.vector_field, x0, t, IntegratorOptions{1e-13}).states.back();
      worst = std::max(worst, (num - oracle::oscillator_matrix(t) * x0).cwiseAbs().maxCoeff());
    }
  }
  c.below(worst, 1e-9, "integrated flow vs printed rotation matrix");
  double worst_action = 0.0;
  for (double t : {kPi / 2.0, kPi, 2.0 * kPi}) {
    worst_action = std::max(worst_action, (harmonic_flow_matrix(t) - oracle::oscillator_matrix(t))
                                              .cwiseAbs()
                                              .maxCoeff());
  }
  c.below(worst_action, 1e-15, "library flow matrix vs printed matrix");
  EventSpec ev;
  ev.direction = -1;
  ev.event_function = [](const State& x) { return x[1]; };
  const double period = first_return(sys, vec({1.0, 0.0}), ev, 1e-13).time;
  c.below(std::abs(period - 2.0 * kPi), 1e-9, "measured period vs 2 pi");
  r.pass = c.all();
  return r;
}

CriterionResult elliptic_criterion(std::uint64_t) {
  CriterionResult r;
  Checks c(r);
  double worst = 0.0;
  for (double k : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}) {
    worst = std::max(worst, std::abs(elliptic::complete_K(k) - oracle::complete_K_quadrature(k)));
  }
  c.below(worst, 1e-12, "AGM K vs quadrature on 9 moduli");
  for (double eps : {0.1, 0.5, 1.0}) {
    const elliptic::StiffnessParam e(eps);
    const double tau = elliptic::duffing_period(e);
    const auto x = [&](double t) { return elliptic::duffing_solution(t, e); };
    double res = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = tau * i / 200.0;
      const double xt = x(t);
      res = std::max(res, std::abs(oracle::second_derivative(x, t) + xt + eps * xt * xt * xt));
    }
    c.below(res, 1e-7, "eps=" + sci(eps) + " Duffing residual of cn solution on [0, tau]");
  }
  r.pass = c.all();
  return r;
}

CriterionResult champagne_criterion(std::uint64_t seed) {
  CriterionResult r;
  Checks c(r);
  const auto chart = reduction::champagne_chart();
  Rng rng(seed);
  double push = 0.0;
  for (int k = 0; k < 100; ++k) {
    const State x = random_state(4, 1.5, rng);
    const State field = oracle::champagne_field(x);
    const auto v = reduction::reduced_field(chart, reduction::project(chart, x));
    for (std::size_t i = 0; i < chart.invariants.size(); ++i) {
      const double d = oracle::directional_derivative(chart.invariants[i].fn, field, x);
      push = std::max(push, std::abs(d - v[static_cast<Eigen::Index>(i)]));
    }
  }
  c.below(push, 1e-6, "push-forward identity on 100 states");

  const State x0 = vec({1.0, 0.0, 0.0, 0.3});
  const double step = 1e-3, t_final = 20.0;
  const auto full = oracle::rk4(oracle::champagne_field, x0, t_final, step);
  const auto reduced = reduction::integrate_reduced(chart, reduction::project(chart, x0), t_final);
  std::vector<double> times;
  for (std::size_t i = 0; i < full.size(); i += 10) times.push_back(static_cast<double>(i) * step);
  double commute = 0.0;
  for (double t : times) {
    const auto idx = static_cast<std::size_t>(std::lround(t / step));
    commute = std::max(commute, (reduction::project(chart, full[idx]) - reduced.at(t)).cwiseAbs().maxCoeff());
  }
  c.below(commute, 1e-6, "projected full trajectory vs reduced trajectory on [0, 20]");
  c.below(reduction::max_relation_residual(chart, reduced), 1e-8, "relation along reduced trajectory");
  const Trajectory rec = reduction::reconstruct(chart, reduced, x0, times);
  double recon = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto idx = static_cast<std::size_t>(std::lround(times[i] / step));
    recon = std::max(recon, (rec.states[i] - full[idx]).cwiseAbs().maxCoeff());
  }
  c.below(recon, 1e-5, "reconstruction vs direct integration on [0, 20]");
  r.pass = c.all();
  return r;
}

bool is_unipotent_shear(const Eigen::Matrix2i& m) {
  const int off = std::abs(m(0, 1)) + std::abs(m(1, 0));
  return m.determinant() == 1 && m.trace() == 2 && off == 1;
}

std::string matrix_text(const Eigen::Matrix2i& m) {
  return "[[" + std::to_string(m(0, 0)) + "," + std::to_string(m(0, 1)) + "],[" +
         std::to_string(m(1, 0)) + "," + std::to_string(m(1, 1)) + "]]";
}

CriterionResult monodromy_criterion(std::uint64_t) {
  CriterionResult r;
  Checks c(r);
  const auto res = reduction::monodromy(reduction::elliptic_loop(0.0, 0.0, 0.1, 0.05));
  c.add(is_unipotent_shear(res.matrix), "loop about (0, 0)",
        matrix_text(res.matrix) + ", det " + std::to_string(res.matrix.determinant()) + ", trace " +
            std::to_string(res.matrix.trace()));
  c.below(res.closure_residual, 1e-2, "entries near integers before rounding");
  c.below(res.max_residual, 0.25, "continuation snap distances");
  const auto control = reduction::monodromy(reduction::elliptic_loop(0.2, 0.0, 0.05, 0.05));
  c.add(control.matrix == Eigen::Matrix2i::Identity(), "contractible control loop",
        matrix_text(control.matrix));
  r.pass = c.all();
  return r;
}

CriterionResult class_s_criterion(std::uint64_t) {
  CriterionResult r;
  Checks c(r);
  const double a = 1.3, b = -0.7;
  for (int n : {2, 3, 5}) {
    const lie::AlgebraSpec g = lie::make_class_S(n);
    const std::string tag = "n=" + std::to_string(n) + " ";
    lie::Covector mu{Eigen::VectorXd::Zero(n + 1)};
    mu.components[0] = a;
    mu.components[n] = b;
    // Displayed formulas: ad*_{X1} = -a d/dY*, ad*_Y = -a d/dX1*.
    Eigen::VectorXd want_x1 = Eigen::VectorXd::Zero(n + 1), want_y = Eigen::VectorXd::Zero(n + 1);
    want_x1[n] = -a;
    want_y[0] = -a;
    const auto gx1 = lie::coadjoint_generator(g, g.basis_vector(0), mu).components;
    const auto gy = lie::coadjoint_generator(g, g.basis_vector(n), mu).components;
    c.below((gx1 - want_x1).cwiseAbs().maxCoeff(), 1e-12, tag + "generator of X1 vs -a d/dY*");
    c.below((gy - want_y).cwiseAbs().maxCoeff(), 1e-12, tag + "generator of Y vs -a d/dX1*");
    double others = 0.0;
    for (int i = 1; i < n; ++i) {
      others = std::max(others, lie::coadjoint_generator(g, g.basis_vector(i), mu).components.cwiseAbs().maxCoeff());
    }
    c.below(others, 1e-12, tag + "generators of X2..Xn vanish");

    const lie::Subalgebra iso = lie::isotropy_algebra(g, mu);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(n + 1, n - 1);
    for (int i = 1; i < n; ++i) expected(i, i - 1) = 1.0;
    c.add(iso.same_span(lie::span(g, expected)), tag + "isotropy = span{X2..Xn}",
          "dimension " + std::to_string(iso.dimension()));
    const lie::Subalgebra nor = lie::normalizer_algebra(g, iso);
    c.add(nor.dimension() == n + 1, tag + "normalizer = whole algebra",
          "dimension " + std::to_string(nor.dimension()));
    const lie::AlgebraSpec q = lie::quotient_algebra(nor, iso);
    int ix = -1, iy = -1;
    for (int i = 0; i < q.dimension(); ++i) {
      if (q.labels()[static_cast<std::size_t>(i)] == "[X1]") ix = i;
      if (q.labels()[static_cast<std::size_t>(i)] == "[Y]") iy = i;
    }
    bool aff = q.dimension() == 2 && ix >= 0 && iy >= 0;
    double dev = 1.0;
    if (aff) dev = (q.bracket(q.basis_vector(iy), q.basis_vector(ix)) - q.basis_vector(ix)).cwiseAbs().maxCoeff();
    c.add(aff && dev <= 1e-12, tag + "quotient bracket [Y, X1] = X1", "deviation " + sci(dev));
  }
  r.pass = c.all();
  return r;
}

CriterionResult sl2_criterion(std::uint64_t) {
  CriterionResult r;
  Checks c(r);
  const lie::AlgebraSpec g = lie::make_sl2();
  const auto iso_of = [&](const Eigen::Matrix2d& m) {
    return lie::isotropy_algebra(g, lie::sl2_covector_from_matrix(m));
  };
  Eigen::Matrix2d hyperbolic, elliptic_m, nilpotent;
  hyperbolic << 1, 0, 0, -1;
  elliptic_m << 0, 1, -1, 0;
  nilpotent << 0, 1, 0, 0;
  for (const auto& [name, m] : {std::pair{"hyperbolic", hyperbolic}, std::pair{"elliptic", elliptic_m}}) {
    const auto h = iso_of(m);
    const auto n = lie::normalizer_algebra(g, h);
    c.add(h.dimension() == 1 && n.dimension() == 1, std::string(name) + " Cartan self-normalizing",
          "isotropy dim " + std::to_string(h.dimension()) + ", normalizer dim " + std::to_string(n.dimension()));
  }
  const auto h = iso_of(nilpotent);
  const auto n = lie::normalizer_algebra(g, h);
  c.add(n.dimension() == 2, "nilpotent normalizer dimension", std::to_string(n.dimension()));
  const lie::AlgebraSpec borel = lie::quotient_algebra(n, lie::span(g, Eigen::MatrixXd(3, 0)));
  c.add(lie::is_solvable(borel) && !lie::is_abelian(borel), "normalizer solvable, non-abelian (Borel)",
        "derived dims " + std::to_string(lie::derived_series_dimensions(borel).size()));
  Eigen::Matrix2d upper;
  upper << 1.5, 0.3, 0.0, 1.0 / 1.5;
  c.add(lie::sl2_normalizes_unipotent(upper), "upper-triangular matrix normalizes the unipotent line", "");
  const lie::AlgebraSpec q = lie::quotient_algebra(n, h);
  c.add(q.dimension() == 1, "Borel / nilpotent line", "dimension " + std::to_string(q.dimension()));
  r.pass = c.all();
  return r;
}

CriterionResult strata_criterion(std::uint64_t seed) {
  CriterionResult r;
  Checks c(r);
  Rng rng(seed);
  for (const std::string name :
       {"harmonic", "stiff:0.5", "champagne", "torus", "plane-field", "free:2", "free:3", "rotation"}) {
    const SystemSpec sys = make_system(name);
    for (const auto& s : strata::enumerate_strata(sys)) {
      const std::string tag = name + " [" + s.isotropy_label + "] ";
      const auto fi = strata::check_flow_invariance(s, 1e-8, 100, rng);
      c.add(fi.ok, tag + "flow invariance (100 samples)",
            "membership " + sci(fi.max_residual) + ", invariant drift " + sci(fi.max_invariant_deviation));
      if (s.gh_action.group_dimension > 0) {
        const auto fr = strata::check_freeness(s, 100, rng);
        c.above(fr.min_displacement, 1e-6, tag + "G_H freeness displacement");
      }
    }
  }
  const SystemSpec plane = make_torus_field(FieldDomain::Plane);
  const auto w = strata::witness_from_sequence(plane, vec({0.0, 0.0}), strata::plane_field_sequence(2, 8),
                                               strata::plane_field_region(), 100.0, false);
  std::string times;
  if (w) {
    for (double t : w->times) times += sci(t) + " ";
  }
  c.add(w.has_value(), "plane-field witness return times strictly increasing over n = 2..8", times);
  r.pass = c.all();
  return r;
}

CriterionResult torus_gap_criterion(std::uint64_t) {
  CriterionResult r;
  Checks c(r);
  const auto rep = reduction::torus_function_gap_demo();
  c.below(rep.forward_distance, 1e-4, "distance to x = pi at t = 12");
  c.below(rep.backward_distance, 1e-4, "distance to x = 0 at t = -12");
  const SystemSpec torus = make_torus_field(FieldDomain::Torus);
  double err = 0.0;
  for (int k = -24; k <= 24; ++k) {
    const double t = 0.5 * k;
    const State x = flow_map(torus, rep.start, t, 1e-13);
    err = std::max(err, std::abs(x[0] - oracle::torus_x_closed_form(rep.start[0], t)));
  }
  c.below(err, 1e-8, "numeric flow vs 2 atan(e^t tan(x0/2))");
  c.add(rep.gap_locally_constant && rep.obstruction_exhibited, "gap function obstruction",
        "forced difference " + sci(rep.forced_difference));
  c.add(rep.equal_values_extend, "equal-values function extends", "");
  r.pass = c.all();
  return r;
}

CriterionResult lines_criterion(std::uint64_t seed) {
  CriterionResult r;
  Checks c(r);
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n : {2, 3, 4}) {
    const std::string tag = "n=" + std::to_string(n) + " ";
    double flow_res = 0.0, eq_res = 0.0, stab_res = 0.0;
    bool rank_ok = true;
    for (int k = 0; k < 50; ++k) {
      Eigen::VectorXd q(n), p(n), b(n);
      for (int i = 0; i < n; ++i) {
        q[i] = g(rng);
        p[i] = g(rng);
        b[i] = g(rng);
      }
      p.normalize();
      const lines::OrientedLine l = lines::reduce_line(q, p);
      for (double t : {-3.0, 0.5, 7.0}) flow_res = std::max(flow_res, lines::reduce_line(q + t * p, p).distance(l));
      const Eigen::MatrixXd a = oracle::random_rotation(n, rng);
      State x(2 * n);
      x << q, p;
      const State y = se_act(a, b, x);
      eq_res = std::max(eq_res, lines::reduce_line(y.head(n), y.tail(n)).distance(lines::act_se_n(a, b, l)));
      for (const auto& s : lines::stabilizer_witness(l)) {
        stab_res = std::max(stab_res, s.residual / std::max(1.0, std::abs(s.s)));
      }
      rank_ok = rank_ok && lines::quotient_chart_rank(q, p) == 2 * n - 2;
    }
    c.below(flow_res, 1e-12, tag + "reduce_line invariant under the flow");
    c.below(eq_res, 1e-10, tag + "SE(n) equivariance (50 samples)");
    c.below(stab_res, 1e-12, tag + "translations along the line fix it (relative)");
    c.add(rank_ok, tag + "quotient chart rank = 2n-2", "");
  }
  r.pass = c.all();
  return r;
}

CriterionResult forms_criterion(std::uint64_t seed) {
  CriterionResult r;
  Checks c(r);
  c.below(forms::maurer_cartan_selftest(1e-4, 20, seed), 1e-6, "Maurer-Cartan residual at h = 1e-4");
  forms::Quaternion g0(1.0, 0.3, -0.2, 0.1);
  g0.normalize();
  const double r1 = forms::maurer_cartan_residual(g0, 2e-2), r2 = forms::maurer_cartan_residual(g0, 1e-2),
               r3 = forms::maurer_cartan_residual(g0, 5e-3);
  const double order = std::log2(std::sqrt((r1 / r2) * (r2 / r3)));
  c.add(order > 1.8 && order < 2.2, "Maurer-Cartan convergence order", "observed " + sci(order));
  c.above(forms::maurer_cartan_residual(g0, 1e-4, 2.0), 1e-2, "scaled frame rejected");
  Rng rng(seed);
  double closed = 0.0, pf_min = std::numeric_limits<double>::infinity();
  const auto profile = forms::standard_profile();
  for (int k = 0; k < 100; ++k) {
    const auto pt = forms::random_frame_point(rng);
    closed = std::max(closed, forms::check_closed(pt, profile, 1e-4));
    pf_min = std::min(pf_min, std::abs(forms::pfaffian(forms::omega_at(pt, profile))));
  }
  c.below(closed, 1e-6, "d omega on 100 random points");
  c.above(pf_min, 1e-6, "Pfaffian bounded away from 0");
  const auto pt = forms::random_frame_point(rng);
  c.above(forms::check_closed(pt, profile, 1e-4, -1.0), 1e-3, "flipped structure constants rejected");
  r.pass = c.all();
  return r;
}

}  // namespace

nlohmann::json CriterionResult::to_json() const {
  return {{"id", id}, {"title", title}, {"pass", pass}, {"checks", checks}, {"time_limit", time_limit}};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "Duffing period closed form, measurement and series", 5.0, duffing_period_criterion},
      {2, "Harmonic oscillator flow matrix and period", 0.0, harmonic_criterion},
      {3, "AGM K against quadrature; cn solves the Duffing equation", 0.0, elliptic_criterion},
      {4, "Champagne bottle reduction and reconstruction", 0.0, champagne_criterion},
      {5, "Champagne bottle monodromy", 60.0, monodromy_criterion},
      {6, "Class S coadjoint data", 0.0, class_s_criterion},
      {7, "sl(2,R) isotropy normalizers", 0.0, sl2_criterion},
      {8, "Strata: flow invariance, freeness, plane-field witness", 0.0, strata_criterion},
      {9, "Torus function gap", 0.0, torus_gap_criterion},
      {10, "Oriented lines as a quotient", 0.0, lines_criterion},
      {11, "Bundle two-form: Maurer-Cartan, closedness, nondegeneracy", 0.0, forms_criterion},
  };
  return all;
}

CriterionResult run_criterion(const Criterion& c, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = c.run(seed);
  } catch (const std::exception& e) {
    r.pass = false;
    r.checks.push_back(std::string("FAIL exception: ") + e.what());
  }
  r.id = c.id;
  r.title = c.title;
  r.time_limit = c.time_limit;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (c.time_limit > 0.0) {
    const bool in_time = r.seconds < c.time_limit;
    r.checks.push_back(std::string(in_time ? "ok   " : "FAIL ") + "runtime under " +
                       std::to_string(static_cast<int>(c.time_limit)) + " s");
    r.pass = r.pass && in_time;
  }
  return r;
}

std::string summary_line(const CriterionResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.2f s)", r.seconds);
  return std::string(r.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(r.id) + ": " + r.title +
         " " + buf;
}

std::vector<CriterionResult> run_all(std::uint64_t seed, std::ostream& out, bool verbose) {
  std::vector<CriterionResult> results;
  for (const auto& c : criteria()) {
    results.push_back(run_criterion(c, seed));
    out << summary_line(results.back()) << '\n';
    if (verbose) {
      for (const auto& line : results.back().checks) out << "    " << line << '\n';
    }
    out.flush();
  }
  return results;
}

}  // namespace polite::acceptance
