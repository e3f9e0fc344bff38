#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "acceptance.hpp"
#include "polite/elliptic.hpp"
#include "polite/error.hpp"
#include "polite/flows.hpp"
#include "polite/forms.hpp"
#include "polite/lie.hpp"
#include "polite/lines.hpp"
#include "polite/reduction.hpp"
#include "polite/strata.hpp"
#include "polite/systems.hpp"

namespace polite::cli {

namespace {

using nlohmann::json;

json to_json_vector(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json_matrix(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json_vector(m.row(i).transpose()));
  return rows;
}

State to_state(const std::vector<double>& v) {
  State x(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x[static_cast<Eigen::Index>(i)] = v[i];
  return x;
}

void write_csv_file(const std::string& path, const Trajectory& traj) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(traj, out);
}

// One-period trajectory of the Duffing oscillator starting at (1, 0).
EventSpec velocity_down_crossing() {
  EventSpec ev;
  ev.direction = -1;
  ev.event_function = [](const State& x) { return x[1]; };
  return ev;
}

}  // namespace

ExperimentResult run_periods(const CommonOptions& opt, double eps) {
  const elliptic::StiffnessParam e(eps);
  const double tol = opt.tol_or(1e-8);
  ExperimentResult r;
  r.name = "periods";
  r.parameters = {{"eps", eps}, {"tol", tol}};
  const double closed = elliptic::duffing_period(e);
  const double series = elliptic::duffing_period_series(e, 2);
  const SystemSpec sys = make_stiff_spring(eps);
  State x0(2);
  x0 << 1.0, 0.0;
  const double measured = first_return(sys, x0, velocity_down_crossing(), 1e-13).time;
  const double bound = 5.0 * eps * eps * eps;
  r.values = {{"tau_closed_form", closed},
              {"tau_series", series},
              {"tau_measured", measured},
              {"modulus", elliptic::duffing_modulus(e)},
              {"delta_measured_closed", measured - closed},
              {"delta_series_closed", series - closed},
              {"delta_series_measured", series - measured},
              {"series_bound", bound},
              {"series_within_bound", std::abs(series - closed) <= bound}};
  r.tolerances = {{"measured_vs_closed_relative", tol}, {"series_vs_closed", bound}};
  r.pass = std::abs(measured - closed) / closed <= tol;
  if (!opt.csv.empty()) write_csv_file(opt.csv, integrate(sys, x0, closed, 1e-12));
  return r;
}

ExperimentResult run_monodromy(const CommonOptions& opt, const MonodromyOptions& m) {
  const double tol = opt.tol_or(1e-2);
  ExperimentResult r;
  r.name = "monodromy";
  r.parameters = {{"h0", m.h0}, {"j0", m.j0}, {"dh", m.dh}, {"dj", m.dj}, {"points", m.points},
                  {"reverse", m.reverse}, {"tol", tol}};
  const auto res = reduction::monodromy(reduction::elliptic_loop(m.h0, m.j0, m.dh, m.dj, m.points, m.reverse));
  r.values = res.to_json();
  r.values["determinant"] = res.matrix.determinant();
  r.values["trace"] = res.matrix.trace();
  r.tolerances = {{"closure_residual", tol}, {"snap_distance", 0.25}};
  r.pass = res.matrix.determinant() == 1 && res.closure_residual <= tol;
  if (!opt.csv.empty()) {
    std::ofstream out(opt.csv);
    out << "h,j\n";
    for (const auto& [h, j] : res.loop) out << format_double(h) << ',' << format_double(j) << '\n';
  }
  return r;
}

ExperimentResult run_reduce(const CommonOptions& opt, const std::vector<double>& x0v, double t_final) {
  const double tol = opt.tol_or(1e-6);
  const int samples = opt.samples_or(100);
  ExperimentResult r;
  r.name = "reduce";
  r.parameters = {{"x0", x0v}, {"t", t_final}, {"tol", tol}, {"samples", samples}, {"seed", opt.seed}};
  const auto chart = reduction::champagne_chart();
  const SystemSpec sys = make_champagne();
  const State x0 = to_state(x0v);
  if (x0.size() != 4) throw DomainError("x0 needs 4 components (q1, q2, p1, p2)");

  Rng rng(opt.seed);
  double push = 0.0;
  for (int k = 0; k < samples; ++k) {
    const State x = random_state(4, 1.5, rng);
    const auto v = reduction::reduced_field(chart, reduction::project(chart, x));
    for (std::size_t i = 0; i < chart.invariants.size(); ++i) {
      const double d = lie_derivative(chart.invariants[i].fn, sys.vector_field, x);
      push = std::max(push, std::abs(d - v[static_cast<Eigen::Index>(i)]));
    }
  }
  const auto reduced = reduction::integrate_reduced(chart, reduction::project(chart, x0), t_final);
  const Trajectory full = integrate(sys, x0, t_final, 1e-12);
  double commute = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    commute = std::max(commute, (reduction::project(chart, full.states[i]) - reduced.at(full.times[i]))
                                    .cwiseAbs()
                                    .maxCoeff());
  }
  const double relation = reduction::max_relation_residual(chart, reduced);
  r.values = {{"initial_invariants", to_json_vector(reduced.invariant_states.front())},
              {"final_invariants", to_json_vector(reduced.invariant_states.back())},
              {"j", reduced.j_value},
              {"steps", reduced.times.size()},
              {"push_forward_residual", push},
              {"commutation_error", commute},
              {"relation_residual", relation}};
  r.tolerances = {{"push_forward", tol}, {"commutation", tol}, {"relation", 1e-8}};
  r.pass = push <= tol && commute <= tol && relation <= 1e-8;
  if (!opt.csv.empty()) write_csv_file(opt.csv, reduced.dense);
  return r;
}

ExperimentResult run_reconstruct(const CommonOptions& opt, const std::string& system,
                                 const std::vector<double>& x0v, double t_final) {
  const double tol = opt.tol_or(1e-5);
  ExperimentResult r;
  r.name = "reconstruct";
  r.parameters = {{"system", system}, {"x0", x0v}, {"t", t_final}, {"tol", tol}};
  reduction::ReductionChart chart;
  if (system == "champagne") {
    chart = reduction::champagne_chart();
  } else if (system == "harmonic") {
    chart = reduction::harmonic_chart();
  } else {
    throw DomainError("reconstruction is available for champagne and harmonic");
  }
  const SystemSpec sys = make_system(system);
  const State x0 = to_state(x0v);
  if (x0.size() != sys.dimension) throw DomainError("x0 has the wrong dimension for " + system);
  const auto reduced = reduction::integrate_reduced(chart, reduction::project(chart, x0), t_final);
  std::vector<double> times;
  for (int k = 0; k <= 400; ++k) times.push_back(t_final * k / 400.0);
  const Trajectory rec = reduction::reconstruct(chart, reduced, x0, times);
  double err = 0.0, proj = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const State direct = flow_map(sys, x0, times[i], 1e-12);
    err = std::max(err, (rec.states[i] - direct).cwiseAbs().maxCoeff());
    proj = std::max(proj, (reduction::project(chart, rec.states[i]) - reduced.at(times[i])).cwiseAbs().maxCoeff());
  }
  const auto phase = reduction::reconstructed_phase(chart, reduced, {t_final});
  r.values = {{"final_state", to_json_vector(rec.states.back())},
              {"phase_advance", phase.front()},
              {"sup_error_vs_direct", err},
              {"projection_error", proj}};
  r.tolerances = {{"sup_error", tol}, {"projection", 1e-6}};
  r.pass = err <= tol && proj <= 1e-6;
  if (!opt.csv.empty()) write_csv_file(opt.csv, rec);
  return r;
}

ExperimentResult run_strata(const CommonOptions& opt, const std::string& system) {
  const int samples = opt.samples_or(20);
  const double tol = opt.tol_or(1e-8);
  ExperimentResult r;
  r.name = "strata";
  r.parameters = {{"system", system}, {"samples", samples}, {"seed", opt.seed}, {"tol", tol}};
  const SystemSpec sys = make_system(system);
  Rng rng(opt.seed);
  const auto report = strata::politeness_report(sys, rng, samples);
  r.values = report.to_json();
  bool ok = true;
  json checks = json::array();
  for (const auto& s : strata::enumerate_strata(sys)) {
    const auto fi = strata::check_flow_invariance(s, tol, samples, rng);
    const auto ni = strata::check_normalizer_invariance(s, samples, rng, tol);
    checks.push_back({{"isotropy", s.isotropy_label},
                      {"flow_invariance_residual", fi.max_residual},
                      {"flow_invariant_drift", fi.max_invariant_deviation},
                      {"normalizer_residual", ni.max_residual},
                      {"normalizer_invariant_drift", ni.max_invariant_deviation}});
    ok = ok && fi.ok && ni.ok;
  }
  for (const auto& s : report.strata) ok = ok && s.free && s.flow_invariant;
  r.values["checks"] = checks;
  r.tolerances = {{"membership", tol}, {"freeness_displacement", 1e-6}};
  r.pass = ok;
  return r;
}

ExperimentResult run_coadjoint(const CommonOptions& opt, const CoadjointOptions& c) {
  const double tol = opt.tol_or(1e-10);
  ExperimentResult r;
  r.name = "coadjoint";
  lie::AlgebraSpec g;
  if (c.algebra == "classS") {
    g = lie::make_class_S(c.n);
  } else if (c.algebra == "sl2") {
    g = lie::make_sl2();
  } else {
    std::ifstream in(c.algebra);
    if (!in) throw DomainError("unknown algebra '" + c.algebra + "' (classS, sl2 or a JSON file)");
    g = lie::AlgebraSpec::from_json(json::parse(in));
  }
  std::vector<double> mu = c.mu;
  if (mu.empty()) {
    mu.assign(static_cast<std::size_t>(g.dimension()), 0.0);
    mu[0] = 1.0;
  }
  if (static_cast<int>(mu.size()) != g.dimension()) {
    throw DomainError("mu needs " + std::to_string(g.dimension()) + " components");
  }
  r.parameters = {{"algebra", g.name()}, {"n", c.n}, {"mu", mu}, {"tol", tol}};
  const lie::Covector m{to_state(mu)};
  const auto iso = lie::isotropy_algebra(g, m);
  const auto nor = lie::normalizer_algebra(g, iso);
  const auto quo = lie::quotient_algebra(nor, iso);
  json generators = json::array();
  for (int i = 0; i < g.dimension(); ++i) {
    generators.push_back({{"xi", g.labels()[static_cast<std::size_t>(i)]},
                          {"velocity", to_json_vector(lie::coadjoint_generator(g, g.basis_vector(i), m).components)}});
  }
  r.values = {{"labels", g.labels()},
              {"generators", generators},
              {"orbit_dimension", lie::orbit_dimension(g, m)},
              {"isotropy_dimension", iso.dimension()},
              {"isotropy_basis", to_json_matrix(iso.basis.transpose())},
              {"normalizer_dimension", nor.dimension()},
              {"normalizer_basis", to_json_matrix(nor.basis.transpose())},
              {"quotient", quo.to_json()},
              {"quotient_solvable", lie::is_solvable(quo)},
              {"quotient_abelian", lie::is_abelian(quo)}};
  if (g.name() == "sl2") r.values["sl2_type"] = lie::to_string(lie::sl2_classify(g, m));
  const double closure = std::max(iso.closure_residual(), nor.closure_residual());
  const double jacobi = quo.dimension() > 0 ? quo.jacobi_residual() : 0.0;
  r.values["closure_residual"] = closure;
  r.values["quotient_jacobi_residual"] = jacobi;
  r.tolerances = {{"closure", tol}, {"jacobi", tol}};
  r.pass = closure <= tol && jacobi <= tol && nor.contains(iso);
  return r;
}

ExperimentResult run_lines(const CommonOptions& opt, int n) {
  const int samples = opt.samples_or(50);
  const double tol = opt.tol_or(1e-10);
  ExperimentResult r;
  r.name = "lines";
  r.parameters = {{"n", n}, {"samples", samples}, {"seed", opt.seed}, {"tol", tol}};
  if (n < 2) throw DomainError("lines need n >= 2");
  Rng rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double flow_res = 0.0, eq_res = 0.0, stab_res = 0.0;
  int rank_min = 2 * n, rank_max = 0;
  json examples = json::array();
  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXd q(n), p(n), b(n), w(n * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
      q[i] = gauss(rng);
      p[i] = gauss(rng);
      b[i] = gauss(rng);
    }
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = gauss(rng);
    p.normalize();
    const auto l = lines::reduce_line(q, p);
    for (double t : {-3.0, 0.5, 7.0}) flow_res = std::max(flow_res, lines::reduce_line(q + t * p, p).distance(l));
    const Eigen::MatrixXd a = rotation_from_skew(w, n);
    State x(2 * n);
    x << q, p;
    const State y = se_act(a, b, x);
    eq_res = std::max(eq_res, lines::reduce_line(y.head(n), y.tail(n)).distance(lines::act_se_n(a, b, l)));
    for (const auto& s : lines::stabilizer_witness(l)) stab_res = std::max(stab_res, s.residual / std::max(1.0, s.s));
    const int rank = lines::quotient_chart_rank(q, p);
    rank_min = std::min(rank_min, rank);
    rank_max = std::max(rank_max, rank);
    if (k < 3) examples.push_back(l.to_json());
  }
  r.values = {{"flow_invariance_residual", flow_res},
              {"equivariance_residual", eq_res},
              {"stabilizer_residual", stab_res},
              {"quotient_rank_min", rank_min},
              {"quotient_rank_max", rank_max},
              {"expected_rank", 2 * n - 2},
              {"example_lines", examples}};
  r.tolerances = {{"flow", 1e-12}, {"equivariance", tol}, {"stabilizer_relative", 1e-12}};
  r.pass = flow_res <= 1e-12 && eq_res <= tol && stab_res <= 1e-12 && rank_min == 2 * n - 2 &&
           rank_max == 2 * n - 2;
  return r;
}

ExperimentResult run_forms_check(const CommonOptions& opt, double h) {
  const int samples = opt.samples_or(100);
  const double tol = opt.tol_or(1e-6);
  ExperimentResult r;
  r.name = "forms-check";
  r.parameters = {{"h", h}, {"samples", samples}, {"seed", opt.seed}, {"tol", tol}};
  const double mc = forms::maurer_cartan_selftest(h, 20, opt.seed);
  forms::Quaternion g0(1.0, 0.3, -0.2, 0.1);
  g0.normalize();
  json convergence = json::array();
  for (double step : {4e-2, 2e-2, 1e-2, 5e-3}) {
    convergence.push_back({step, forms::maurer_cartan_residual(g0, step)});
  }
  Rng rng(opt.seed);
  const auto profile = forms::standard_profile();
  double closed = 0.0, pf_min = std::numeric_limits<double>::infinity();
  int rank_min = 6;
  for (int k = 0; k < samples; ++k) {
    const auto pt = forms::random_frame_point(rng);
    const auto w = forms::omega_at(pt, profile);
    closed = std::max(closed, forms::check_closed(pt, profile, h));
    pf_min = std::min(pf_min, std::abs(forms::pfaffian(w)));
    rank_min = std::min(rank_min, forms::form_rank(w));
  }
  r.values = {{"maurer_cartan_residual", mc},
              {"maurer_cartan_convergence", convergence},
              {"closedness_residual", closed},
              {"pfaffian_min_abs", pf_min},
              {"rank_min", rank_min}};
  r.tolerances = {{"maurer_cartan", tol}, {"closedness", tol}, {"pfaffian_floor", 1e-6}};
  r.pass = mc <= tol && closed <= tol && pf_min > 1e-6 && rank_min == 6;
  return r;
}

ExperimentResult run_selftest(const CommonOptions& opt, bool quiet_text) {
  ExperimentResult r;
  r.name = "selftest";
  r.parameters = {{"seed", opt.seed}};
  std::ostringstream sink;
  std::ostream& out = quiet_text ? static_cast<std::ostream&>(sink) : std::cout;
  const auto results = acceptance::run_all(opt.seed, out, true);
  json arr = json::array();
  bool ok = true;
  int passed = 0;
  for (const auto& c : results) {
    arr.push_back(c.to_json());
    ok = ok && c.pass;
    passed += c.pass ? 1 : 0;
  }
  r.values = {{"criteria", arr}, {"passed", passed}, {"total", results.size()}};
  r.pass = ok;
  return r;
}

int emit(const CommonOptions& opt, const ExperimentResult& result) {
  if (opt.json) {
    std::cout << dump_json(result.to_json()) << '\n';
  } else if (result.name != "selftest") {
    std::cout << result.name << ": " << (result.pass ? "pass" : "FAIL") << '\n';
    for (auto it = result.values.begin(); it != result.values.end(); ++it) {
      std::cout << "  " << it.key() << " = " << dump_json(it.value(), 0) << '\n';
    }
  } else {
    std::cout << "selftest: " << (result.pass ? "pass" : "FAIL") << " ("
              << result.values["passed"].get<int>() << "/" << result.values["total"].get<int>() << ")\n";
  }
  return result.pass ? 0 : 1;
}

}  // namespace polite::cli
