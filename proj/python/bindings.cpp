// Python bindings: the numerical primitives take and return numpy arrays,
// the experiment pipelines return the same documents as the CLI.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "acceptance.hpp"
#include "commands.hpp"
#include "polite/elliptic.hpp"
#include "polite/error.hpp"
#include "polite/flows.hpp"
#include "polite/forms.hpp"
#include "polite/lie.hpp"
#include "polite/lines.hpp"
#include "polite/reduction.hpp"
#include "polite/report.hpp"
#include "polite/strata.hpp"
#include "polite/systems.hpp"

namespace py = pybind11;
using namespace polite;

namespace {

py::object to_python(const nlohmann::json& doc) {
  return py::module_::import("json").attr("loads")(dump_json(doc, 0));
}

nlohmann::json from_python(const py::object& obj) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

Eigen::MatrixXd rows_of(const std::vector<State>& states) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(states.size()), states.empty() ? 0 : states.front().size());
  for (std::size_t i = 0; i < states.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = states[i].transpose();
  return m;
}

lie::AlgebraSpec algebra(const std::string& name, int n) {
  if (name == "classS") return lie::make_class_S(n);
  if (name == "sl2") return lie::make_sl2();
  throw DomainError("unknown algebra '" + name + "' (expected classS or sl2)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Polite group actions: examples, strata, reduction and monodromy";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);
  py::register_exception<NoCrossingError>(m, "NoCrossingError", PyExc_RuntimeError);
  py::register_exception<ContinuationError>(m, "ContinuationError", PyExc_RuntimeError);

  m.def("complete_K", py::overload_cast<double>(&elliptic::complete_K), py::arg("k"));
  m.def("jacobi_cn", py::overload_cast<double, double>(&elliptic::jacobi_cn), py::arg("t"), py::arg("k"));
  m.def("duffing_period", py::overload_cast<double>(&elliptic::duffing_period), py::arg("eps"));
  m.def(
      "duffing_period_series",
      [](double eps, int order) { return elliptic::duffing_period_series(elliptic::StiffnessParam(eps), order); },
      py::arg("eps"), py::arg("order") = 2);

  m.def(
      "integrate",
      [](const std::string& system, const State& x0, double t, double tol) {
        const Trajectory tr = integrate(make_system(system), x0, t, tol);
        return py::make_tuple(tr.times, rows_of(tr.states));
      },
      py::arg("system"), py::arg("x0"), py::arg("t"), py::arg("tol") = 1e-10,
      "Accepted step times and states of a catalogued system.");
  m.def(
      "flow_map",
      [](const std::string& system, const State& x0, double t, double tol) {
        return flow_map(make_system(system), x0, t, tol);
      },
      py::arg("system"), py::arg("x0"), py::arg("t"), py::arg("tol") = 1e-12);

  m.def("champagne_project", [](const State& x) { return reduction::project(reduction::champagne_chart(), x); },
        py::arg("x"), "(sigma1, sigma2, sigma3, j) of a point (q1, q2, p1, p2).");
  m.def(
      "champagne_reduced_field",
      [](const reduction::InvariantState& s) { return reduction::reduced_field(reduction::champagne_chart(), s); },
      py::arg("s"));
  m.def(
      "champagne_reconstruct",
      [](const State& x0, const std::vector<double>& times) {
        if (times.empty()) throw DomainError("times must be nonempty");
        const auto chart = reduction::champagne_chart();
        const double t_final = *std::max_element(times.begin(), times.end());
        const auto red = reduction::integrate_reduced(chart, reduction::project(chart, x0), t_final);
        const Trajectory rec = reduction::reconstruct(chart, red, x0, times);
        std::vector<State> reduced;
        for (double t : times) reduced.push_back(red.at(t));
        return py::make_tuple(rows_of(rec.states), rows_of(reduced));
      },
      py::arg("x0"), py::arg("times"),
      "Reconstructed full states and the reduced states at the given times.");
  m.def(
      "champagne_fiber",
      [](double h, double j) {
        const auto f = reduction::champagne_fiber(h, j);
        py::dict d;
        d["period"] = f.period;
        d["rotation"] = f.rotation;
        d["lattice"] = Eigen::MatrixXd(f.lattice);
        return d;
      },
      py::arg("h"), py::arg("j"));
  m.def(
      "monodromy",
      [](double h0, double j0, double dh, double dj, int points, bool reverse) {
        return to_python(reduction::monodromy(reduction::elliptic_loop(h0, j0, dh, dj, points, reverse)).to_json());
      },
      py::arg("h0") = 0.0, py::arg("j0") = 0.0, py::arg("dh") = 0.1, py::arg("dj") = 0.05,
      py::arg("points") = 16, py::arg("reverse") = false);
  m.def("torus_function_gap", [] { return to_python(reduction::torus_function_gap_demo().to_json()); });

  m.def(
      "politeness_report",
      [](const std::string& system, std::uint64_t seed, int samples) {
        Rng rng(seed);
        return to_python(strata::politeness_report(make_system(system), rng, samples).to_json());
      },
      py::arg("system"), py::arg("seed") = 42, py::arg("samples") = 20);

  m.def(
      "coadjoint_generator",
      [](const std::string& name, int n, const Eigen::VectorXd& xi, const Eigen::VectorXd& mu) {
        return lie::coadjoint_generator(algebra(name, n), xi, lie::Covector{mu}).components;
      },
      py::arg("algebra"), py::arg("n"), py::arg("xi"), py::arg("mu"));
  m.def(
      "isotropy_basis",
      [](const std::string& name, int n, const Eigen::VectorXd& mu) {
        return lie::isotropy_algebra(algebra(name, n), lie::Covector{mu}).basis;
      },
      py::arg("algebra"), py::arg("n"), py::arg("mu"));
  m.def(
      "orbit_dimension",
      [](const std::string& name, int n, const Eigen::VectorXd& mu) {
        return lie::orbit_dimension(algebra(name, n), lie::Covector{mu});
      },
      py::arg("algebra"), py::arg("n"), py::arg("mu"));
  m.def(
      "sl2_classify",
      [](const Eigen::VectorXd& mu) { return lie::to_string(lie::sl2_classify(lie::make_sl2(), lie::Covector{mu})); },
      py::arg("mu"));
  m.def(
      "algebra_residuals",
      [](const py::object& doc) {
        const auto alg = lie::AlgebraSpec::from_json(from_python(doc));
        return py::make_tuple(alg.antisymmetry_residual(), alg.jacobi_residual());
      },
      py::arg("doc"), "Validates an algebra document; returns (antisymmetry, Jacobi) residuals.");

  m.def(
      "reduce_line",
      [](const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
        const auto l = lines::reduce_line(q, p);
        return py::make_tuple(l.u, l.m);
      },
      py::arg("q"), py::arg("p"), "(u, m) of the oriented line through q with direction p.");
  m.def(
      "act_se_n",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& u, const Eigen::VectorXd& mm) {
        lines::OrientedLine l{u, mm};
        const auto out = lines::act_se_n(a, b, l);
        return py::make_tuple(out.u, out.m);
      },
      py::arg("a"), py::arg("b"), py::arg("u"), py::arg("m"));
  m.def("quotient_chart_rank", [](const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
    return lines::quotient_chart_rank(q, p);
  }, py::arg("q"), py::arg("p"));

  m.def(
      "omega",
      [](const Eigen::Vector3d& x, const Eigen::Vector4d& g) {
        return Eigen::MatrixXd(forms::omega_at(forms::FramePoint(x, g), forms::standard_profile()));
      },
      py::arg("x"), py::arg("g"), "6x6 matrix of the bundle two-form with z(x) = x / sqrt(1 + x^2).");
  m.def(
      "pfaffian",
      [](const Eigen::MatrixXd& w) {
        if (w.rows() != 6 || w.cols() != 6) throw DomainError("pfaffian needs a 6x6 matrix");
        return forms::pfaffian(forms::TwoFormMatrix(w));
      },
      py::arg("w"));
  m.def(
      "check_closed",
      [](const Eigen::Vector3d& x, const Eigen::Vector4d& g, double h) {
        return forms::check_closed(forms::FramePoint(x, g), forms::standard_profile(), h);
      },
      py::arg("x"), py::arg("g"), py::arg("h") = 1e-4);
  m.def("maurer_cartan_selftest", &forms::maurer_cartan_selftest, py::arg("h") = 1e-4,
        py::arg("random_points") = 20, py::arg("seed") = 42);

  m.def(
      "periods",
      [](double eps) { return to_python(cli::run_periods({}, eps).to_json()); }, py::arg("eps"));
  m.def(
      "selftest",
      [](std::uint64_t seed) {
        cli::CommonOptions opt;
        opt.seed = seed;
        return to_python(cli::run_selftest(opt, true).to_json());
      },
      py::arg("seed") = 42, "Runs every acceptance criterion; same document as `polite selftest --json`.");
}
