// polite: command-line driver for the experiments.

#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace polite::cli;
  CLI::App app{"Polite group actions: periods, reduction, monodromy, strata and coadjoint data"};
  app.require_subcommand(1);

  CommonOptions common;
  app.add_flag("--json", common.json, "Print the result as JSON");
  app.add_option("--csv", common.csv, "Write plot-ready data to PATH");
  app.add_option_function<double>("--tol", [&](double v) { common.tol = v; }, "Pass tolerance");
  app.add_option("--seed", common.seed, "Random seed")->capture_default_str();
  app.add_option_function<int>("--samples", [&](int v) { common.samples = v; }, "Number of random samples")
      ->check(CLI::PositiveNumber);

  std::function<polite::ExperimentResult()> job;

  auto* periods = app.add_subcommand("periods", "Duffing period: closed form, series and measurement");
  auto eps = std::make_shared<double>(0.1);
  periods->add_option("--eps", *eps, "Stiffness eps >= 0")->capture_default_str();
  periods->callback([&, eps] { job = [&, eps] { return run_periods(common, *eps); }; });

  auto* mono = app.add_subcommand("monodromy", "Champagne bottle monodromy around a loop in (h, j)");
  auto mopt = std::make_shared<MonodromyOptions>();
  mono->add_option("--h0", mopt->h0)->capture_default_str();
  mono->add_option("--j0", mopt->j0)->capture_default_str();
  mono->add_option("--dh", mopt->dh, "Loop radius in h")->capture_default_str();
  mono->add_option("--dj", mopt->dj, "Loop radius in j")->capture_default_str();
  mono->add_option("--points", mopt->points, "Initial loop samples")->capture_default_str()->check(CLI::Range(3, 100000));
  mono->add_flag("--reverse", mopt->reverse, "Traverse the loop clockwise");
  mono->callback([&, mopt] { job = [&, mopt] { return run_monodromy(common, *mopt); }; });

  auto* reduce = app.add_subcommand("reduce", "Champagne bottle reduced dynamics and push-forward checks");
  auto rx0 = std::make_shared<std::vector<double>>(std::vector<double>{1.0, 0.0, 0.0, 0.3});
  auto rt = std::make_shared<double>(20.0);
  reduce->add_option("--x0", *rx0, "Initial state q1,q2,p1,p2")->delimiter(',');
  reduce->add_option("--t", *rt, "Final time")->capture_default_str()->check(CLI::NonNegativeNumber);
  reduce->callback([&, rx0, rt] { job = [&, rx0, rt] { return run_reduce(common, *rx0, *rt); }; });

  auto* recon = app.add_subcommand("reconstruct", "Reconstruct the full motion from the reduced one");
  auto csys = std::make_shared<std::string>("champagne");
  auto cx0 = std::make_shared<std::vector<double>>();
  auto ct = std::make_shared<double>(20.0);
  recon->add_option("--system", *csys, "champagne or harmonic")->capture_default_str();
  recon->add_option("--x0", *cx0, "Initial state")->delimiter(',');
  recon->add_option("--t", *ct, "Final time")->capture_default_str()->check(CLI::NonNegativeNumber);
  recon->callback([&, csys, cx0, ct] {
    job = [&, csys, cx0, ct] {
      std::vector<double> x0 = *cx0;
      if (x0.empty()) x0 = *csys == "harmonic" ? std::vector<double>{1.0, 0.5} : std::vector<double>{1.0, 0.0, 0.0, 0.3};
      return run_reconstruct(common, *csys, x0, *ct);
    };
  });

  auto* strata = app.add_subcommand("strata", "Orbit-type strata and politeness report");
  auto ssys = std::make_shared<std::string>("torus");
  strata->add_option("--system", *ssys,
                     "harmonic, stiff:EPS, champagne, torus, plane-field, free:N or rotation")
      ->capture_default_str();
  strata->callback([&, ssys] { job = [&, ssys] { return run_strata(common, *ssys); }; });

  auto* coad = app.add_subcommand("coadjoint", "Isotropy, normalizer and quotient of a coadjoint point");
  auto copt = std::make_shared<CoadjointOptions>();
  coad->add_option("--algebra", copt->algebra, "classS, sl2 or a JSON algebra file")->capture_default_str();
  coad->add_option("--n", copt->n, "Ideal dimension for classS")->capture_default_str()->check(CLI::Range(1, 64));
  coad->add_option("--mu", copt->mu, "Covector components")->delimiter(',');
  coad->callback([&, copt] { job = [&, copt] { return run_coadjoint(common, *copt); }; });

  auto* lines = app.add_subcommand("lines", "Oriented lines as the free-particle quotient");
  auto ln = std::make_shared<int>(3);
  lines->add_option("--n", *ln, "Ambient dimension")->capture_default_str()->check(CLI::Range(2, 32));
  lines->callback([&, ln] { job = [&, ln] { return run_lines(common, *ln); }; });

  auto* forms = app.add_subcommand("forms-check", "Maurer-Cartan, closedness and nondegeneracy of the bundle form");
  auto fh = std::make_shared<double>(1e-4);
  forms->add_option("--step", *fh, "Finite-difference step")->capture_default_str()->check(CLI::PositiveNumber);
  forms->callback([&, fh] { job = [&, fh] { return run_forms_check(common, *fh); }; });

  auto* self = app.add_subcommand("selftest", "Run every acceptance criterion");
  self->callback([&] { job = [&] { return run_selftest(common, common.json); }; });

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  try {
    return emit(common, job());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
