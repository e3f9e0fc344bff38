#pragma once

// Experiment pipelines behind the `polite` subcommands.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polite/report.hpp"

namespace polite::cli {

struct CommonOptions {
  bool json = false;
  std::string csv;
  std::optional<double> tol;
  std::uint64_t seed = 42;
  std::optional<int> samples;

  double tol_or(double fallback) const { return tol.value_or(fallback); }
  int samples_or(int fallback) const { return samples.value_or(fallback); }
};

ExperimentResult run_periods(const CommonOptions& opt, double eps);

struct MonodromyOptions {
  double h0 = 0.0, j0 = 0.0, dh = 0.1, dj = 0.05;
  int points = 16;
  bool reverse = false;
};
ExperimentResult run_monodromy(const CommonOptions& opt, const MonodromyOptions& m);

ExperimentResult run_reduce(const CommonOptions& opt, const std::vector<double>& x0, double t_final);
ExperimentResult run_reconstruct(const CommonOptions& opt, const std::string& system,
                                 const std::vector<double>& x0, double t_final);
ExperimentResult run_strata(const CommonOptions& opt, const std::string& system);

struct CoadjointOptions {
  std::string algebra = "classS";
  int n = 2;
  std::vector<double> mu;
};
ExperimentResult run_coadjoint(const CommonOptions& opt, const CoadjointOptions& c);

ExperimentResult run_lines(const CommonOptions& opt, int n);
ExperimentResult run_forms_check(const CommonOptions& opt, double h);
ExperimentResult run_selftest(const CommonOptions& opt, bool quiet_text);

/// Writes the result as JSON or as indented text; returns the exit status.
int emit(const CommonOptions& opt, const ExperimentResult& result);

}  // namespace polite::cli
