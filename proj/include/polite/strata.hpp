#pragma once

// Orbit-type strata P_H of the catalogued systems, supplied analytically, and
// numerical checks of their properties: flow invariance, freeness of the
// induced G_H = N^H / H action, and one-sided non-properness witnesses.

#include <Eigen/Dense>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polite/flows.hpp"
#include "polite/systems.hpp"

namespace polite::strata {

/// Axis-aligned compact box.
struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  bool contains(const State& x, double slack = 0.0) const;
  State center() const { return 0.5 * (lower + upper); }
  double radius() const { return 0.5 * (upper - lower).norm(); }
};

enum class ProperStatus { Compact, Proper, NotProper };

struct Stratum {
  std::shared_ptr<const SystemSpec> system;
  std::string isotropy_label;
  /// Dimension of each P_H (one H per value of `isotropy_invariant`).
  int chart_dimension = 0;
  /// Zero on the stratum, positive off it. Open strata report 1 off the set.
  ScalarFunction membership_residual;
  /// Identifies H within a family of strata (e.g. the period); must be preserved by the flow.
  std::function<Eigen::VectorXd(const State&)> isotropy_invariant;
  std::function<State(Rng&)> sample;
  /// Induced G_H action on P_H; one parameter per group dimension.
  GroupActionSpec gh_action;
  /// Distance on P_H used for freeness displacements.
  std::function<double(const State&, const State&)> distance;
  /// Applies a random element of N^H (H being the isotropy group of x) to x.
  std::function<State(const State&, Rng&)> normalizer_move;
  /// Non-identity elements when G_H is finite; freeness then checks exactly these.
  std::vector<Eigen::VectorXd> discrete_elements;
  /// The saturation P_(H) = G . P_H.
  std::function<bool(const State&)> saturation;
  /// Catalogue classification of the G_H action.
  ProperStatus analytic_properness = ProperStatus::Compact;
  /// Compact region inside the stratum for the properness probe (noncompact G_H only).
  std::optional<Box> probe_region;
  /// True when the stratum contains only fixed points of the flow.
  bool fixed_points = false;

  bool contains(const State& x, double tol = 0.0) const { return membership_residual(x) <= tol; }
};

/// Strata of a catalogued system (dispatch on system.name).
std::vector<Stratum> enumerate_strata(const SystemSpec& system);

struct FlowInvarianceReport {
  bool ok = true;
  int samples = 0;
  double max_residual = 0.0;            ///< membership residual along trajectories
  double max_invariant_deviation = 0.0; ///< drift of the isotropy invariant
  std::optional<State> counterexample;
  double counterexample_time = 0.0;
};

/// Integrate from `samples` stratum points over t in [0, t_final] and check membership.
FlowInvarianceReport check_flow_invariance(const Stratum& stratum, double tol, int samples,
                                           Rng& rng, double t_final = 10.0);

struct FreenessReport {
  bool free = true;
  int samples = 0;
  double min_displacement = 0.0;
  std::optional<State> counterexample;
  Eigen::VectorXd counterexample_params;
};

/// Sample non-identity group parameters (at least `identity_gap` from the
/// identity) and report the smallest displacement dist(g.p, p).
FreenessReport check_freeness(const Stratum& stratum, int samples, Rng& rng,
                              double identity_gap = 1e-3, double threshold = 1e-6);

struct NormalizerReport {
  bool ok = true;
  double max_residual = 0.0;
  double max_invariant_deviation = 0.0;
};

/// Sampled N^H moves keep points of P_H in P_H.
NormalizerReport check_normalizer_invariance(const Stratum& stratum, int samples, Rng& rng,
                                             double tol = 1e-8);

struct PropernessWitness {
  std::vector<double> times;
  std::vector<State> start_points;
  std::vector<State> end_points;
  double compact_radius = 0.0;
  State reference_start;
  State reference_end;
};

/// First return of each start point to the section through `reference`
/// orthogonal to the field there, counting only returns that land inside
/// `region`. Starts with no such return before the horizon give nullopt.
std::vector<std::optional<Crossing>> section_returns(const SystemSpec& system,
                                                     const State& reference,
                                                     const std::vector<State>& starts,
                                                     const Box& region, double horizon,
                                                     double tol = 1e-11);

/// Witness from an explicit start sequence converging to `reference`: every
/// start returns into the region and return times strictly increase. With
/// `require_growth`, increments must also not decay (last >= half the first),
/// which separates t -> infinity from convergent return times.
std::optional<PropernessWitness> witness_from_sequence(const SystemSpec& system,
                                                       const State& reference,
                                                       const std::vector<State>& starts,
                                                       const Box& region, double horizon,
                                                       bool require_growth = true);

/// Search for start sequences p_k -> p in the region (p on a grid, approach
/// distance halving) whose return times grow without bound. None is
/// inconclusive, never a proof of properness.
std::optional<PropernessWitness> properness_probe(const SystemSpec& system, const Box& region,
                                                  double horizon);

enum class ProbeOutcome { Polite, Witness, Inconclusive };
std::string to_string(ProbeOutcome p);

struct StratumSummary {
  std::string isotropy;
  int dimension = 0;
  bool free = false;
  double min_displacement = 0.0;
  bool flow_invariant = false;
  ProbeOutcome properness = ProbeOutcome::Inconclusive;
  std::optional<PropernessWitness> witness;
};

struct PolitenessReport {
  std::string system;
  std::vector<StratumSummary> strata;
  bool polite = false;
  nlohmann::json to_json() const;
};

PolitenessReport politeness_report(const SystemSpec& system, Rng& rng, int samples = 20);

/// Plane-field witness sequence p_n = (1/n, 0).
std::vector<State> plane_field_sequence(int n_first, int n_last);
/// Region [0, pi] x [-1, 1].
Box plane_field_region();

}  // namespace polite::strata
