#pragma once

// Light-cone-conditioned energy-density beables for the toy universe.
//
// For an event y the selected final condition is restricted to registrations strictly outside
// the future light cone of y. A branch is consistent when its own restricted pattern matches
// the selected one (absence of a registration counts as information), and the beable is the
// Born-weighted expectation of the energy located at y over the consistent branches.

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "kentsim/spacetime.hpp"
#include "kentsim/toyqm.hpp"

namespace kentsim::beables {

using spacetime::Event;
using toyqm::BranchSet;
using toyqm::FinalCondition;
using toyqm::Registration;

struct Options {
  /// Spatial match tolerance for "energy at y" and registration-pattern equality.
  double delta_x = 1e-9;
  double interval_tol = spacetime::kIntervalTolerance;
};

struct ConditioningSet {
  Event apex;
  /// Registrations of the selected world usable at the apex.
  std::vector<Registration> selected;
  /// Usable registrations of every branch, indexed like bs.branches.
  std::vector<std::vector<Registration>> per_branch;
};

struct WeightedBranch {
  std::size_t index = 0;
  double weight = 0.0;
};

struct BeableSample {
  Event event;
  double value = 0.0;
};

struct GridSpec {
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t nt = 1;
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t nx = 1;
};

struct BeableField {
  std::vector<BeableSample> samples;  ///< row-major: t outer, x inner
  std::size_t nt = 0;
  std::size_t nx = 0;
  double dt = 0.0;
  double dx = 0.0;
  double delta_x = 0.0;

  const BeableSample& at(std::size_t it, std::size_t ix) const { return samples[it * nx + ix]; }
};

/// Restriction of the final data to the region outside y's closed future cone.
/// Throws ApexBeyondSurface unless y is strictly earlier than the late surface.
ConditioningSet conditioning_set(const FinalCondition& fc, const BranchSet& bs, const Event& y,
                                 const Options& opts = {});

/// Branches whose restricted registration pattern equals the selected one, with Born weights
/// renormalised over that set.
std::vector<WeightedBranch> consistent_branches(const BranchSet& bs, const FinalCondition& fc,
                                                const Event& y, const Options& opts = {});

/// Conditional expectation of the energy density at y (units of lump mass).
double beable_energy_density(const BranchSet& bs, const FinalCondition& fc, const Event& y,
                             const Options& opts = {});

/// Evaluates the beable on a rectangular lattice strictly inside 0 < t < T.
BeableField beable_field(const BranchSet& bs, const FinalCondition& fc, const GridSpec& grid,
                         const Options& opts = {});

/// Upper bound for any beable value: every lump mass plus every photon's energy.
double total_energy(const toyqm::ToyConfig& config);

/// CSV with header `t,x,value`, one row per lattice event in row-major (t, then x) order.
void write_csv(const BeableField& field, std::ostream& os);

struct RegimeRow {
  std::optional<double> t_lo;  ///< nullopt: unbounded below
  double t_hi = 0.0;
  double site = 0.0;
  double value = 0.0;
};

struct BoundaryRow {
  double t = 0.0;
  double site = 0.0;
  double value = 0.0;
};

/// Piecewise-constant beable history at the two lump sites of the single-system toy.
struct RegimeTable {
  int selected_component = 1;
  double T = 0.0;
  std::vector<double> boundaries;
  std::vector<RegimeRow> rows;
  /// Values exactly at each boundary instant, kept apart from the open regimes.
  std::vector<BoundaryRow> boundary_rows;
};

/// Runs the beable algorithm at the sites x1, x2 between the instants where some registration
/// crosses a site's light cone, and merges adjacent regimes with equal values.
/// Throws WrongScenario for a Bell configuration, ConfigError if the selected component has
/// zero amplitude.
RegimeTable regime_table(const toyqm::ToyConfig& config, int selected_component,
                         const Options& opts = {});

}  // namespace kentsim::beables
