#pragma once

// Finite hidden-variable models of the two-setting, two-outcome Bell experiment and the audit
// engine for the locality conditions: outcome independence, parameter independence,
// factorizability and no-conspiracy, plus observable averaging and CHSH.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kentsim/toyqm.hpp"

namespace kentsim::locality {

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr double kNormalizationTolerance = 1e-12;

/// Setting pairs (a_i, b_j), indexed 2*(i-1) + (j-1): a1b1, a1b2, a2b1, a2b2.
inline constexpr std::size_t kSettingPairs = 4;
/// Outcome pairs (A, B), indexed ++, +-, -+, --.
inline constexpr std::size_t kOutcomePairs = 4;

constexpr std::size_t pair_index(int left_setting, int right_setting) {
  return static_cast<std::size_t>(2 * (left_setting - 1) + (right_setting - 1));
}
constexpr std::size_t outcome_index(int A, int B) {
  return static_cast<std::size_t>((A > 0 ? 0 : 2) + (B > 0 ? 0 : 1));
}
/// Outcome value (+1 / -1) of the left or right wing for an outcome-pair index.
constexpr int left_outcome(std::size_t o) { return o < 2 ? +1 : -1; }
constexpr int right_outcome(std::size_t o) { return o % 2 == 0 ? +1 : -1; }

std::string_view pair_name(std::size_t p);     ///< "a1b1" ...
std::string_view outcome_name(std::size_t o);  ///< "++" ...

/// P(A, B) over the four outcome pairs.
using JointTable = std::array<double, kOutcomePairs>;

struct FiniteHVModel {
  std::vector<std::string> lambdas;
  /// Measure over lambdas for each setting pair.
  std::array<std::vector<double>, kSettingPairs> measures;
  /// cond[lambda][pair] = pr_{lambda, a_i, b_j}(A & B).
  std::vector<std::array<JointTable, kSettingPairs>> cond;

  std::size_t size() const { return lambdas.size(); }
  double joint(std::size_t lambda, std::size_t pair, int A, int B) const {
    return cond[lambda][pair][outcome_index(A, B)];
  }
};

/// Throws ModelError on size mismatches, duplicate or empty lambda ids, or non-finite entries.
void check_structure(const FiniteHVModel& m);

/// Non-negativity and unit sums of every measure and every conditional table.
bool check_normalization(const FiniteHVModel& m, double tol = kNormalizationTolerance);

struct CheckResult {
  bool pass = false;
  double residual = 0.0;
};

/// max |p(X&Y) - p(X) p(Y)| with both marginals taken from the same joint.
CheckResult check_oi(const FiniteHVModel& m, double tol = kDefaultTolerance);
/// max change of either wing's marginal when only the distant setting changes.
CheckResult check_pi(const FiniteHVModel& m, double tol = kDefaultTolerance);
/// max |p(X&Y) - p_x(X) p_y(Y)|; single-wing probabilities are marginals under the reference
/// distant setting (b1 for the left wing, a1 for the right wing).
CheckResult check_factorizability(const FiniteHVModel& m, double tol = kDefaultTolerance);
/// max total-variation distance between the four per-setting measures.
CheckResult check_no_conspiracy(const FiniteHVModel& m, double tol = kDefaultTolerance);

struct AuditReport {
  bool normalization_ok = false;
  double oi_residual = 0.0;
  double pi_residual = 0.0;
  double fact_residual = 0.0;
  double no_conspiracy_residual = 0.0;
  double tolerance = kDefaultTolerance;

  bool oi_pass() const { return oi_residual <= tolerance; }
  bool pi_pass() const { return pi_residual <= tolerance; }
  bool fact_pass() const { return fact_residual <= tolerance; }
  bool no_conspiracy_pass() const { return no_conspiracy_residual <= tolerance; }
};

AuditReport audit(const FiniteHVModel& m, double tol = kDefaultTolerance);

struct ObservableStats {
  std::array<JointTable, kSettingPairs> joint{};
  std::array<double, kSettingPairs> correlators{};
  /// |S_k| for the four CHSH forms; form k puts the minus sign on setting pair k.
  std::array<double, kSettingPairs> chsh_forms{};
  /// max over chsh_forms.
  double chsh = 0.0;
};

/// Averages the conditional tables over lambda with the per-setting measure.
ObservableStats observable_stats(const FiniteHVModel& m);

/// A model that satisfies OI, PI and no-conspiracy by construction: one shared random measure
/// and product tables built from wing-local distributions of the local setting only.
FiniteHVModel random_compliant_model(std::uint64_t seed, std::size_t n_lambda);

/// Lambda = each world of a Bell branch set, measure = Born weights on every setting slot,
/// deterministic tables (outer position <-> +1). Throws WrongScenario for non-Bell sets.
FiniteHVModel kentian_micro_model(const toyqm::BranchSet& bs);

/// OI residual of the Bell toy once the final condition is averaged out.
double kentian_observable_oi_residual(const toyqm::BranchSet& bs);

/// Single-lambda model with the given averaged joint tables (shared unit measure).
FiniteHVModel single_lambda_model(std::string id,
                                  const std::array<JointTable, kSettingPairs>& tables);

}  // namespace kentsim::locality
