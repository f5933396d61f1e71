#pragma once

// Pilot-wave toy of a Stern-Gerlach Bell experiment. Each particle's packet splits at its
// impulse time into two Gaussians moving apart with speed v; the (A, B) component carries the
// orthogonal spin state |A>|B> in the measured basis and the singlet amplitude
// <chi_A(a) chi_B(b)|singlet>. Positions follow the guidance equation
// dy/dt = Im(psi^dagger d psi) / psi^dagger psi, integrated with fixed-step RK4.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "kentsim/models.hpp"

namespace kentsim::models {

struct PWConfig {
  double sigma = 1.0;       ///< packet width
  double speed = 1.0;       ///< separation speed v of each half-packet
  double wavenumber = 1.0;  ///< phase gradient k; equals v in natural units
  double dt = 1e-3;
  double t_max = 10.0;
  double t_left = 0.0;      ///< impulse time of the left wing
  double t_right = 0.0;     ///< impulse time of the right wing

  /// Throws ConfigError; requires packets to separate by at least 5 sigma before t_max.
  void validate() const;
};

struct PWState {
  double y_left = 0.0;
  double y_right = 0.0;
  double t = 0.0;
};

struct Outcome {
  int left = 0;
  int right = 0;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct PWRun {
  std::vector<PWState> trajectory;
  Outcome outcome;
};

/// Velocity field of the toy; exposed for tests and benchmarks.
class GuidanceField {
 public:
  GuidanceField(const PWConfig& cfg, SpinSetting a, SpinSetting b);

  /// (dy_left/dt, dy_right/dt). Throws DegenerateNode when |psi|^2 < 1e-300.
  std::array<double, 2> velocity(double y_left, double y_right, double t) const;
  /// log |psi|^2 with unit-height Gaussians.
  double log_density(double y_left, double y_right, double t) const;
  /// Branch weights |<chi_A(a) chi_B(b)|singlet>|^2 in outcome_index order.
  const std::array<double, 4>& weights() const { return w_; }

 private:
  struct Local {
    double x;      // y v tau / sigma^2
    double q;      // exp(-2|x|)
    int sign;      // sign of x, +1 at zero
    double k;      // phase gradient, zero before the impulse
    double log_c;  // -(y^2 + v^2 tau^2) / (2 sigma^2)
  };
  Local local(double y, double t, double t_impulse) const;

  PWConfig cfg_;
  std::array<double, 4> w_{};
};

/// Integrates one trajectory to t_max and reads the outcome as the sign of each coordinate;
/// coordinates within 1e-6 of zero extend the horizon.
PWRun pw_evolve(const PWConfig& cfg, const PWState& initial, SpinSetting a, SpinSetting b);

/// Same outcome as pw_evolve without storing the trajectory. Stops early once both particles
/// are moving away from the origin inside a dominant branch, after which neither sign can
/// change.
Outcome pw_outcome(const PWConfig& cfg, const PWState& initial, SpinSetting a, SpinSetting b);

struct PWStats {
  SpinSetting a;
  SpinSetting b;
  double E = 0.0;
  double stderr_estimate = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_resolved = 0;
  std::size_t n_failed_nodes = 0;
  std::size_t n_unresolved = 0;
  /// Joint outcome counts in outcome_index order.
  std::array<std::size_t, 4> counts{};

  double frequency(std::size_t outcome) const;
  double left_plus_frequency() const { return frequency(0) + frequency(1); }
  double right_plus_frequency() const { return frequency(0) + frequency(2); }
};

/// Samples initial positions from |psi(., ., 0)|^2 (independent N(0, sigma^2) per coordinate),
/// one derived seed per sample, evolves each and averages A*B.
PWStats pw_equilibrium_stats(const PWConfig& cfg, SpinSetting a, SpinSetting b, std::size_t N,
                             std::uint64_t seed);

/// The initial configuration used for sample i of pw_equilibrium_stats.
PWState equilibrium_sample(const PWConfig& cfg, std::uint64_t seed, std::size_t i);

/// One lambda per initial configuration (uniform shared measure) with the deterministic outcome
/// tables of each setting pair.
locality::FiniteHVModel pilot_wave_hv_model(const PWConfig& cfg, const BellSettings& s,
                                            const std::vector<PWState>& initials);

struct PDWitness {
  PWState initial;
  Outcome with_b1;
  Outcome with_b2;
};

/// Initial configurations on an n x n grid of cell midpoints over [-half_width, half_width]^2
/// whose left outcome differs between right settings b1 and b2 (left setting a fixed).
/// Configurations hitting a node are skipped.
std::vector<PDWitness> parameter_dependence_witnesses(const PWConfig& cfg, SpinSetting a,
                                                      SpinSetting b1, SpinSetting b2,
                                                      std::size_t n, double half_width);

}  // namespace kentsim::models
