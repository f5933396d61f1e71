#pragma once

// Reference physical models for the audit engine: a two-qubit Born-rule engine (singlet and
// arbitrary pure states) and a local deterministic model.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>

#include "kentsim/locality.hpp"

namespace kentsim::models {

/// Amplitudes indexed (s_L, s_R) in the order ++, +-, -+, --.
struct Ket4 {
  std::array<std::complex<double>, 4> amp{};

  double norm2() const;
};

/// Measurement direction in a fixed plane, as a Bloch-sphere angle in radians.
struct SpinSetting {
  double angle = 0.0;
};

struct BellSettings {
  SpinSetting a1, a2, b1, b2;

  /// a1 = 0, a2 = pi/2, b1 = pi/4, b2 = 3pi/4.
  static BellSettings canonical();
  SpinSetting left(int i) const { return i == 1 ? a1 : a2; }
  SpinSetting right(int j) const { return j == 1 ? b1 : b2; }
};

Ket4 singlet();
/// |chi_+(theta_L)> (x) |chi_+(theta_R)>.
Ket4 product_state(SpinSetting left, SpinSetting right);

/// |<chi_A(a) (x) chi_B(b) | psi>|^2 with chi_+(t) = (cos t/2, sin t/2),
/// chi_-(t) = (-sin t/2, cos t/2). Throws NotNormalized unless |psi| = 1 within 1e-12.
double joint_prob(const Ket4& psi, SpinSetting a, SpinSetting b, int A, int B);

/// All four outcome probabilities for one setting pair, in locality::outcome_index order.
locality::JointTable joint_table(const Ket4& psi, SpinSetting a, SpinSetting b);

/// Single lambda (the state itself), unit shared measure, Born tables at the four settings.
locality::FiniteHVModel hv_model_from_state(const Ket4& psi, const BellSettings& s,
                                            std::string id = "psi");
locality::FiniteHVModel singlet_hv_model(const BellSettings& s = BellSettings::canonical());

/// lambda on a uniform grid of [0, 2pi) (cell midpoints), A = sign cos(lambda - a),
/// B = -sign cos(lambda - b), sign(0) = +1. Throws ModelError for n_lambda < 4.
locality::FiniteHVModel local_deterministic_model(
    std::size_t n_lambda, const BellSettings& s = BellSettings::canonical());

/// Largest change of a wing's marginal when the distant setting changes, over n_pairs random
/// setting quadruples drawn from `seed`.
double no_signalling_residual(const Ket4& psi, std::size_t n_pairs = 100, std::uint64_t seed = 0);
bool no_signalling_check(const Ket4& psi, double tol);

}  // namespace kentsim::models
