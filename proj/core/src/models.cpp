#include "kentsim/models.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "kentsim/error.hpp"
#include "rng.hpp"

namespace kentsim::models {

namespace {

std::array<double, 2> spinor(double theta, int outcome) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  return outcome > 0 ? std::array<double, 2>{c, s} : std::array<double, 2>{-s, c};
}

}  // namespace

double Ket4::norm2() const {
  double n = 0.0;
  for (const auto& z : amp) {
    n += std::norm(z);
  }
  return n;
}

BellSettings BellSettings::canonical() {
  using std::numbers::pi;
  return BellSettings{{0.0}, {pi / 2}, {pi / 4}, {3 * pi / 4}};
}

Ket4 singlet() {
  const double r = 1.0 / std::numbers::sqrt2;
  return Ket4{{0.0, r, -r, 0.0}};
}

Ket4 product_state(SpinSetting left, SpinSetting right) {
  const auto l = spinor(left.angle, +1);
  const auto r = spinor(right.angle, +1);
  return Ket4{{l[0] * r[0], l[0] * r[1], l[1] * r[0], l[1] * r[1]}};
}

double joint_prob(const Ket4& psi, SpinSetting a, SpinSetting b, int A, int B) {
  if (std::abs(psi.norm2() - 1.0) > 1e-12) {
    throw NotNormalized("two-qubit state must have unit norm");
  }
  const auto l = spinor(a.angle, A);
  const auto r = spinor(b.angle, B);
  std::complex<double> overlap = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      overlap += l[i] * r[j] * psi.amp[2 * i + j];
    }
  }
  return std::norm(overlap);
}

locality::JointTable joint_table(const Ket4& psi, SpinSetting a, SpinSetting b) {
  locality::JointTable t{};
  for (std::size_t o = 0; o < locality::kOutcomePairs; ++o) {
    t[o] = joint_prob(psi, a, b, locality::left_outcome(o), locality::right_outcome(o));
  }
  return t;
}

locality::FiniteHVModel hv_model_from_state(const Ket4& psi, const BellSettings& s,
                                            std::string id) {
  std::array<locality::JointTable, locality::kSettingPairs> tables;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      tables[locality::pair_index(i, j)] = joint_table(psi, s.left(i), s.right(j));
    }
  }
  return locality::single_lambda_model(std::move(id), tables);
}

locality::FiniteHVModel singlet_hv_model(const BellSettings& s) {
  return hv_model_from_state(singlet(), s, "singlet");
}

locality::FiniteHVModel local_deterministic_model(std::size_t n_lambda, const BellSettings& s) {
  if (n_lambda < 4) {
    throw ModelError("local_deterministic_model needs n_lambda >= 4");
  }
  auto sign = [](double v) { return v >= 0.0 ? +1 : -1; };
  locality::FiniteHVModel m;
  const double w = 1.0 / static_cast<double>(n_lambda);
  m.measures.fill(std::vector<double>(n_lambda, w));
  m.cond.resize(n_lambda);
  for (std::size_t k = 0; k < n_lambda; ++k) {
    const double lambda =
        2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n_lambda);
    m.lambdas.push_back("lambda" + std::to_string(k));
    for (int i = 1; i <= 2; ++i) {
      for (int j = 1; j <= 2; ++j) {
        const int A = sign(std::cos(lambda - s.left(i).angle));
        const int B = -sign(std::cos(lambda - s.right(j).angle));
        locality::JointTable t{};
        t[locality::outcome_index(A, B)] = 1.0;
        m.cond[k][locality::pair_index(i, j)] = t;
      }
    }
  }
  return m;
}

double no_signalling_residual(const Ket4& psi, std::size_t n_pairs, std::uint64_t seed) {
  std::mt19937_64 rng(detail::mix_seed(seed));
  auto angle = [&] { return 2.0 * std::numbers::pi * detail::unit_double(rng); };
  double worst = 0.0;
  for (std::size_t n = 0; n < n_pairs; ++n) {
    const SpinSetting a{angle()}, a2{angle()}, b{angle()}, b2{angle()};
    for (int X : {+1, -1}) {
      const double left_b = joint_prob(psi, a, b, X, +1) + joint_prob(psi, a, b, X, -1);
      const double left_b2 = joint_prob(psi, a, b2, X, +1) + joint_prob(psi, a, b2, X, -1);
      const double right_a = joint_prob(psi, a, b, +1, X) + joint_prob(psi, a, b, -1, X);
      const double right_a2 = joint_prob(psi, a2, b, +1, X) + joint_prob(psi, a2, b, -1, X);
      worst = std::max({worst, std::abs(left_b - left_b2), std::abs(right_a - right_a2)});
    }
  }
  return worst;
}

bool no_signalling_check(const Ket4& psi, double tol) {
  return no_signalling_residual(psi) <= tol;
}

}  // namespace kentsim::models
