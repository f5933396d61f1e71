#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <doctest.h>

#include "kentsim/error.hpp"
#include "kentsim/models.hpp"

using namespace kentsim::models;
namespace loc = kentsim::locality;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Explicit contraction <chi_A(a) (x) chi_B(b) | psi> over the 2x2 product basis.
double contraction(const Ket4& psi, double a, double b, int A, int B) {
  auto chi = [](double t, int s) {
    return s > 0 ? std::array<double, 2>{std::cos(t / 2), std::sin(t / 2)}
                 : std::array<double, 2>{-std::sin(t / 2), std::cos(t / 2)};
  };
  const auto l = chi(a, A);
  const auto r = chi(b, B);
  cd amp = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      amp += l[i] * r[j] * psi.amp[2 * i + j];
    }
  }
  return std::norm(amp);
}

Ket4 random_ket(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Ket4 k;
  double norm = 0;
  for (auto& c : k.amp) {
    c = {n(rng), n(rng)};
    norm += std::norm(c);
  }
  for (auto& c : k.amp) {
    c /= std::sqrt(norm);
  }
  return k;
}

double correlator(const loc::JointTable& t) { return t[0] - t[1] - t[2] + t[3]; }

}  // namespace

TEST_CASE("singlet state") {
  const Ket4 s = singlet();
  CHECK(s.norm2() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.amp[0] == cd(0));
  CHECK(s.amp[3] == cd(0));
  // swapping the qubits exchanges +- and -+ and negates the state
  CHECK(s.amp[2] == -s.amp[1]);
  for (double a : {0.0, 0.7, 2.0}) {
    CHECK(joint_prob(s, {a}, {a}, 1, 1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(joint_prob(s, {a}, {a}, -1, -1) <= 1e-15);
  }
  for (int A : {1, -1}) {
    for (int B : {1, -1}) {
      CHECK(joint_prob(s, {0.3}, {0.3 + kPi / 2}, A, B) == doctest::Approx(0.25).epsilon(1e-14));
    }
  }
}

TEST_CASE("joint_prob agrees with the explicit contraction and the closed form") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ang(-2 * kPi, 2 * kPi);
  for (int k = 0; k < 200; ++k) {
    const double a = ang(rng);
    const double b = ang(rng);
    const Ket4 psi = k % 2 == 0 ? singlet() : random_ket(static_cast<std::uint64_t>(k));
    double total = 0.0;
    for (int A : {1, -1}) {
      for (int B : {1, -1}) {
        const double p = joint_prob(psi, {a}, {b}, A, B);
        CHECK(std::abs(p - contraction(psi, a, b, A, B)) <= 1e-14);
        if (k % 2 == 0) {
          CHECK(std::abs(p - 0.25 * (1 - A * B * std::cos(a - b))) <= 1e-14);
        }
        total += p;
      }
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
  Ket4 bad = singlet();
  bad.amp[1] *= 1.01;
  CHECK_THROWS_AS(joint_prob(bad, {0}, {0}, 1, 1), kentsim::NotNormalized);
}

TEST_CASE("singlet correlator on a 100-point grid") {
  for (int i = 0; i < 100; ++i) {
    const double d = 2 * kPi * i / 100.0;
    const double E = correlator(joint_table(singlet(), {0.25}, {0.25 + d}));
    CHECK(std::abs(E + std::cos(d)) <= 1e-12);
  }
}

TEST_CASE("product states factorize") {
  const Ket4 up = product_state({0.0}, {0.0});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int k = 0; k < 50; ++k) {
    const double a = ang(rng), b = ang(rng);
    const auto t = joint_table(up, {a}, {b});
    const double pl = t[0] + t[1];
    const double pr = t[0] + t[2];
    CHECK(std::abs(t[0] - pl * pr) <= 1e-14);
    CHECK(std::abs(pl - std::cos(a / 2) * std::cos(a / 2)) <= 1e-14);
  }
  const auto m = hv_model_from_state(product_state({0.3}, {1.2}), BellSettings::canonical());
  const auto r = loc::audit(m);
  CHECK(r.oi_residual <= 1e-12);
  CHECK(r.pi_residual <= 1e-12);
  CHECK(r.fact_residual <= 1e-12);
}

TEST_CASE("singlet hidden-variable model") {
  const auto m = singlet_hv_model();
  const auto r = loc::audit(m);
  CHECK(r.pi_residual <= 1e-12);
  CHECK_FALSE(r.oi_pass());
  CHECK_FALSE(r.fact_pass());
  CHECK(r.no_conspiracy_residual == 0.0);
  const auto s = loc::observable_stats(m);
  CHECK(std::abs(s.chsh - 2 * std::sqrt(2.0)) <= 1e-9);

  // a - b = pi/4 gives an OI residual above 0.1
  const auto q = singlet_hv_model(BellSettings{{0.0}, {0.0}, {kPi / 4}, {kPi / 4}});
  CHECK(loc::check_oi(q).residual > 0.1);

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int k = 0; k < 100; ++k) {
    const BellSettings bs{{ang(rng)}, {ang(rng)}, {ang(rng)}, {ang(rng)}};
    CHECK(loc::check_pi(singlet_hv_model(bs), 1e-12).pass);
  }
}

TEST_CASE("no-signalling holds for every pure state") {
  CHECK(no_signalling_check(singlet(), 1e-12));
  CHECK(no_signalling_residual(singlet()) <= 1e-12);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(no_signalling_check(random_ket(seed + 100), 1e-12));
  }
  CHECK(no_signalling_check(product_state({0.4}, {2.0}), 1e-12));
}

TEST_CASE("local deterministic model") {
  CHECK_THROWS_AS(local_deterministic_model(3), kentsim::ModelError);
  const std::size_t n = 64;
  // angles on the cell grid make the sawtooth exact
  for (int i = 0; i <= 32; ++i) {
    const double d = 2 * kPi * i / static_cast<double>(n);
    const auto m = local_deterministic_model(n, BellSettings{{0.0}, {0.0}, {d}, {d}});
    const double E = loc::observable_stats(m).correlators[0];
    CHECK(E == doctest::Approx(-(1 - 2 * d / kPi)).epsilon(1e-12));
    // brute force over the lambda cells
    double sum = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double lam = 2 * kPi * (k + 0.5) / n;
      const int A = std::cos(lam) >= 0 ? 1 : -1;
      const int B = std::cos(lam - d) >= 0 ? -1 : 1;
      sum += A * B;
    }
    CHECK(E == doctest::Approx(sum / n).epsilon(1e-12));
  }
  const auto canon = local_deterministic_model(n);
  const auto r = loc::audit(canon);
  CHECK(r.oi_residual == 0.0);
  CHECK(r.pi_residual == 0.0);
  CHECK(r.fact_residual == 0.0);
  CHECK(r.no_conspiracy_residual == 0.0);
  CHECK(loc::observable_stats(canon).chsh <= 2.0 + 1e-12);

  double worst = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      for (int k = 0; k < 10; ++k)
        for (int l = 0; l < 10; ++l) {
          const BellSettings s{{0.2 * kPi * i}, {0.2 * kPi * j}, {0.2 * kPi * k + 0.1}, {0.2 * kPi * l + 0.1}};
          worst = std::max(worst, loc::observable_stats(local_deterministic_model(16, s)).chsh);
        }
  CHECK(worst <= 2.0 + 1e-9);
}
