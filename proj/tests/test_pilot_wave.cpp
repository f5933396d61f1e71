#include <cmath>
#include <numbers>

#include <doctest.h>

#include "kentsim/error.hpp"
#include "kentsim/locality.hpp"
#include "kentsim/pilot_wave.hpp"

using namespace kentsim::models;
namespace loc = kentsim::locality;

namespace {

constexpr double kPi = std::numbers::pi;

// Guidance velocity written out from the component densities: the current of component (A, B)
// is A k |psi_AB|^2, so v_L = k sum A |psi_AB|^2 / sum |psi_AB|^2.
std::array<double, 2> oracle_velocity(const PWConfig& c, SpinSetting a, SpinSetting b, double yl,
                                      double yr, double t) {
  auto g2 = [&](double y, double centre) {
    return std::exp(-(y - centre) * (y - centre) / (2 * c.sigma * c.sigma));
  };
  const double tl = std::max(0.0, t - c.t_left);
  const double tr = std::max(0.0, t - c.t_right);
  double den = 0, nl = 0, nr = 0;
  for (int A : {1, -1}) {
    for (int B : {1, -1}) {
      const double rho = joint_prob(singlet(), a, b, A, B) * g2(yl, A * c.speed * tl) *
                         g2(yr, B * c.speed * tr);
      den += rho;
      nl += A * rho;
      nr += B * rho;
    }
  }
  const double kl = t >= c.t_left ? c.wavenumber : 0.0;
  const double kr = t >= c.t_right ? c.wavenumber : 0.0;
  return {kl * nl / den, kr * nr / den};
}

}  // namespace

TEST_CASE("config validation") {
  PWConfig c;
  CHECK_NOTHROW(c.validate());
  c.t_max = 2.0;
  CHECK_THROWS_AS(c.validate(), kentsim::ConfigError);
  c = PWConfig{};
  c.sigma = 0;
  CHECK_THROWS_AS(c.validate(), kentsim::ConfigError);
  c = PWConfig{};
  c.t_left = -1;
  CHECK_THROWS_AS(c.validate(), kentsim::ConfigError);
}

TEST_CASE("guidance field matches the component-density formula") {
  PWConfig c;
  c.t_right = 0.5;
  const GuidanceField f(c, {0.3}, {1.9});
  for (double t : {0.0, 0.3, 1.0, 4.0}) {
    for (double yl : {-2.0, -0.1, 0.4, 3.0}) {
      for (double yr : {-1.5, 0.2, 2.5}) {
        const auto got = f.velocity(yl, yr, t);
        const auto want = oracle_velocity(c, {0.3}, {1.9}, yl, yr, t);
        CHECK(got[0] == doctest::Approx(want[0]).epsilon(1e-12));
        CHECK(got[1] == doctest::Approx(want[1]).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(f.velocity(60.0, 60.0, 0.0), kentsim::DegenerateNode);
}

TEST_CASE("property: the guidance flow preserves the density (continuity equation)") {
  PWConfig c;
  const GuidanceField f(c, {0.0}, {kPi / 4});
  const double h = 1e-5;
  for (double t : {0.5, 1.5, 3.0}) {
    for (double yl : {-1.3, 0.2, 2.1}) {
      for (double yr : {-0.7, 1.1}) {
        auto rho = [&](double a, double b, double s) { return std::exp(f.log_density(a, b, s)); };
        auto flux = [&](double a, double b, double s, int k) { return rho(a, b, s) * f.velocity(a, b, s)[k]; };
        const double dt = (rho(yl, yr, t + h) - rho(yl, yr, t - h)) / (2 * h);
        const double dl = (flux(yl + h, yr, t, 0) - flux(yl - h, yr, t, 0)) / (2 * h);
        const double dr = (flux(yl, yr + h, t, 1) - flux(yl, yr - h, t, 1)) / (2 * h);
        CHECK(std::abs(dt + dl + dr) <= 1e-6);
      }
    }
  }
}

TEST_CASE("trajectories are deterministic and the fast path agrees with full integration") {
  PWConfig c;
  const auto s = BellSettings::canonical();
  const PWRun r1 = pw_evolve(c, {0.3, -0.8, 0.0}, s.a1, s.b1);
  const PWRun r2 = pw_evolve(c, {0.3, -0.8, 0.0}, s.a1, s.b1);
  REQUIRE(r1.trajectory.size() == r2.trajectory.size());
  CHECK(r1.trajectory.size() == 10001);
  for (std::size_t i = 0; i < r1.trajectory.size(); ++i) {
    CHECK(r1.trajectory[i].y_left == r2.trajectory[i].y_left);
    CHECK(r1.trajectory[i].y_right == r2.trajectory[i].y_right);
  }
  CHECK(r1.outcome == r2.outcome);
  CHECK(r1.trajectory.back().t == doctest::Approx(10.0));

  int disagreements = 0;
  const int n = 16;
  for (const auto& [a, b] : {std::pair{s.a1, s.b1}, std::pair{s.a2, s.b2}, std::pair{s.a1, s.a1}}) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const PWState init{-3 + 6 * (i + 0.5) / n, -3 + 6 * (j + 0.5) / n, 0.0};
        disagreements += pw_outcome(c, init, a, b) == pw_evolve(c, init, a, b).outcome ? 0 : 1;
      }
    }
  }
  CHECK(disagreements == 0);

  PWConfig late = c;
  late.t_left = 1.0;
  late.t_max = 12.0;
  for (double y : {-1.1, 0.05, 0.9}) {
    const PWState init{y, -y / 2, 0.0};
    CHECK(pw_outcome(late, init, s.a2, s.b1) == pw_evolve(late, init, s.a2, s.b1).outcome);
  }
}

TEST_CASE("parallel settings give perfect anti-correlation") {
  PWConfig c;
  const PWStats st = pw_equilibrium_stats(c, {0.4}, {0.4}, 10000, 3);
  CHECK(st.n_resolved + st.n_failed_nodes + st.n_unresolved == 10000);
  const double anti = st.frequency(1) + st.frequency(2);
  CHECK(anti >= 0.99);
  CHECK(st.E <= -0.98);
}

TEST_CASE("property: equivariance per outcome cell at N = 1e5") {
  PWConfig c;
  const auto s = BellSettings::canonical();
  const std::size_t N = 100000;
  const PWStats st = pw_equilibrium_stats(c, s.a1, s.b1, N, 11);
  CHECK(st.n_failed_nodes == 0);
  CHECK(st.n_unresolved == 0);
  for (std::size_t o = 0; o < 4; ++o) {
    const double p = joint_prob(singlet(), s.a1, s.b1, loc::left_outcome(o), loc::right_outcome(o));
    CAPTURE(o);
    CHECK(std::abs(st.frequency(o) - p) <= 3 * std::sqrt(p * (1 - p) / N));
  }
  CHECK(std::abs(st.E + std::cos(s.a1.angle - s.b1.angle)) <= 0.02);
}

TEST_CASE("equilibrium statistics are reproducible and order independent") {
  PWConfig c;
  const PWStats a = pw_equilibrium_stats(c, {0.0}, {kPi / 2}, 2000, 5);
  const PWStats b = pw_equilibrium_stats(c, {0.0}, {kPi / 2}, 2000, 5);
  CHECK(a.E == b.E);
  CHECK(a.counts == b.counts);
  // the same sample index always yields the same configuration
  const PWState s0 = equilibrium_sample(c, 5, 17);
  const PWState s1 = equilibrium_sample(c, 5, 17);
  CHECK(s0.y_left == s1.y_left);
  CHECK(s0.y_right == s1.y_right);
  CHECK_THROWS_AS(pw_equilibrium_stats(c, {0.0}, {0.0}, 0, 1), kentsim::ConfigError);
}

TEST_CASE("property: outcomes are stable under step halving") {
  PWConfig c;
  PWConfig half = c;
  half.dt = c.dt / 2;
  const auto s = BellSettings::canonical();
  const int n = 50;
  int same = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const PWState init{-3 + 6 * (i + 0.5) / n, -3 + 6 * (j + 0.5) / n, 0.0};
      same += pw_outcome(c, init, s.a1, s.b1) == pw_outcome(half, init, s.a1, s.b1) ? 1 : 0;
    }
  }
  CHECK(same >= 0.99 * n * n);
}

TEST_CASE("parameter dependence: a left outcome that follows the distant setting") {
  PWConfig c;
  const auto witnesses = parameter_dependence_witnesses(c, {0.0}, {kPi / 4}, {3 * kPi / 4}, 50, 3.0);
  REQUIRE_FALSE(witnesses.empty());
  PWConfig half = c;
  half.dt = c.dt / 2;
  const auto& w = witnesses.front();
  CHECK(w.with_b1.left != w.with_b2.left);
  CHECK(pw_evolve(half, w.initial, {0.0}, {kPi / 4}).outcome.left == w.with_b1.left);
  CHECK(pw_evolve(half, w.initial, {0.0}, {3 * kPi / 4}).outcome.left == w.with_b2.left);

  // the derived hidden-variable model violates PI maximally at that lambda
  const auto m = pilot_wave_hv_model(c, BellSettings{{0.0}, {kPi / 2}, {kPi / 4}, {3 * kPi / 4}},
                                     {w.initial});
  CHECK(loc::check_pi(m).residual == 1.0);
  CHECK(loc::check_oi(m).residual == 0.0);
}
