#include <cmath>
#include <complex>
#include <random>

#include <doctest.h>

#include "kentsim/error.hpp"
#include "kentsim/toyqm.hpp"

using namespace kentsim::toyqm;
using kentsim::spacetime::Boost;
using kentsim::spacetime::Event;

namespace {

const double kRootHalf = 1.0 / std::sqrt(2.0);

ToyConfig example_toy(Amplitude a = 0.6, Amplitude b = 0.8, double T = 100.0) {
  return ToyConfig::single_system(a, b, 0.0, 4.0, 5.0, T);
}

ToyConfig bell_toy(Amplitude a = 0.6, Amplitude b = 0.8) {
  return ToyConfig::bell(a, b, -20.0, -16.0, 16.0, 20.0, 5.0, 100.0);
}

}  // namespace

TEST_CASE("single system: reflection events and registrations") {
  const BranchSet bs = build_single_system(example_toy(kRootHalf, kRootHalf));
  REQUIRE(bs.branches.size() == 2);
  const auto& b1 = bs.branches[0];
  const auto& b2 = bs.branches[1];
  CHECK(b1.label == "first");
  CHECK(b2.label == "second");
  REQUIRE(b1.photons[0].pieces.size() == 2);
  REQUIRE(b2.photons[0].pieces.size() == 2);
  CHECK(b1.photons[0].pieces[1].start == Event{5, 0});
  CHECK(b2.photons[0].pieces[1].start == Event{9, 4});
  CHECK(b1.photons[0].registration == Event{100, -95});
  CHECK(b2.photons[0].registration == Event{100, 4 + 9 - 100});
  CHECK(b1.lumps[0].position == 0.0);
  CHECK(b2.lumps[0].position == 4.0);
}

TEST_CASE("single system: degenerate superposition keeps one branch") {
  const BranchSet bs = build_single_system(example_toy(1.0, 0.0));
  REQUIRE(bs.branches.size() == 1);
  CHECK(bs.branches[0].component == 1);
  CHECK_FALSE(branch_for_component(bs, 2).has_value());
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CHECK(sample_world(bs, seed).branch_index == 0);
  }
}

TEST_CASE("config validation names the violated invariant") {
  CHECK_THROWS_WITH_AS(build_single_system(example_toy(0.5, 0.5)),
                       doctest::Contains("|a|^2 + |b|^2"), kentsim::ConfigError);
  CHECK_THROWS_WITH_AS(build_single_system(example_toy(0.6, 0.8, 9.0)),
                       doctest::Contains("T must be later"), kentsim::ConfigError);
  CHECK_THROWS_WITH_AS(build_single_system(ToyConfig::single_system(0.6, 0.8, 4, 0, 5, 100)),
                       doctest::Contains("strictly increasing"), kentsim::ConfigError);
  CHECK_THROWS_WITH_AS(build_single_system(ToyConfig::single_system(0.6, 0.8, 0, 4, 5, 100, 0)),
                       doctest::Contains("mass"), kentsim::ConfigError);
  CHECK_THROWS_AS(build_bell(ToyConfig::bell(0.6, 0.8, 0, 4, 3, 8, 5, 100)), kentsim::ConfigError);
  CHECK_THROWS_AS(build_bell(example_toy()), kentsim::WrongScenario);
  CHECK_THROWS_AS(build_single_system(bell_toy()), kentsim::WrongScenario);
}

TEST_CASE("complex amplitudes only enter through their moduli") {
  const Amplitude a = std::polar(0.6, 1.1);
  const Amplitude b = std::polar(0.8, -2.3);
  const auto worlds = enumerate_worlds(build_single_system(example_toy(a, b)));
  REQUIRE(worlds.size() == 2);
  CHECK(worlds[0].probability == doctest::Approx(0.36).epsilon(1e-14));
  CHECK(worlds[1].probability == doctest::Approx(0.64).epsilon(1e-14));
}

TEST_CASE("bell toy: outer/outer and inner/inner worlds") {
  const BranchSet bs = build_bell(bell_toy());
  const auto worlds = enumerate_worlds(bs);
  REQUIRE(worlds.size() == 2);
  CHECK(bs.branches[0].label == "outer/outer");
  CHECK(bs.branches[1].label == "inner/inner");
  CHECK(worlds[0].probability == doctest::Approx(0.36).epsilon(1e-14));
  CHECK(worlds[1].probability == doctest::Approx(0.64).epsilon(1e-14));
  CHECK(bs.branches[0].lumps[0].position == -20.0);
  CHECK(bs.branches[0].lumps[1].position == 20.0);
  CHECK(bs.branches[1].lumps[0].position == -16.0);
  CHECK(bs.branches[1].lumps[1].position == 16.0);
  // Left photon reflects at x1 (outer) or x2 (inner); right photon at x4 or x3.
  CHECK(bs.branches[0].photons[0].pieces[1].start == Event{5, -20});
  CHECK(bs.branches[0].photons[1].pieces[1].start == Event{5, 20});
  CHECK(bs.branches[1].photons[0].pieces[1].start == Event{9, -16});
  CHECK(bs.branches[1].photons[1].pieces[1].start == Event{9, 16});

  const BranchSet certain = build_bell(bell_toy(0.0, 1.0));
  REQUIRE(certain.branches.size() == 1);
  CHECK(certain.branches[0].label == "inner/inner");
}

TEST_CASE("state_at follows the displayed single-system states") {
  const BranchSet bs = build_single_system(example_toy());
  const double x1 = 0, x2 = 4, t1 = 5, t2 = 9;
  for (double t : {0.0, 1.0, 4.5}) {
    const auto st = state_at(bs, t);
    CHECK(st[0].photon_positions[0] == doctest::Approx(x1 + t - t1));
    CHECK(st[1].photon_positions[0] == doctest::Approx(x1 + t - t1));
  }
  for (double t : {5.5, 7.0, 8.9}) {
    const auto st = state_at(bs, t);
    CHECK(st[0].photon_positions[0] == doctest::Approx(x1 - (t - t1)));
    CHECK(st[1].photon_positions[0] == doctest::Approx(x1 + (t - t1)));
  }
  for (double t : {9.5, 50.0, 100.0}) {
    const auto st = state_at(bs, t);
    CHECK(st[1].photon_positions[0] == doctest::Approx(x2 - (t - t2)));
    CHECK(st[0].lump_positions[0] == x1);
    CHECK(st[1].lump_positions[0] == x2);
    double norm = 0.0;
    for (const auto& b : st) {
      norm += std::norm(b.amplitude);
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(state_at(bs, -0.1), kentsim::ConfigError);
  CHECK_THROWS_AS(state_at(bs, 100.5), kentsim::ConfigError);
  CHECK_THROWS_AS(state_at(boosted(bs, Boost(0.3)), 1.0), kentsim::WrongScenario);
}

TEST_CASE("property: worldlines are continuous, lightlike and reflect only at lumps") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double x1 = -10 + 20 * u(rng);
    const double gap = 0.5 + 5 * u(rng);
    const double t1 = 0.5 + 10 * u(rng);
    const double a = std::sqrt(u(rng));
    const double b = std::sqrt(1 - a * a);
    ToyConfig cfg;
    if (trial % 2 == 0) {
      cfg = ToyConfig::single_system(a, b, x1, x1 + gap, t1, t1 + gap + 1 + 50 * u(rng));
    } else {
      const double g2 = 1 + 20 * u(rng);
      cfg = ToyConfig::bell(a, b, x1, x1 + gap, x1 + gap + g2, x1 + 2 * gap + g2, t1,
                            t1 + gap + g2 + 50 * u(rng));
    }
    const BranchSet bs = build(cfg);
    for (const Branch& br : bs.branches) {
      for (const PhotonWorldline& w : br.photons) {
        const auto v = w.vertices();
        for (std::size_t i = 1; i < w.pieces.size(); ++i) {
          const auto& prev = w.pieces[i - 1];
          const auto& cur = w.pieces[i];
          CHECK(cur.start.t > prev.start.t);
          CHECK(cur.direction == -prev.direction);
          // the previous piece ends exactly where this one starts
          CHECK(prev.start.x + prev.direction * (cur.start.t - prev.start.t) ==
                doctest::Approx(cur.start.x).epsilon(1e-12));
          bool at_lump = false;
          for (const Lump& l : br.lumps) {
            at_lump = at_lump || std::abs(l.position_at(cur.start.t) - cur.start.x) <= 1e-12;
          }
          CHECK(at_lump);
        }
        CHECK(w.registration.t == bs.T);
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
          CHECK(std::abs(std::abs(v[i + 1].x - v[i].x) - (v[i + 1].t - v[i].t)) <= 1e-9);
        }
      }
      for (const Registration& r : br.registrations) {
        CHECK(r.event.t == bs.T);
      }
    }
    double total = 0.0;
    for (const auto& w : enumerate_worlds(bs)) {
      total += w.probability;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sample_world is a pure function of the seed with Born frequencies") {
  const BranchSet bs = build_single_system(example_toy(kRootHalf, kRootHalf));
  const FinalCondition f1 = sample_world(bs, 1234);
  const FinalCondition f2 = sample_world(bs, 1234);
  CHECK(f1.branch_index == f2.branch_index);
  CHECK(f1.probability == f2.probability);
  REQUIRE(f1.registrations.size() == f2.registrations.size());
  for (std::size_t i = 0; i < f1.registrations.size(); ++i) {
    CHECK(f1.registrations[i].event == f2.registrations[i].event);
  }

  const int n = 100000;
  int first = 0;
  for (int seed = 0; seed < n; ++seed) {
    first += sample_world(bs, static_cast<std::uint64_t>(seed)).branch_index == 0 ? 1 : 0;
  }
  CHECK(std::abs(static_cast<double>(first) / n - 0.5) <= 0.01);

  const BranchSet skew = build_single_system(example_toy());
  int skew_first = 0;
  for (int seed = 0; seed < n; ++seed) {
    skew_first += sample_world(skew, static_cast<std::uint64_t>(seed)).branch_index == 0 ? 1 : 0;
  }
  const double sigma = std::sqrt(0.36 * 0.64 / n);
  CHECK(std::abs(static_cast<double>(skew_first) / n - 0.36) <= 3 * sigma);
}

TEST_CASE("boosted descriptions keep the lab-frame structure") {
  const BranchSet bs = build_single_system(example_toy());
  const Boost boost(0.4);
  const BranchSet moved = boosted(bs, boost);
  CHECK(moved.frame_velocity == doctest::Approx(0.4));
  const BranchSet back = boosted(moved, boost.inverse());
  CHECK(back.frame_velocity == doctest::Approx(0.0).epsilon(1e-15));
  for (std::size_t i = 0; i < bs.branches.size(); ++i) {
    const auto& r0 = bs.branches[i].registrations;
    const auto& r1 = moved.branches[i].registrations;
    REQUIRE(r0.size() == r1.size());
    for (std::size_t k = 0; k < r0.size(); ++k) {
      const Event want = kentsim::spacetime::boost_event(r0[k].event, boost);
      CHECK(r1[k].event.t == doctest::Approx(want.t));
      CHECK(r1[k].event.x == doctest::Approx(want.x));
      CHECK(moved.lab_time(r1[k].event) == doctest::Approx(bs.T));
    }
    CHECK(moved.branches[i].lumps[0].velocity == doctest::Approx(-0.4));
  }
}
