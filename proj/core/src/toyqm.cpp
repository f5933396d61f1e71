#include "kentsim/toyqm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "kentsim/error.hpp"
#include "rng.hpp"

namespace kentsim::toyqm {

namespace {

constexpr int kMaxReflections = 1000;

[[noreturn]] void fail(const std::string& what) { throw ConfigError("invalid ToyConfig: " + what); }

bool finite(Amplitude z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

PhotonWorldline trace_photon(const PhotonLaunch& launch, const std::vector<Lump>& lumps,
                             double T) {
  PhotonWorldline w;
  Event here{0.0, launch.position};
  int dir = launch.direction;
  w.pieces.push_back({here, dir});
  for (int bounce = 0;; ++bounce) {
    if (bounce > kMaxReflections) {
      fail("photon trapped between lumps");
    }
    std::optional<double> gap;
    double mirror = 0.0;
    for (const Lump& lump : lumps) {
      const double ahead = (lump.position - here.x) * dir;
      if (ahead > 0.0 && (!gap || ahead < *gap)) {
        gap = ahead;
        mirror = lump.position;
      }
    }
    if (!gap || here.t + *gap >= T) {
      break;
    }
    here = Event{here.t + *gap, mirror};
    dir = -dir;
    w.pieces.push_back({here, dir});
  }
  w.registration = Event{T, here.x + dir * (T - here.t)};
  return w;
}

Branch make_branch(Amplitude amplitude, int component, std::string label,
                   std::vector<Lump> lumps, const ToyConfig& cfg) {
  Branch br;
  br.amplitude = amplitude;
  br.component = component;
  br.label = std::move(label);
  br.lumps = std::move(lumps);
  for (std::size_t i = 0; i < cfg.photons.size(); ++i) {
    br.photons.push_back(trace_photon(cfg.photons[i], br.lumps, cfg.T));
    br.registrations.push_back(Registration{br.photons.back().registration,
                                            RegistrationKind::Photon, kPhotonEnergy,
                                            "photon-" + std::to_string(i)});
  }
  for (const Lump& lump : br.lumps) {
    br.registrations.push_back(Registration{Event{cfg.T, lump.position_at(cfg.T)},
                                            RegistrationKind::Lump, lump.mass, lump.system_id});
  }
  return br;
}

BranchSet assemble(const ToyConfig& cfg, std::vector<Branch> candidates) {
  BranchSet bs;
  bs.T = cfg.T;
  bs.config = cfg;
  for (Branch& br : candidates) {
    if (br.weight() > 0.0) {
      bs.branches.push_back(std::move(br));
    }
  }
  return bs;
}

}  // namespace

ToyConfig ToyConfig::single_system(Amplitude a, Amplitude b, double x1, double x2, double t1,
                                   double T, double mass) {
  ToyConfig cfg;
  cfg.a = a;
  cfg.b = b;
  cfg.sites = {x1, x2};
  cfg.photons = {PhotonLaunch{x1 - t1, +1}};
  cfg.T = T;
  cfg.mass = mass;
  return cfg;
}

ToyConfig ToyConfig::bell(Amplitude a, Amplitude b, double x1, double x2, double x3, double x4,
                          double t1, double T, double mass) {
  ToyConfig cfg;
  cfg.a = a;
  cfg.b = b;
  cfg.sites = {x1, x2, x3, x4};
  cfg.photons = {PhotonLaunch{x1 - t1, +1}, PhotonLaunch{x4 + t1, -1}};
  cfg.T = T;
  cfg.mass = mass;
  return cfg;
}

Scenario ToyConfig::scenario() const {
  if (sites.size() == 2) {
    return Scenario::SingleSystem;
  }
  if (sites.size() == 4) {
    return Scenario::Bell;
  }
  fail("expected 2 sites (single system) or 4 sites (Bell), got " + std::to_string(sites.size()));
}

double ToyConfig::t1() const {
  if (sites.empty() || photons.empty()) {
    fail("t1 needs a site and a photon");
  }
  return sites[0] - photons[0].position;
}

double ToyConfig::t2() const {
  if (sites.size() < 2 || photons.empty()) {
    fail("t2 needs two sites and a photon");
  }
  return sites[1] - photons[0].position;
}

void ToyConfig::validate() const {
  if (!finite(a) || !finite(b)) {
    fail("amplitudes must be finite");
  }
  const double norm = std::norm(a) + std::norm(b);
  if (std::abs(norm - 1.0) > kNormTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "|a|^2 + |b|^2 = 1 violated (got " << norm << ")";
    fail(os.str());
  }
  if (!std::isfinite(T)) {
    fail("T must be finite");
  }
  if (!std::isfinite(mass) || mass <= 0.0) {
    fail("mass must be > 0");
  }
  const Scenario sc = scenario();
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (!std::isfinite(sites[i])) {
      fail("site positions must be finite");
    }
    if (i > 0 && !(sites[i] > sites[i - 1])) {
      fail("sites must be strictly increasing (x" + std::to_string(i + 1) + " > x" +
           std::to_string(i) + ")");
    }
  }
  for (const PhotonLaunch& p : photons) {
    if (!std::isfinite(p.position) || (p.direction != 1 && p.direction != -1)) {
      fail("photon launch needs a finite position and direction +1 or -1");
    }
  }
  if (sc == Scenario::SingleSystem) {
    if (photons.size() != 1 || photons[0].direction != +1) {
      fail("single-system toy needs exactly one rightward photon");
    }
    if (!(photons[0].position < sites[0])) {
      fail("photon must start left of x1 (t1 > 0)");
    }
    if (!(T > t2())) {
      fail("T must be later than t2 = t1 + (x2 - x1)");
    }
  } else {
    if (photons.size() != 2 || photons[0].direction != +1 || photons[1].direction != -1) {
      fail("Bell toy needs a rightward photon followed by a leftward photon");
    }
    if (!(photons[0].position < sites[0])) {
      fail("left photon must start left of x1");
    }
    if (!(photons[1].position > sites[3])) {
      fail("right photon must start right of x4");
    }
    const double latest = std::max(sites[1] - photons[0].position, photons[1].position - sites[2]);
    if (!(T > latest)) {
      fail("T must be later than every reflection event");
    }
  }
}

std::optional<double> PhotonWorldline::position_at(double t) const {
  if (pieces.empty() || t < pieces.front().start.t || t > registration.t) {
    return std::nullopt;
  }
  auto it = std::upper_bound(pieces.begin(), pieces.end(), t,
                             [](double value, const Piece& p) { return value < p.start.t; });
  const Piece& p = *std::prev(it);
  return p.start.x + p.direction * (t - p.start.t);
}

std::vector<Event> PhotonWorldline::vertices() const {
  std::vector<Event> out;
  out.reserve(pieces.size() + 1);
  for (const Piece& p : pieces) {
    out.push_back(p.start);
  }
  out.push_back(registration);
  return out;
}

double BranchSet::lab_time(const Event& e) const {
  if (frame_velocity == 0.0) {
    return e.t;
  }
  return spacetime::boost_event(e, spacetime::Boost(-frame_velocity)).t;
}

BranchSet build_single_system(const ToyConfig& config) {
  config.validate();
  if (config.scenario() != Scenario::SingleSystem) {
    throw WrongScenario("build_single_system needs a two-site configuration");
  }
  const double x1 = config.sites[0];
  const double x2 = config.sites[1];
  std::vector<Branch> candidates;
  candidates.push_back(
      make_branch(config.a, 1, "first", {Lump{"sys", x1, config.mass}}, config));
  candidates.push_back(
      make_branch(config.b, 2, "second", {Lump{"sys", x2, config.mass}}, config));
  return assemble(config, std::move(candidates));
}

BranchSet build_bell(const ToyConfig& config) {
  config.validate();
  if (config.scenario() != Scenario::Bell) {
    throw WrongScenario("build_bell needs a four-site configuration");
  }
  const auto& x = config.sites;
  std::vector<Branch> candidates;
  candidates.push_back(make_branch(config.a, 1, "outer/outer",
                                   {Lump{"L", x[0], config.mass}, Lump{"R", x[3], config.mass}},
                                   config));
  candidates.push_back(make_branch(config.b, 2, "inner/inner",
                                   {Lump{"L", x[1], config.mass}, Lump{"R", x[2], config.mass}},
                                   config));
  return assemble(config, std::move(candidates));
}

BranchSet build(const ToyConfig& config) {
  return config.scenario() == Scenario::SingleSystem ? build_single_system(config)
                                                     : build_bell(config);
}

std::vector<BranchState> state_at(const BranchSet& bs, double t) {
  if (bs.frame_velocity != 0.0) {
    throw WrongScenario("state_at is defined on lab-frame branch sets only");
  }
  if (!(t >= 0.0 && t <= bs.T)) {
    throw ConfigError("state_at: t must lie in [0, T]");
  }
  std::vector<BranchState> out;
  out.reserve(bs.branches.size());
  for (const Branch& br : bs.branches) {
    BranchState st;
    st.amplitude = br.amplitude;
    for (const PhotonWorldline& w : br.photons) {
      st.photon_positions.push_back(*w.position_at(t));
    }
    for (const Lump& lump : br.lumps) {
      st.lump_positions.push_back(lump.position_at(t));
    }
    out.push_back(std::move(st));
  }
  return out;
}

std::vector<FinalCondition> enumerate_worlds(const BranchSet& bs) {
  std::vector<FinalCondition> worlds;
  worlds.reserve(bs.branches.size());
  for (std::size_t i = 0; i < bs.branches.size(); ++i) {
    worlds.push_back(FinalCondition{bs.branches[i].registrations, i, bs.branches[i].weight()});
  }
  return worlds;
}

FinalCondition sample_world(const BranchSet& bs, std::uint64_t seed) {
  if (bs.branches.empty()) {
    throw ConfigError("sample_world: empty branch set");
  }
  std::mt19937_64 rng(detail::mix_seed(seed));
  const double u = detail::unit_double(rng);
  double cumulative = 0.0;
  std::size_t chosen = bs.branches.size() - 1;
  for (std::size_t i = 0; i < bs.branches.size(); ++i) {
    cumulative += bs.branches[i].weight();
    if (u < cumulative) {
      chosen = i;
      break;
    }
  }
  return FinalCondition{bs.branches[chosen].registrations, chosen, bs.branches[chosen].weight()};
}

BranchSet boosted(const BranchSet& bs, const spacetime::Boost& b) {
  using spacetime::boost_event;
  BranchSet out = bs;
  const double fv = bs.frame_velocity;
  const double v = b.velocity();
  out.frame_velocity = (fv + v) / (1.0 + fv * v);
  for (Branch& br : out.branches) {
    for (Lump& lump : br.lumps) {
      const Event origin = boost_event(Event{0.0, lump.position}, b);
      lump.velocity = spacetime::boost_velocity(lump.velocity, b);
      lump.position = origin.x - lump.velocity * origin.t;
    }
    for (PhotonWorldline& w : br.photons) {
      for (auto& piece : w.pieces) {
        piece.start = boost_event(piece.start, b);
      }
      w.registration = boost_event(w.registration, b);
    }
    for (Registration& r : br.registrations) {
      r.event = boost_event(r.event, b);
    }
  }
  return out;
}

FinalCondition boosted(const FinalCondition& fc, const spacetime::Boost& b) {
  FinalCondition out = fc;
  for (Registration& r : out.registrations) {
    r.event = spacetime::boost_event(r.event, b);
  }
  return out;
}

std::optional<std::size_t> branch_for_component(const BranchSet& bs, int component) {
  for (std::size_t i = 0; i < bs.branches.size(); ++i) {
    if (bs.branches[i].component == component) {
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace kentsim::toyqm
