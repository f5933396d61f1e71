#pragma once

// Semi-relativistic toy quantum mechanics in 1+1D: massive point lumps in a two-component
// superposition, point photons on lightlike worldlines that bounce off the lumps, and the
// Born-rule statistics of the final registration pattern on the late surface t = T.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kentsim/spacetime.hpp"

namespace kentsim::toyqm {

using spacetime::Event;
using Amplitude = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;
/// Energy carried by a photon registration; lumps register their mass.
inline constexpr double kPhotonEnergy = 1.0;

enum class Scenario { SingleSystem, Bell };

/// A photon emitted at t = 0 from `position`, moving with dx/dt = direction (+1 or -1).
struct PhotonLaunch {
  double position = 0.0;
  int direction = +1;
};

struct ToyConfig {
  Amplitude a{1.0, 0.0};
  Amplitude b{0.0, 0.0};
  /// Lump sites: {x1, x2} for the single system, {x1, x2, x3, x4} for the Bell toy.
  std::vector<double> sites;
  std::vector<PhotonLaunch> photons;
  double T = 0.0;
  double mass = 1.0;

  /// One rightward photon launched so that it would reach x1 at time t1.
  static ToyConfig single_system(Amplitude a, Amplitude b, double x1, double x2, double t1,
                                 double T, double mass = 1.0);
  /// Left photon reaches x1 at t1 moving right; right photon reaches x4 at t1 moving left.
  static ToyConfig bell(Amplitude a, Amplitude b, double x1, double x2, double x3, double x4,
                        double t1, double T, double mass = 1.0);

  /// Throws ConfigError for an unrecognised number of sites.
  Scenario scenario() const;
  /// Arrival time of the (left) photon at x1.
  double t1() const;
  /// Arrival time of the (left) photon at x2.
  double t2() const;

  /// Checks every invariant; throws ConfigError naming the first violated one.
  void validate() const;
};

struct Lump {
  std::string system_id;
  double position = 0.0;  ///< position at t = 0 in the current frame
  double mass = 1.0;
  double velocity = 0.0;  ///< zero in the lab frame (no self-Hamiltonian)

  double position_at(double t) const { return position + velocity * t; }
};

struct PhotonWorldline {
  struct Piece {
    Event start;
    int direction = +1;
  };
  std::vector<Piece> pieces;
  Event registration;

  /// Position at time t, or nullopt outside [launch, registration].
  std::optional<double> position_at(double t) const;
  /// Launch, every reflection, and the registration event.
  std::vector<Event> vertices() const;
};

enum class RegistrationKind { Photon, Lump };

/// A point deposit of energy on the late surface.
struct Registration {
  Event event;
  RegistrationKind kind = RegistrationKind::Photon;
  double magnitude = 0.0;
  /// System id for lumps, "photon-<n>" for photons. Not part of the physical pattern.
  std::string source;

  double position() const { return event.x; }
};

struct Branch {
  Amplitude amplitude;
  std::vector<Lump> lumps;
  std::vector<PhotonWorldline> photons;
  std::vector<Registration> registrations;
  /// 1 for the `a` component, 2 for the `b` component.
  int component = 1;
  std::string label;

  double weight() const { return std::norm(amplitude); }
};

struct BranchSet {
  std::vector<Branch> branches;
  double T = 0.0;
  ToyConfig config;
  /// Velocity of the coordinate frame relative to the lab frame (0 unless boosted).
  double frame_velocity = 0.0;

  Scenario scenario() const { return config.scenario(); }
  /// Lab-frame time of an event expressed in this set's frame.
  double lab_time(const Event& e) const;
};

struct FinalCondition {
  std::vector<Registration> registrations;
  std::size_t branch_index = 0;
  double probability = 0.0;
};

struct BranchState {
  Amplitude amplitude;
  std::vector<double> photon_positions;
  std::vector<double> lump_positions;
};

BranchSet build_single_system(const ToyConfig& config);
BranchSet build_bell(const ToyConfig& config);
/// Dispatches on config.scenario().
BranchSet build(const ToyConfig& config);

/// Branch-resolved configuration at lab time t in [0, T]. Requires a lab-frame set.
std::vector<BranchState> state_at(const BranchSet& bs, double t);

/// One final condition per branch, weighted by |amplitude|^2.
std::vector<FinalCondition> enumerate_worlds(const BranchSet& bs);

/// Born-rule selection of one world; a pure function of the seed.
FinalCondition sample_world(const BranchSet& bs, std::uint64_t seed);

/// The same physical situation described from a frame moving with b.
BranchSet boosted(const BranchSet& bs, const spacetime::Boost& b);
FinalCondition boosted(const FinalCondition& fc, const spacetime::Boost& b);

/// Index of the branch holding superposition component 1 (a) or 2 (b); nullopt if that
/// component has zero amplitude.
std::optional<std::size_t> branch_for_component(const BranchSet& bs, int component);

}  // namespace kentsim::toyqm
