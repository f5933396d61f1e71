#pragma once

#include <string_view>

namespace kentsim::spacetime {

/// Default absolute tolerance on the squared interval for lightlike classification.
inline constexpr double kIntervalTolerance = 1e-9;

/// A point of 1+1D Minkowski spacetime in natural units (c = 1).
struct Event {
  double t = 0.0;
  double x = 0.0;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Throws ConfigError if either coordinate is NaN or infinite.
Event make_event(double t, double x);

enum class CausalRelation {
  FutureTimelike,
  PastTimelike,
  FutureLightlike,
  PastLightlike,
  Spacelike,
  Coincident,
};

std::string_view to_string(CausalRelation r);

/// Reverses the time orientation of a relation (future <-> past).
CausalRelation time_reversed(CausalRelation r);

/// A Lorentz boost along x with relative velocity |v| < 1.
class Boost {
 public:
  Boost() = default;
  /// Throws InvalidBoost unless |v| < 1 and v is finite.
  explicit Boost(double v);

  double velocity() const { return v_; }
  double gamma() const;
  Boost inverse() const { return Boost(-v_); }

 private:
  double v_ = 0.0;
};

/// (dt)^2 - (dx)^2. Positive for timelike separation.
double interval2(const Event& e1, const Event& e2);

/// Classifies e2 relative to e1. |interval2| <= tol with dt != 0 counts as lightlike.
CausalRelation causal_relation(const Event& e1, const Event& e2,
                               double tol = kIntervalTolerance);

/// True iff probe lies outside the closed future light cone of apex: spacelike to it or in its
/// causal past. Events on the cone (including the apex itself) are excluded.
bool strictly_outside_future_cone(const Event& apex, const Event& probe,
                                  double tol = kIntervalTolerance);

/// t' = gamma (t - v x), x' = gamma (x - v t).
Event boost_event(const Event& e, const Boost& b);

/// Relativistic velocity addition: velocity u (lab) as seen from a frame moving with b.
double boost_velocity(double u, const Boost& b);

}  // namespace kentsim::spacetime
