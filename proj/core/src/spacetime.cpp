#include "kentsim/spacetime.hpp"

#include <cmath>
#include <string>

#include "kentsim/error.hpp"

namespace kentsim::spacetime {

Event make_event(double t, double x) {
  if (!std::isfinite(t) || !std::isfinite(x)) {
    throw ConfigError("event coordinates must be finite");
  }
  return Event{t, x};
}

std::string_view to_string(CausalRelation r) {
  switch (r) {
    case CausalRelation::FutureTimelike:
      return "future-timelike";
    case CausalRelation::PastTimelike:
      return "past-timelike";
    case CausalRelation::FutureLightlike:
      return "future-lightlike";
    case CausalRelation::PastLightlike:
      return "past-lightlike";
    case CausalRelation::Spacelike:
      return "spacelike";
    case CausalRelation::Coincident:
      return "coincident";
  }
  return "unknown";
}

CausalRelation time_reversed(CausalRelation r) {
  switch (r) {
    case CausalRelation::FutureTimelike:
      return CausalRelation::PastTimelike;
    case CausalRelation::PastTimelike:
      return CausalRelation::FutureTimelike;
    case CausalRelation::FutureLightlike:
      return CausalRelation::PastLightlike;
    case CausalRelation::PastLightlike:
      return CausalRelation::FutureLightlike;
    default:
      return r;
  }
}

Boost::Boost(double v) : v_(v) {
  if (!std::isfinite(v) || std::abs(v) >= 1.0) {
    throw InvalidBoost("boost velocity must satisfy |v| < 1, got " + std::to_string(v));
  }
}

double Boost::gamma() const { return 1.0 / std::sqrt((1.0 - v_) * (1.0 + v_)); }

double interval2(const Event& e1, const Event& e2) {
  const double dt = e2.t - e1.t;
  const double dx = e2.x - e1.x;
  // Factored form: exactly zero whenever |dt| == |dx|.
  return (dt - dx) * (dt + dx);
}

CausalRelation causal_relation(const Event& e1, const Event& e2, double tol) {
  const double dt = e2.t - e1.t;
  const double dx = e2.x - e1.x;
  if (dt == 0.0 && dx == 0.0) {
    return CausalRelation::Coincident;
  }
  const double s = interval2(e1, e2);
  if (dt != 0.0 && std::abs(s) <= tol) {
    return dt > 0.0 ? CausalRelation::FutureLightlike : CausalRelation::PastLightlike;
  }
  if (s > 0.0) {
    return dt > 0.0 ? CausalRelation::FutureTimelike : CausalRelation::PastTimelike;
  }
  return CausalRelation::Spacelike;
}

bool strictly_outside_future_cone(const Event& apex, const Event& probe, double tol) {
  switch (causal_relation(apex, probe, tol)) {
    case CausalRelation::Spacelike:
    case CausalRelation::PastTimelike:
    case CausalRelation::PastLightlike:
      return true;
    default:
      return false;
  }
}

Event boost_event(const Event& e, const Boost& b) {
  const double v = b.velocity();
  if (v == 0.0) {
    return e;
  }
  const double g = b.gamma();
  return Event{g * (e.t - v * e.x), g * (e.x - v * e.t)};
}

double boost_velocity(double u, const Boost& b) {
  const double v = b.velocity();
  return (u - v) / (1.0 - u * v);
}

}  // namespace kentsim::spacetime
