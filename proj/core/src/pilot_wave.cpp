#include "kentsim/pilot_wave.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>

#include "kentsim/error.hpp"
#include "rng.hpp"

namespace kentsim::models {

namespace {

constexpr double kLogDensityFloor = -690.7755278982137;  // log(1e-300)
constexpr double kResolution = 1e-6;
constexpr int kHorizonExtensions = 3;

struct Integrator {
  const GuidanceField& field;

  PWState step(const PWState& s, double h) const {
    const auto k1 = field.velocity(s.y_left, s.y_right, s.t);
    const auto k2 = field.velocity(s.y_left + 0.5 * h * k1[0], s.y_right + 0.5 * h * k1[1],
                                   s.t + 0.5 * h);
    const auto k3 = field.velocity(s.y_left + 0.5 * h * k2[0], s.y_right + 0.5 * h * k2[1],
                                   s.t + 0.5 * h);
    const auto k4 = field.velocity(s.y_left + h * k3[0], s.y_right + h * k3[1], s.t + h);
    return PWState{s.y_left + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                   s.y_right + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]), s.t + h};
  }
};

std::size_t steps_between(double t0, double t1, double dt) {
  return static_cast<std::size_t>(std::max<long long>(1, std::llround((t1 - t0) / dt)));
}

bool resolved(const PWState& s) {
  return std::abs(s.y_left) >= kResolution && std::abs(s.y_right) >= kResolution;
}

Outcome read_outcome(const PWState& s) {
  return Outcome{s.y_left > 0.0 ? +1 : -1, s.y_right > 0.0 ? +1 : -1};
}

/// Integrates [s.t, t_end] in equal steps close to dt; `visit` may stop early by returning true.
template <class Visit>
PWState integrate(const Integrator& rk, PWState s, double t_end, double dt, Visit&& visit) {
  const std::size_t n = steps_between(s.t, t_end, dt);
  const double h = (t_end - s.t) / static_cast<double>(n);
  const double t0 = s.t;
  for (std::size_t i = 0; i < n; ++i) {
    s = rk.step(s, h);
    s.t = t0 + static_cast<double>(i + 1) * h;
    if (visit(s)) {
      break;
    }
  }
  return s;
}

}  // namespace

void PWConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(sigma) || !positive(speed) || !positive(dt) || !positive(t_max)) {
    throw ConfigError("PWConfig: sigma, speed, dt and t_max must be > 0");
  }
  if (!std::isfinite(wavenumber) || !std::isfinite(t_left) || !std::isfinite(t_right) ||
      t_left < 0.0 || t_right < 0.0) {
    throw ConfigError("PWConfig: wavenumber must be finite and impulse times >= 0");
  }
  const double latest = std::max(t_left, t_right);
  if (2.0 * speed * (t_max - latest) < 5.0 * sigma) {
    throw ConfigError("PWConfig: t_max too short for the half-packets to separate by 5 sigma");
  }
}

GuidanceField::GuidanceField(const PWConfig& cfg, SpinSetting a, SpinSetting b) : cfg_(cfg) {
  const Ket4 psi = singlet();
  for (std::size_t o = 0; o < 4; ++o) {
    w_[o] = joint_prob(psi, a, b, locality::left_outcome(o), locality::right_outcome(o));
  }
}

GuidanceField::Local GuidanceField::local(double y, double t, double t_impulse) const {
  const double tau = std::max(0.0, t - t_impulse);
  const double s2 = cfg_.sigma * cfg_.sigma;
  Local l;
  l.x = y * cfg_.speed * tau / s2;
  l.q = std::exp(-2.0 * std::abs(l.x));
  l.sign = l.x >= 0.0 ? +1 : -1;
  l.k = t >= t_impulse ? cfg_.wavenumber : 0.0;
  l.log_c = -(y * y + cfg_.speed * cfg_.speed * tau * tau) / (2.0 * s2) + std::abs(l.x);
  return l;
}

std::array<double, 2> GuidanceField::velocity(double y_left, double y_right, double t) const {
  const Local L = local(y_left, t, cfg_.t_left);
  const Local R = local(y_right, t, cfg_.t_right);
  double den = 0.0;
  double num_l = 0.0;
  double num_r = 0.0;
  for (std::size_t o = 0; o < 4; ++o) {
    const int A = locality::left_outcome(o);
    const int B = locality::right_outcome(o);
    const double f = w_[o] * (A == L.sign ? 1.0 : L.q) * (B == R.sign ? 1.0 : R.q);
    den += f;
    num_l += A * f;
    num_r += B * f;
  }
  const double log_c = L.log_c + R.log_c;
  const bool maybe_node = den < 1e-20 || log_c < kLogDensityFloor + 46.0;
  if (!(den > 0.0) || (maybe_node && log_c + std::log(den) < kLogDensityFloor)) {
    throw DegenerateNode("pilot-wave density underflow at (" + std::to_string(y_left) + ", " +
                         std::to_string(y_right) + ", t=" + std::to_string(t) + ")");
  }
  return {L.k * num_l / den, R.k * num_r / den};
}

double GuidanceField::log_density(double y_left, double y_right, double t) const {
  const Local L = local(y_left, t, cfg_.t_left);
  const Local R = local(y_right, t, cfg_.t_right);
  double den = 0.0;
  for (std::size_t o = 0; o < 4; ++o) {
    den += w_[o] * (locality::left_outcome(o) == L.sign ? 1.0 : L.q) *
           (locality::right_outcome(o) == R.sign ? 1.0 : R.q);
  }
  return L.log_c + R.log_c + std::log(den);
}

PWRun pw_evolve(const PWConfig& cfg, const PWState& initial, SpinSetting a, SpinSetting b) {
  cfg.validate();
  const GuidanceField field(cfg, a, b);
  const Integrator rk{field};
  PWRun run;
  run.trajectory.reserve(steps_between(initial.t, cfg.t_max, cfg.dt) + 1);
  run.trajectory.push_back(initial);
  PWState s = initial;
  double horizon = cfg.t_max;
  for (int ext = 0;; ++ext) {
    s = integrate(rk, s, horizon, cfg.dt, [&](const PWState& st) {
      run.trajectory.push_back(st);
      return false;
    });
    if (resolved(s)) {
      break;
    }
    if (ext == kHorizonExtensions) {
      throw UnresolvedOutcome("pilot-wave outcome unresolved after horizon extensions");
    }
    horizon += cfg.t_max;
  }
  run.outcome = read_outcome(s);
  return run;
}

Outcome pw_outcome(const PWConfig& cfg, const PWState& initial, SpinSetting a, SpinSetting b) {
  cfg.validate();
  const GuidanceField field(cfg, a, b);
  const Integrator rk{field};
  const auto& w = field.weights();
  const double active_from = std::max(cfg.t_left, cfg.t_right);
  const double s2 = cfg.sigma * cfg.sigma;
  const bool can_stop = cfg.wavenumber > 0.0;

  // In cell (sL, sR) the terms with A != sL sum to at most qL (1 - w), the others to at least w,
  // so qL (1 - w) < w fixes the sign of the left velocity to sL and moving outward only shrinks
  // qL. Same for the right wing.
  std::optional<Outcome> early;
  auto settled = [&](const PWState& st) {
    if (!can_stop || st.t < active_from || st.y_left == 0.0 || st.y_right == 0.0) {
      return false;
    }
    const int sl = st.y_left > 0.0 ? +1 : -1;
    const int sr = st.y_right > 0.0 ? +1 : -1;
    const double occupied = w[locality::outcome_index(sl, sr)];
    if (occupied <= 0.0) {
      return false;
    }
    const double ql = std::exp(-2.0 * std::abs(st.y_left) * cfg.speed * (st.t - cfg.t_left) / s2);
    const double qr =
        std::exp(-2.0 * std::abs(st.y_right) * cfg.speed * (st.t - cfg.t_right) / s2);
    const double bound = 0.9 * occupied / (1.0 - occupied);
    if (ql <= bound && qr <= bound) {
      early = Outcome{sl, sr};
      return true;
    }
    return false;
  };

  PWState s = initial;
  double horizon = cfg.t_max;
  for (int ext = 0;; ++ext) {
    s = integrate(rk, s, horizon, cfg.dt, settled);
    if (early) {
      return *early;
    }
    if (resolved(s)) {
      return read_outcome(s);
    }
    if (ext == kHorizonExtensions) {
      throw UnresolvedOutcome("pilot-wave outcome unresolved after horizon extensions");
    }
    horizon += cfg.t_max;
  }
}

double PWStats::frequency(std::size_t outcome) const {
  return n_resolved == 0 ? 0.0
                         : static_cast<double>(counts[outcome]) / static_cast<double>(n_resolved);
}

PWState equilibrium_sample(const PWConfig& cfg, std::uint64_t seed, std::size_t i) {
  std::mt19937_64 rng(detail::mix_seed(detail::mix_seed(seed) + i));
  std::normal_distribution<double> normal(0.0, cfg.sigma);
  PWState s;
  s.y_left = normal(rng);
  s.y_right = normal(rng);
  s.t = 0.0;
  return s;
}

PWStats pw_equilibrium_stats(const PWConfig& cfg, SpinSetting a, SpinSetting b, std::size_t N,
                             std::uint64_t seed) {
  cfg.validate();
  if (N == 0) {
    throw ConfigError("pw_equilibrium_stats needs N >= 1");
  }
  PWStats stats;
  stats.a = a;
  stats.b = b;
  stats.n_samples = N;
  long long product_sum = 0;
  for (std::size_t i = 0; i < N; ++i) {
    try {
      const Outcome o = pw_outcome(cfg, equilibrium_sample(cfg, seed, i), a, b);
      ++stats.counts[locality::outcome_index(o.left, o.right)];
      product_sum += o.left * o.right;
      ++stats.n_resolved;
    } catch (const DegenerateNode&) {
      ++stats.n_failed_nodes;
    } catch (const UnresolvedOutcome&) {
      ++stats.n_unresolved;
    }
  }
  if (stats.n_resolved > 0) {
    const double n = static_cast<double>(stats.n_resolved);
    stats.E = static_cast<double>(product_sum) / n;
    stats.stderr_estimate = std::sqrt(std::max(0.0, 1.0 - stats.E * stats.E) / n);
  }
  return stats;
}

locality::FiniteHVModel pilot_wave_hv_model(const PWConfig& cfg, const BellSettings& s,
                                            const std::vector<PWState>& initials) {
  if (initials.empty()) {
    throw ConfigError("pilot_wave_hv_model needs at least one initial configuration");
  }
  locality::FiniteHVModel m;
  const double w = 1.0 / static_cast<double>(initials.size());
  for (std::size_t l = 0; l < initials.size(); ++l) {
    m.lambdas.push_back("y" + std::to_string(l));
    std::array<locality::JointTable, locality::kSettingPairs> tables{};
    for (int i = 1; i <= 2; ++i) {
      for (int j = 1; j <= 2; ++j) {
        const Outcome o = pw_outcome(cfg, initials[l], s.left(i), s.right(j));
        tables[locality::pair_index(i, j)][locality::outcome_index(o.left, o.right)] = 1.0;
      }
    }
    m.cond.push_back(tables);
  }
  for (auto& measure : m.measures) {
    measure.assign(initials.size(), w);
  }
  return m;
}

std::vector<PDWitness> parameter_dependence_witnesses(const PWConfig& cfg, SpinSetting a,
                                                      SpinSetting b1, SpinSetting b2,
                                                      std::size_t n, double half_width) {
  if (n == 0 || !(half_width > 0.0)) {
    throw ConfigError("witness grid needs n >= 1 and half_width > 0");
  }
  std::vector<PDWitness> out;
  const double h = 2.0 * half_width / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const PWState init{-half_width + (static_cast<double>(i) + 0.5) * h,
                         -half_width + (static_cast<double>(j) + 0.5) * h, 0.0};
      try {
        const Outcome o1 = pw_outcome(cfg, init, a, b1);
        const Outcome o2 = pw_outcome(cfg, init, a, b2);
        if (o1.left != o2.left) {
          out.push_back({init, o1, o2});
        }
      } catch (const DegenerateNode&) {
      } catch (const UnresolvedOutcome&) {
      }
    }
  }
  return out;
}

}  // namespace kentsim::models
