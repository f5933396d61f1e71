#include "kentsim/beables.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "kentsim/error.hpp"

namespace kentsim::beables {

namespace {

std::vector<Registration> usable(const std::vector<Registration>& regs, const Event& apex,
                                 const Options& opts) {
  std::vector<Registration> out;
  for (const Registration& r : regs) {
    if (spacetime::strictly_outside_future_cone(apex, r.event, opts.interval_tol)) {
      out.push_back(r);
    }
  }
  return out;
}

bool same_registration(const Registration& a, const Registration& b, const Options& opts) {
  return a.kind == b.kind &&
         std::abs(a.magnitude - b.magnitude) <= 1e-12 * std::max(1.0, std::abs(a.magnitude)) &&
         std::abs(a.event.x - b.event.x) <= opts.delta_x &&
         std::abs(a.event.t - b.event.t) <= opts.delta_x;
}

/// Multiset equality of two registration patterns.
bool same_pattern(const std::vector<Registration>& lhs, const std::vector<Registration>& rhs,
                  const Options& opts) {
  if (lhs.size() != rhs.size()) {
    return false;
  }
  std::vector<bool> taken(rhs.size(), false);
  for (const Registration& r : lhs) {
    bool matched = false;
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      if (!taken[j] && same_registration(r, rhs[j], opts)) {
        taken[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) {
      return false;
    }
  }
  return true;
}

double energy_at(const toyqm::Branch& br, const Event& y, double delta_x) {
  double e = 0.0;
  for (const toyqm::Lump& lump : br.lumps) {
    if (std::abs(lump.position_at(y.t) - y.x) <= delta_x) {
      e += lump.mass;
    }
  }
  for (const toyqm::PhotonWorldline& w : br.photons) {
    const auto p = w.position_at(y.t);
    if (p && std::abs(*p - y.x) <= delta_x) {
      e += toyqm::kPhotonEnergy;
    }
  }
  return e;
}

void require_before_surface(const BranchSet& bs, const Event& y) {
  if (!(bs.lab_time(y) < bs.T)) {
    throw ApexBeyondSurface("beable apex must lie strictly before the late surface t = T");
  }
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

ConditioningSet conditioning_set(const FinalCondition& fc, const BranchSet& bs, const Event& y,
                                 const Options& opts) {
  require_before_surface(bs, y);
  ConditioningSet cs;
  cs.apex = y;
  cs.selected = usable(fc.registrations, y, opts);
  cs.per_branch.reserve(bs.branches.size());
  for (const toyqm::Branch& br : bs.branches) {
    cs.per_branch.push_back(usable(br.registrations, y, opts));
  }
  return cs;
}

std::vector<WeightedBranch> consistent_branches(const BranchSet& bs, const FinalCondition& fc,
                                                const Event& y, const Options& opts) {
  const ConditioningSet cs = conditioning_set(fc, bs, y, opts);
  std::vector<WeightedBranch> out;
  double total = 0.0;
  for (std::size_t i = 0; i < bs.branches.size(); ++i) {
    if (same_pattern(cs.per_branch[i], cs.selected, opts)) {
      out.push_back({i, bs.branches[i].weight()});
      total += bs.branches[i].weight();
    }
  }
  if (out.empty() || total <= 0.0) {
    throw Error("no branch is consistent with the selected final condition");
  }
  for (WeightedBranch& wb : out) {
    wb.weight /= total;
  }
  return out;
}

double beable_energy_density(const BranchSet& bs, const FinalCondition& fc, const Event& y,
                             const Options& opts) {
  double value = 0.0;
  for (const WeightedBranch& wb : consistent_branches(bs, fc, y, opts)) {
    value += wb.weight * energy_at(bs.branches[wb.index], y, opts.delta_x);
  }
  return value;
}

BeableField beable_field(const BranchSet& bs, const FinalCondition& fc, const GridSpec& grid,
                         const Options& opts) {
  if (grid.nt == 0 || grid.nx == 0) {
    throw ConfigError("grid needs at least one point along each axis");
  }
  if (!std::isfinite(grid.t_min) || !std::isfinite(grid.t_max) || !std::isfinite(grid.x_min) ||
      !std::isfinite(grid.x_max) || grid.t_min > grid.t_max || grid.x_min > grid.x_max) {
    throw ConfigError("grid bounds must be finite and ordered");
  }
  for (double t : {grid.t_min, grid.t_max}) {
    for (double x : {grid.x_min, grid.x_max}) {
      const double lab_t = bs.lab_time(Event{t, x});
      if (!(lab_t > 0.0 && lab_t < bs.T)) {
        throw ConfigError("grid must lie strictly between t = 0 and t = T");
      }
    }
  }
  BeableField field;
  field.nt = grid.nt;
  field.nx = grid.nx;
  field.dt = grid.nt > 1 ? (grid.t_max - grid.t_min) / static_cast<double>(grid.nt - 1) : 0.0;
  field.dx = grid.nx > 1 ? (grid.x_max - grid.x_min) / static_cast<double>(grid.nx - 1) : 0.0;
  field.delta_x = opts.delta_x;
  field.samples.reserve(grid.nt * grid.nx);
  for (std::size_t it = 0; it < grid.nt; ++it) {
    const double t = grid.t_min + static_cast<double>(it) * field.dt;
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      const Event y{t, grid.x_min + static_cast<double>(ix) * field.dx};
      field.samples.push_back({y, beable_energy_density(bs, fc, y, opts)});
    }
  }
  return field;
}

double total_energy(const toyqm::ToyConfig& config) {
  const std::size_t lumps = config.scenario() == toyqm::Scenario::SingleSystem ? 1 : 2;
  return static_cast<double>(lumps) * config.mass +
         static_cast<double>(config.photons.size()) * toyqm::kPhotonEnergy;
}

void write_csv(const BeableField& field, std::ostream& os) {
  os << "t,x,value\n";
  for (const BeableSample& s : field.samples) {
    os << fmt(s.event.t) << ',' << fmt(s.event.x) << ',' << fmt(s.value) << '\n';
  }
}

RegimeTable regime_table(const toyqm::ToyConfig& config, int selected_component,
                         const Options& opts) {
  if (config.scenario() != toyqm::Scenario::SingleSystem) {
    throw WrongScenario("regime_table needs the single-system toy, not the Bell toy");
  }
  const BranchSet bs = toyqm::build_single_system(config);
  const auto selected = toyqm::branch_for_component(bs, selected_component);
  if (!selected) {
    throw ConfigError("selected world " + std::to_string(selected_component) +
                      " has zero amplitude");
  }
  const FinalCondition fc = toyqm::enumerate_worlds(bs)[*selected];
  const std::vector<double> sites = config.sites;
  const double T = config.T;

  // A site's conditioning data can only change when some registration crosses its cone.
  std::vector<double> cuts;
  for (const toyqm::Branch& br : bs.branches) {
    for (const Registration& r : br.registrations) {
      for (double s : sites) {
        const double t = T - std::abs(r.position() - s);
        if (t < T) {
          cuts.push_back(t);
        }
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
             cuts.end());

  auto values_at = [&](double t) {
    std::vector<double> v;
    for (double s : sites) {
      v.push_back(beable_energy_density(bs, fc, Event{t, s}, opts));
    }
    return v;
  };

  struct Regime {
    std::optional<double> lo;
    double hi;
    std::vector<double> values;
  };
  std::vector<Regime> regimes;
  for (std::size_t i = 0; i <= cuts.size(); ++i) {
    const std::optional<double> lo = i == 0 ? std::nullopt : std::optional<double>(cuts[i - 1]);
    const double hi = i < cuts.size() ? cuts[i] : T;
    double probe;
    if (lo) {
      probe = 0.5 * (*lo + hi);
    } else {
      probe = hi > 0.0 ? 0.5 * hi : hi - 1.0;
    }
    auto vals = values_at(probe);
    if (!regimes.empty()) {
      const auto& prev = regimes.back().values;
      bool same = true;
      for (std::size_t k = 0; k < vals.size(); ++k) {
        same = same && std::abs(prev[k] - vals[k]) <= 1e-12;
      }
      if (same) {
        regimes.back().hi = hi;
        continue;
      }
    }
    regimes.push_back({lo, hi, std::move(vals)});
  }

  RegimeTable table;
  table.selected_component = selected_component;
  table.T = T;
  for (std::size_t r = 0; r < regimes.size(); ++r) {
    if (r > 0) {
      const double boundary = *regimes[r].lo;
      table.boundaries.push_back(boundary);
      const auto vals = values_at(boundary);
      for (std::size_t k = 0; k < sites.size(); ++k) {
        table.boundary_rows.push_back({boundary, sites[k], vals[k]});
      }
    }
    for (std::size_t k = 0; k < sites.size(); ++k) {
      table.rows.push_back({regimes[r].lo, regimes[r].hi, sites[k], regimes[r].values[k]});
    }
  }
  return table;
}

}  // namespace kentsim::beables
