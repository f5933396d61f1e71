#include "kentsim/locality.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "kentsim/error.hpp"
#include "rng.hpp"

namespace kentsim::locality {

namespace {

/// Left marginal p(X | pair) and right marginal p(Y | pair) of a joint table.
double left_marginal(const JointTable& j, int X) {
  return j[outcome_index(X, +1)] + j[outcome_index(X, -1)];
}
double right_marginal(const JointTable& j, int Y) {
  return j[outcome_index(+1, Y)] + j[outcome_index(-1, Y)];
}

CheckResult verdict(double residual, double tol) { return CheckResult{residual <= tol, residual}; }

constexpr std::array<int, 2> kOutcomes{+1, -1};

}  // namespace

std::string_view pair_name(std::size_t p) {
  static constexpr std::array<std::string_view, kSettingPairs> names{"a1b1", "a1b2", "a2b1",
                                                                     "a2b2"};
  return names.at(p);
}

std::string_view outcome_name(std::size_t o) {
  static constexpr std::array<std::string_view, kOutcomePairs> names{"++", "+-", "-+", "--"};
  return names.at(o);
}

void check_structure(const FiniteHVModel& m) {
  if (m.lambdas.empty()) {
    throw ModelError("model needs at least one lambda");
  }
  std::set<std::string> seen;
  for (const std::string& id : m.lambdas) {
    if (id.empty() || !seen.insert(id).second) {
      throw ModelError("lambda ids must be non-empty and unique (offending id: '" + id + "')");
    }
  }
  for (std::size_t p = 0; p < kSettingPairs; ++p) {
    if (m.measures[p].size() != m.size()) {
      throw ModelError("measures." + std::string(pair_name(p)) + " has " +
                       std::to_string(m.measures[p].size()) + " entries, expected " +
                       std::to_string(m.size()));
    }
    for (double w : m.measures[p]) {
      if (!std::isfinite(w)) {
        throw ModelError("measures." + std::string(pair_name(p)) + " has a non-finite entry");
      }
    }
  }
  if (m.cond.size() != m.size()) {
    throw ModelError("cond has " + std::to_string(m.cond.size()) + " tables, expected " +
                     std::to_string(m.size()));
  }
  for (std::size_t l = 0; l < m.size(); ++l) {
    for (std::size_t p = 0; p < kSettingPairs; ++p) {
      for (double v : m.cond[l][p]) {
        if (!std::isfinite(v)) {
          throw ModelError("cond." + m.lambdas[l] + "." + std::string(pair_name(p)) +
                           " has a non-finite entry");
        }
      }
    }
  }
}

bool check_normalization(const FiniteHVModel& m, double tol) {
  check_structure(m);
  for (const auto& measure : m.measures) {
    double sum = 0.0;
    for (double w : measure) {
      if (w < 0.0) {
        return false;
      }
      sum += w;
    }
    if (std::abs(sum - 1.0) > tol) {
      return false;
    }
  }
  for (const auto& tables : m.cond) {
    for (const JointTable& j : tables) {
      double sum = 0.0;
      for (double v : j) {
        if (v < 0.0) {
          return false;
        }
        sum += v;
      }
      if (std::abs(sum - 1.0) > tol) {
        return false;
      }
    }
  }
  return true;
}

CheckResult check_oi(const FiniteHVModel& m, double tol) {
  check_structure(m);
  double worst = 0.0;
  for (const auto& tables : m.cond) {
    for (const JointTable& j : tables) {
      for (int X : kOutcomes) {
        for (int Y : kOutcomes) {
          const double gap = j[outcome_index(X, Y)] - left_marginal(j, X) * right_marginal(j, Y);
          worst = std::max(worst, std::abs(gap));
        }
      }
    }
  }
  return verdict(worst, tol);
}

CheckResult check_pi(const FiniteHVModel& m, double tol) {
  check_structure(m);
  double worst = 0.0;
  for (const auto& tables : m.cond) {
    for (int local = 1; local <= 2; ++local) {
      for (int X : kOutcomes) {
        // Left wing at a_local, distant b1 vs b2.
        const double l1 = left_marginal(tables[pair_index(local, 1)], X);
        const double l2 = left_marginal(tables[pair_index(local, 2)], X);
        // Right wing at b_local, distant a1 vs a2.
        const double r1 = right_marginal(tables[pair_index(1, local)], X);
        const double r2 = right_marginal(tables[pair_index(2, local)], X);
        worst = std::max({worst, std::abs(l1 - l2), std::abs(r1 - r2)});
      }
    }
  }
  return verdict(worst, tol);
}

CheckResult check_factorizability(const FiniteHVModel& m, double tol) {
  check_structure(m);
  double worst = 0.0;
  for (const auto& tables : m.cond) {
    for (int i = 1; i <= 2; ++i) {
      for (int j = 1; j <= 2; ++j) {
        const JointTable& joint = tables[pair_index(i, j)];
        const JointTable& left_ref = tables[pair_index(i, 1)];
        const JointTable& right_ref = tables[pair_index(1, j)];
        for (int X : kOutcomes) {
          for (int Y : kOutcomes) {
            const double gap = joint[outcome_index(X, Y)] -
                               left_marginal(left_ref, X) * right_marginal(right_ref, Y);
            worst = std::max(worst, std::abs(gap));
          }
        }
      }
    }
  }
  return verdict(worst, tol);
}

CheckResult check_no_conspiracy(const FiniteHVModel& m, double tol) {
  check_structure(m);
  double worst = 0.0;
  for (std::size_t p = 0; p < kSettingPairs; ++p) {
    for (std::size_t q = p + 1; q < kSettingPairs; ++q) {
      double tv = 0.0;
      for (std::size_t l = 0; l < m.size(); ++l) {
        tv += std::abs(m.measures[p][l] - m.measures[q][l]);
      }
      worst = std::max(worst, 0.5 * tv);
    }
  }
  return verdict(worst, tol);
}

AuditReport audit(const FiniteHVModel& m, double tol) {
  AuditReport r;
  r.tolerance = tol;
  r.normalization_ok = check_normalization(m);
  r.oi_residual = check_oi(m, tol).residual;
  r.pi_residual = check_pi(m, tol).residual;
  r.fact_residual = check_factorizability(m, tol).residual;
  r.no_conspiracy_residual = check_no_conspiracy(m, tol).residual;
  return r;
}

ObservableStats observable_stats(const FiniteHVModel& m) {
  check_structure(m);
  ObservableStats s;
  for (std::size_t p = 0; p < kSettingPairs; ++p) {
    for (std::size_t o = 0; o < kOutcomePairs; ++o) {
      double acc = 0.0;
      for (std::size_t l = 0; l < m.size(); ++l) {
        acc += m.measures[p][l] * m.cond[l][p][o];
      }
      s.joint[p][o] = acc;
    }
    double e = 0.0;
    for (std::size_t o = 0; o < kOutcomePairs; ++o) {
      e += left_outcome(o) * right_outcome(o) * s.joint[p][o];
    }
    s.correlators[p] = e;
  }
  const double sum = s.correlators[0] + s.correlators[1] + s.correlators[2] + s.correlators[3];
  for (std::size_t k = 0; k < kSettingPairs; ++k) {
    s.chsh_forms[k] = std::abs(sum - 2.0 * s.correlators[k]);
  }
  s.chsh = *std::max_element(s.chsh_forms.begin(), s.chsh_forms.end());
  return s;
}

FiniteHVModel random_compliant_model(std::uint64_t seed, std::size_t n_lambda) {
  if (n_lambda == 0) {
    throw ModelError("random_compliant_model needs n_lambda >= 1");
  }
  std::mt19937_64 rng(detail::mix_seed(seed));
  FiniteHVModel m;
  std::vector<double> measure(n_lambda);
  double total = 0.0;
  for (double& w : measure) {
    w = detail::unit_double(rng) + 1e-3;
    total += w;
  }
  for (double& w : measure) {
    w /= total;
  }
  m.measures.fill(measure);
  m.cond.resize(n_lambda);
  for (std::size_t l = 0; l < n_lambda; ++l) {
    m.lambdas.push_back("lambda" + std::to_string(l));
    std::array<double, 2> left{};   // p(A = +1 | a_i)
    std::array<double, 2> right{};  // p(B = +1 | b_j)
    for (double& p : left) {
      p = detail::unit_double(rng);
    }
    for (double& p : right) {
      p = detail::unit_double(rng);
    }
    for (int i = 1; i <= 2; ++i) {
      for (int j = 1; j <= 2; ++j) {
        JointTable& t = m.cond[l][pair_index(i, j)];
        for (std::size_t o = 0; o < kOutcomePairs; ++o) {
          const double pl = left_outcome(o) > 0 ? left[i - 1] : 1.0 - left[i - 1];
          const double pr = right_outcome(o) > 0 ? right[j - 1] : 1.0 - right[j - 1];
          t[o] = pl * pr;
        }
      }
    }
  }
  return m;
}

FiniteHVModel single_lambda_model(std::string id,
                                  const std::array<JointTable, kSettingPairs>& tables) {
  FiniteHVModel m;
  m.lambdas = {std::move(id)};
  m.measures.fill({1.0});
  m.cond = {tables};
  return m;
}

FiniteHVModel kentian_micro_model(const toyqm::BranchSet& bs) {
  if (bs.scenario() != toyqm::Scenario::Bell) {
    throw WrongScenario("kentian_micro_model needs a Bell branch set");
  }
  const auto& sites = bs.config.sites;
  const auto worlds = toyqm::enumerate_worlds(bs);
  constexpr double kSiteMatch = 1e-9;

  // Each wing's outcome is read off the lump registration in the world: outer site -> +1.
  auto outcome_of = [&](const toyqm::FinalCondition& fc, const std::string& system, double outer,
                        double inner) {
    for (const toyqm::Registration& r : fc.registrations) {
      if (r.kind != toyqm::RegistrationKind::Lump || r.source != system) {
        continue;
      }
      if (std::abs(r.position() - outer) <= kSiteMatch) {
        return +1;
      }
      if (std::abs(r.position() - inner) <= kSiteMatch) {
        return -1;
      }
    }
    throw WrongScenario("world carries no lump registration for system " + system);
  };

  FiniteHVModel m;
  for (const toyqm::FinalCondition& fc : worlds) {
    m.lambdas.push_back(bs.branches[fc.branch_index].label);
    for (auto& measure : m.measures) {
      measure.push_back(fc.probability);
    }
    const int A = outcome_of(fc, "L", sites[0], sites[1]);
    const int B = outcome_of(fc, "R", sites[3], sites[2]);
    JointTable t{};
    t[outcome_index(A, B)] = 1.0;
    std::array<JointTable, kSettingPairs> tables;
    tables.fill(t);
    m.cond.push_back(tables);
  }
  return m;
}

double kentian_observable_oi_residual(const toyqm::BranchSet& bs) {
  const ObservableStats stats = observable_stats(kentian_micro_model(bs));
  return check_oi(single_lambda_model("averaged", stats.joint)).residual;
}

}  // namespace kentsim::locality
