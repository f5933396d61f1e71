#include "kentsim/serialization.hpp"

#include <string>

#include "kentsim/error.hpp"

namespace kentsim::io {

namespace {

template <class Err>
[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw Err("field '" + path + "': " + what);
}

template <class Err>
double number_at(const Json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    field_error<Err>(path + key, "missing");
  }
  if (!it->is_number()) {
    field_error<Err>(path + key, "expected a number");
  }
  return it->template get<double>();
}

toyqm::Amplitude amplitude_at(const Json& obj, const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    field_error<ConfigError>(key, "missing");
  }
  if (it->is_number()) {
    return {it->get<double>(), 0.0};
  }
  if (it->is_array() && it->size() == 2 && (*it)[0].is_number() && (*it)[1].is_number()) {
    return {(*it)[0].get<double>(), (*it)[1].get<double>()};
  }
  field_error<ConfigError>(key, "expected a number or [re, im]");
}

Json amplitude_json(toyqm::Amplitude z) {
  if (z.imag() == 0.0) {
    return z.real();
  }
  return Json::array({z.real(), z.imag()});
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(std::string("malformed JSON: ") + e.what());
  }
}

toyqm::ToyConfig toy_config_from_json(const Json& j) {
  if (!j.is_object()) {
    throw ConfigError("ToyConfig must be a JSON object");
  }
  toyqm::ToyConfig cfg;
  cfg.a = amplitude_at(j, "a");
  cfg.b = amplitude_at(j, "b");
  const bool bell = j.contains("x3") || j.contains("x4");
  const int n_sites = bell ? 4 : 2;
  for (int i = 1; i <= n_sites; ++i) {
    cfg.sites.push_back(number_at<ConfigError>(j, "x" + std::to_string(i), ""));
  }
  cfg.T = number_at<ConfigError>(j, "T", "");
  cfg.mass = j.contains("m") ? number_at<ConfigError>(j, "m", "") : 1.0;
  if (j.contains("photons")) {
    const Json& ph = j.at("photons");
    if (!ph.is_array()) {
      field_error<ConfigError>("photons", "expected an array");
    }
    for (std::size_t i = 0; i < ph.size(); ++i) {
      const std::string path = "photons[" + std::to_string(i) + "].";
      if (!ph[i].is_object()) {
        field_error<ConfigError>(path, "expected an object");
      }
      const double dir = number_at<ConfigError>(ph[i], "direction", path);
      if (dir != 1.0 && dir != -1.0) {
        field_error<ConfigError>(path + "direction", "must be +1 or -1");
      }
      cfg.photons.push_back({number_at<ConfigError>(ph[i], "position", path),
                             static_cast<int>(dir)});
    }
  } else {
    const double t1 = number_at<ConfigError>(j, "t1", "");
    cfg.photons.push_back({cfg.sites.front() - t1, +1});
    if (bell) {
      cfg.photons.push_back({cfg.sites.back() + t1, -1});
    }
  }
  return cfg;
}

Json to_json(const toyqm::ToyConfig& cfg) {
  Json j;
  j["a"] = amplitude_json(cfg.a);
  j["b"] = amplitude_json(cfg.b);
  for (std::size_t i = 0; i < cfg.sites.size(); ++i) {
    j["x" + std::to_string(i + 1)] = cfg.sites[i];
  }
  j["T"] = cfg.T;
  j["m"] = cfg.mass;
  Json photons = Json::array();
  for (const auto& p : cfg.photons) {
    photons.push_back({{"position", p.position}, {"direction", p.direction}});
  }
  j["photons"] = photons;
  return j;
}

locality::FiniteHVModel model_from_json(const Json& j) {
  using locality::kOutcomePairs;
  using locality::kSettingPairs;
  if (!j.is_object()) {
    throw ModelError("model document must be a JSON object");
  }
  locality::FiniteHVModel m;
  for (const char* key : {"lambdas", "measures", "cond"}) {
    if (!j.contains(key)) {
      field_error<ModelError>(key, "missing");
    }
  }
  const Json& lambdas = j.at("lambdas");
  if (!lambdas.is_array() || lambdas.empty()) {
    field_error<ModelError>("lambdas", "expected a non-empty array of strings");
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!lambdas[i].is_string()) {
      field_error<ModelError>("lambdas[" + std::to_string(i) + "]", "expected a string");
    }
    m.lambdas.push_back(lambdas[i].get<std::string>());
  }

  const Json& measures = j.at("measures");
  if (!measures.is_object()) {
    field_error<ModelError>("measures", "expected an object");
  }
  for (const auto& [key, _] : measures.items()) {
    bool known = false;
    for (std::size_t p = 0; p < kSettingPairs; ++p) {
      known = known || key == locality::pair_name(p);
    }
    if (!known) {
      field_error<ModelError>("measures." + key, "unknown setting pair");
    }
  }
  for (std::size_t p = 0; p < kSettingPairs; ++p) {
    const std::string key(locality::pair_name(p));
    const std::string path = "measures." + key;
    if (!measures.contains(key)) {
      field_error<ModelError>(path, "missing");
    }
    const Json& arr = measures.at(key);
    if (!arr.is_array() || arr.size() != m.lambdas.size()) {
      field_error<ModelError>(path, "expected an array with one weight per lambda");
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number()) {
        field_error<ModelError>(path + "[" + std::to_string(i) + "]", "expected a number");
      }
      m.measures[p].push_back(arr[i].get<double>());
    }
  }

  const Json& cond = j.at("cond");
  if (!cond.is_object()) {
    field_error<ModelError>("cond", "expected an object");
  }
  if (cond.size() != m.lambdas.size()) {
    field_error<ModelError>("cond", "expected exactly one entry per lambda");
  }
  for (const std::string& id : m.lambdas) {
    const std::string path = "cond." + id;
    if (!cond.contains(id)) {
      field_error<ModelError>(path, "missing");
    }
    const Json& per_lambda = cond.at(id);
    if (!per_lambda.is_object()) {
      field_error<ModelError>(path, "expected an object with keys a1b1, a1b2, a2b1, a2b2");
    }
    std::array<locality::JointTable, kSettingPairs> tables{};
    for (std::size_t p = 0; p < kSettingPairs; ++p) {
      const std::string pkey(locality::pair_name(p));
      if (!per_lambda.contains(pkey)) {
        field_error<ModelError>(path + "." + pkey, "missing");
      }
      const Json& table = per_lambda.at(pkey);
      if (!table.is_object()) {
        field_error<ModelError>(path + "." + pkey, "expected an object with keys ++, +-, -+, --");
      }
      for (std::size_t o = 0; o < kOutcomePairs; ++o) {
        tables[p][o] = number_at<ModelError>(table, std::string(locality::outcome_name(o)),
                                             path + "." + pkey + ".");
      }
      if (table.size() != kOutcomePairs) {
        field_error<ModelError>(path + "." + pkey, "unexpected extra outcome key");
      }
    }
    if (per_lambda.size() != kSettingPairs) {
      field_error<ModelError>(path, "unexpected extra setting pair");
    }
    m.cond.push_back(tables);
  }
  locality::check_structure(m);
  return m;
}

Json to_json(const locality::FiniteHVModel& m) {
  Json j;
  j["lambdas"] = m.lambdas;
  Json measures;
  for (std::size_t p = 0; p < locality::kSettingPairs; ++p) {
    measures[std::string(locality::pair_name(p))] = m.measures[p];
  }
  j["measures"] = measures;
  Json cond = Json::object();
  for (std::size_t l = 0; l < m.size(); ++l) {
    Json per_lambda;
    for (std::size_t p = 0; p < locality::kSettingPairs; ++p) {
      Json table;
      for (std::size_t o = 0; o < locality::kOutcomePairs; ++o) {
        table[std::string(locality::outcome_name(o))] = m.cond[l][p][o];
      }
      per_lambda[std::string(locality::pair_name(p))] = table;
    }
    cond[m.lambdas[l]] = per_lambda;
  }
  j["cond"] = cond;
  return j;
}

Json to_json(const locality::AuditReport& r) {
  return Json{{"normalization_ok", r.normalization_ok},
              {"tolerance", r.tolerance},
              {"oi_residual", r.oi_residual},
              {"oi_pass", r.oi_pass()},
              {"pi_residual", r.pi_residual},
              {"pi_pass", r.pi_pass()},
              {"fact_residual", r.fact_residual},
              {"fact_pass", r.fact_pass()},
              {"no_conspiracy_residual", r.no_conspiracy_residual},
              {"no_conspiracy_pass", r.no_conspiracy_pass()}};
}

Json to_json(const locality::ObservableStats& s) {
  Json joint;
  Json corr;
  for (std::size_t p = 0; p < locality::kSettingPairs; ++p) {
    Json table;
    for (std::size_t o = 0; o < locality::kOutcomePairs; ++o) {
      table[std::string(locality::outcome_name(o))] = s.joint[p][o];
    }
    joint[std::string(locality::pair_name(p))] = table;
    corr[std::string(locality::pair_name(p))] = s.correlators[p];
  }
  return Json{{"joint", joint},
              {"correlators", corr},
              {"chsh_forms", s.chsh_forms},
              {"chsh", s.chsh}};
}

Json to_json(const toyqm::FinalCondition& fc, const toyqm::BranchSet& bs) {
  Json regs = Json::array();
  for (const auto& r : fc.registrations) {
    regs.push_back({{"t", r.event.t},
                    {"position", r.position()},
                    {"kind", r.kind == toyqm::RegistrationKind::Photon ? "photon" : "lump"},
                    {"magnitude", r.magnitude},
                    {"source", r.source}});
  }
  const auto& br = bs.branches.at(fc.branch_index);
  return Json{{"branch_index", fc.branch_index},
              {"component", br.component},
              {"label", br.label},
              {"probability", fc.probability},
              {"registrations", regs}};
}

Json to_json(const beables::RegimeTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back(
        {{"t_lo", optional_number(r.t_lo)}, {"t_hi", r.t_hi}, {"site", r.site}, {"value", r.value}});
  }
  Json boundary_rows = Json::array();
  for (const auto& r : t.boundary_rows) {
    boundary_rows.push_back({{"t", r.t}, {"site", r.site}, {"value", r.value}});
  }
  return Json{{"selected_component", t.selected_component},
              {"T", t.T},
              {"boundaries", t.boundaries},
              {"rows", rows},
              {"boundary_rows", boundary_rows}};
}

Json to_json(const models::PWStats& s) {
  Json counts;
  for (std::size_t o = 0; o < locality::kOutcomePairs; ++o) {
    counts[std::string(locality::outcome_name(o))] = s.counts[o];
  }
  return Json{{"settings", {{"a", s.a.angle}, {"b", s.b.angle}}},
              {"E", s.E},
              {"stderr_estimate", s.stderr_estimate},
              {"n_samples", s.n_samples},
              {"n_resolved", s.n_resolved},
              {"n_failed_nodes", s.n_failed_nodes},
              {"n_unresolved", s.n_unresolved},
              {"counts", counts},
              {"left_plus_frequency", s.left_plus_frequency()},
              {"right_plus_frequency", s.right_plus_frequency()}};
}

}  // namespace kentsim::io
