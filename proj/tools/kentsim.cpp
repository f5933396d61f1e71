// kentsim: scenario runner for the light-cone beable toy, the Bell-experiment models and the
// hidden-variable audit engine.
//
// Exit codes: 0 success, 1 an audited condition failed, 2 input error.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kentsim/beables.hpp"
#include "kentsim/error.hpp"
#include "kentsim/locality.hpp"
#include "kentsim/models.hpp"
#include "kentsim/pilot_wave.hpp"
#include "kentsim/serialization.hpp"
#include "kentsim/toyqm.hpp"

namespace {

using kentsim::io::Json;
namespace loc = kentsim::locality;
namespace mdl = kentsim::models;
namespace tq = kentsim::toyqm;
namespace bb = kentsim::beables;

constexpr int kExitOk = 0;
constexpr int kExitAuditFailed = 1;
constexpr int kExitInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  double tol = loc::kDefaultTolerance;
  std::string out;
  std::string format = "json";

  bool csv() const { return format == "csv"; }
};

std::string fmt(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InputError("cannot write '" + path + "'");
  }
  out << text;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
  } else {
    write_file(c.out, text);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json model_file_json(const loc::FiniteHVModel& m) { return kentsim::io::to_json(m); }

std::string joint_csv(const loc::ObservableStats& s) {
  std::string out = "pair,++,+-,-+,--,E\n";
  for (std::size_t p = 0; p < loc::kSettingPairs; ++p) {
    out += std::string(loc::pair_name(p));
    for (double v : s.joint[p]) {
      out += "," + fmt(v);
    }
    out += "," + fmt(s.correlators[p]) + "\n";
  }
  return out;
}

Json audit_block(const loc::FiniteHVModel& m, double tol) {
  return Json{{"audit", kentsim::io::to_json(loc::audit(m, tol))},
              {"observable", kentsim::io::to_json(loc::observable_stats(m))}};
}

// ---------------------------------------------------------------------------------------------
// kent-toy

struct ToyArgs {
  double a = 0.6;
  double b = 0.8;
  double x1 = 0.0;
  double x2 = 4.0;
  double t1 = 5.0;
  double T = 100.0;
  double m = 1.0;
  std::string config;
  std::string world = "first";
  std::string field_out;
  std::size_t nt = 100;
  std::size_t nx = 301;
  std::optional<double> t_min, t_max, x_min, x_max;
};

int run_kent_toy(const Common& c, const ToyArgs& args) {
  const tq::ToyConfig cfg =
      args.config.empty()
          ? tq::ToyConfig::single_system(args.a, args.b, args.x1, args.x2, args.t1, args.T, args.m)
          : kentsim::io::toy_config_from_json(kentsim::io::parse_json(read_file(args.config)));
  if (cfg.scenario() != tq::Scenario::SingleSystem) {
    throw kentsim::ConfigError("kent-toy needs a two-site configuration; use kent-bell");
  }
  const tq::BranchSet bs = tq::build_single_system(cfg);

  tq::FinalCondition fc;
  if (args.world == "sample") {
    fc = tq::sample_world(bs, c.seed);
  } else {
    const int component = args.world == "first" ? 1 : 2;
    const auto idx = tq::branch_for_component(bs, component);
    if (!idx) {
      throw kentsim::ConfigError("world '" + args.world + "' has zero amplitude");
    }
    fc = tq::enumerate_worlds(bs)[*idx];
  }
  const int component = bs.branches[fc.branch_index].component;

  bb::Options opts;
  opts.interval_tol = c.tol;
  const bb::RegimeTable table = bb::regime_table(cfg, component, opts);

  const bool want_field = c.csv() || !args.field_out.empty();
  std::string field_csv;
  Json grid_json = nullptr;
  if (want_field) {
    const double x1 = cfg.sites[0];
    const double x2 = cfg.sites[1];
    const double span = x2 - x1;
    bb::GridSpec grid;
    grid.t_min = args.t_min.value_or(cfg.T / 100.0);
    grid.t_max = args.t_max.value_or(cfg.T * 0.99);
    grid.x_min = args.x_min.value_or(x1 - span);
    grid.x_max = args.x_max.value_or(x2 + span);
    grid.nt = args.nt;
    grid.nx = args.nx;
    const bb::BeableField field = bb::beable_field(bs, fc, grid, opts);
    std::ostringstream os;
    bb::write_csv(field, os);
    field_csv = os.str();
    grid_json = Json{{"t_min", grid.t_min}, {"t_max", grid.t_max}, {"nt", grid.nt},
                     {"x_min", grid.x_min}, {"x_max", grid.x_max}, {"nx", grid.nx}};
    if (!args.field_out.empty()) {
      write_file(args.field_out, field_csv);
    }
  }

  if (c.csv()) {
    emit(c, field_csv);
    return kExitOk;
  }
  Json world = kentsim::io::to_json(fc, bs);
  world["selection"] = args.world;
  if (args.world == "sample") {
    world["seed"] = c.seed;
  }
  Json report{{"scenario", "kent-toy"},
              {"config", kentsim::io::to_json(cfg)},
              {"world", world},
              {"total_energy", bb::total_energy(cfg)},
              {"regime_table", kentsim::io::to_json(table)}};
  if (want_field) {
    report["field_grid"] = grid_json;
  }
  emit(c, dump(report));
  return kExitOk;
}

// ---------------------------------------------------------------------------------------------
// kent-bell

struct BellArgs {
  double a = 0.6;
  double b = 0.8;
  double x1 = -20.0;
  double x2 = -16.0;
  double x3 = 16.0;
  double x4 = 20.0;
  double t1 = 5.0;
  double T = 100.0;
  double m = 1.0;
  std::string config;
  std::string model_out;
};

int run_kent_bell(const Common& c, const BellArgs& args) {
  const tq::ToyConfig cfg =
      args.config.empty()
          ? tq::ToyConfig::bell(args.a, args.b, args.x1, args.x2, args.x3, args.x4, args.t1, args.T,
                                args.m)
          : kentsim::io::toy_config_from_json(kentsim::io::parse_json(read_file(args.config)));
  if (cfg.scenario() != tq::Scenario::Bell) {
    throw kentsim::ConfigError("kent-bell needs a four-site configuration; use kent-toy");
  }
  const tq::BranchSet bs = tq::build_bell(cfg);
  const loc::FiniteHVModel micro = loc::kentian_micro_model(bs);
  const loc::ObservableStats stats = loc::observable_stats(micro);
  const loc::FiniteHVModel averaged = loc::single_lambda_model("averaged", stats.joint);

  if (!args.model_out.empty()) {
    write_file(args.model_out, dump(model_file_json(micro)));
  }
  if (c.csv()) {
    emit(c, joint_csv(stats));
    return kExitOk;
  }
  Json worlds = Json::array();
  for (const auto& fc : tq::enumerate_worlds(bs)) {
    worlds.push_back(kentsim::io::to_json(fc, bs));
  }
  Json report{{"scenario", "kent-bell"},
              {"config", kentsim::io::to_json(cfg)},
              {"worlds", worlds},
              {"micro", audit_block(micro, c.tol)},
              {"observable_level",
               {{"oi_residual", loc::kentian_observable_oi_residual(bs)},
                {"audit", kentsim::io::to_json(loc::audit(averaged, c.tol))}}}};
  emit(c, dump(report));
  return kExitOk;
}

// ---------------------------------------------------------------------------------------------
// singlet

struct SingletArgs {
  mdl::BellSettings settings = mdl::BellSettings::canonical();
  std::size_t pairs = 100;
  std::size_t grid = 100;
  std::string model_out;
};

int run_singlet(const Common& c, const SingletArgs& args) {
  if (args.grid < 2) {
    throw kentsim::ConfigError("--grid must be >= 2");
  }
  const loc::FiniteHVModel model = mdl::singlet_hv_model(args.settings);
  const loc::ObservableStats stats = loc::observable_stats(model);
  if (!args.model_out.empty()) {
    write_file(args.model_out, dump(model_file_json(model)));
  }
  if (c.csv()) {
    emit(c, joint_csv(stats));
    return kExitOk;
  }
  const mdl::Ket4 psi = mdl::singlet();
  double max_dev = 0.0;
  for (std::size_t i = 0; i < args.grid; ++i) {
    const double delta = 2.0 * std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(args.grid);
    const auto t = mdl::joint_table(psi, mdl::SpinSetting{0.0}, mdl::SpinSetting{delta});
    const double E = t[0] - t[1] - t[2] + t[3];
    max_dev = std::max(max_dev, std::abs(E + std::cos(delta)));
  }
  Json settings{{"a1", args.settings.a1.angle},
                {"a2", args.settings.a2.angle},
                {"b1", args.settings.b1.angle},
                {"b2", args.settings.b2.angle}};
  Json report{{"scenario", "singlet"},
              {"settings", settings},
              {"model", audit_block(model, c.tol)},
              {"correlator_grid", {{"points", args.grid}, {"max_abs_deviation", max_dev}}},
              {"no_signalling",
               {{"pairs", args.pairs},
                {"seed", c.seed},
                {"residual", mdl::no_signalling_residual(psi, args.pairs, c.seed)}}}};
  emit(c, dump(report));
  return kExitOk;
}

// ---------------------------------------------------------------------------------------------
// pilot-wave

struct PilotArgs {
  mdl::PWConfig cfg;
  std::size_t n = 10000;
  std::optional<double> a, b;
  std::optional<double> y_left, y_right;
  std::string trajectory_out;
};

Json pw_config_json(const mdl::PWConfig& cfg) {
  return Json{{"sigma", cfg.sigma},   {"speed", cfg.speed}, {"wavenumber", cfg.wavenumber},
              {"dt", cfg.dt},         {"t_max", cfg.t_max}, {"t_left", cfg.t_left},
              {"t_right", cfg.t_right}};
}

int run_pilot_single(const Common& c, const PilotArgs& args) {
  const mdl::SpinSetting a{args.a.value_or(0.0)};
  const mdl::SpinSetting b{args.b.value_or(std::numbers::pi / 4.0)};
  const mdl::PWState init{*args.y_left, *args.y_right, 0.0};
  const mdl::PWRun run = mdl::pw_evolve(args.cfg, init, a, b);
  std::string traj = "t,y_left,y_right\n";
  if (c.csv() || !args.trajectory_out.empty()) {
    for (const auto& s : run.trajectory) {
      traj += fmt(s.t) + "," + fmt(s.y_left) + "," + fmt(s.y_right) + "\n";
    }
    if (!args.trajectory_out.empty()) {
      write_file(args.trajectory_out, traj);
    }
  }
  if (c.csv()) {
    emit(c, traj);
    return kExitOk;
  }
  const auto& last = run.trajectory.back();
  Json report{{"scenario", "pilot-wave"},
              {"config", pw_config_json(args.cfg)},
              {"settings", {{"a", a.angle}, {"b", b.angle}}},
              {"initial", {{"y_left", init.y_left}, {"y_right", init.y_right}}},
              {"final", {{"t", last.t}, {"y_left", last.y_left}, {"y_right", last.y_right}}},
              {"steps", run.trajectory.size() - 1},
              {"outcome", {{"left", run.outcome.left}, {"right", run.outcome.right}}}};
  emit(c, dump(report));
  return kExitOk;
}

int run_pilot_wave(const Common& c, const PilotArgs& args) {
  if (args.y_left.has_value() != args.y_right.has_value()) {
    throw InputError("--y-left and --y-right must be given together");
  }
  if (args.y_left) {
    return run_pilot_single(c, args);
  }
  if (args.n == 0) {
    throw InputError("--n must be >= 1");
  }
  std::vector<std::pair<mdl::SpinSetting, mdl::SpinSetting>> pairs;
  const bool single_pair = args.a || args.b;
  const auto canon = mdl::BellSettings::canonical();
  if (single_pair) {
    pairs.emplace_back(mdl::SpinSetting{args.a.value_or(canon.a1.angle)},
                       mdl::SpinSetting{args.b.value_or(canon.b1.angle)});
  } else {
    for (int i = 1; i <= 2; ++i) {
      for (int j = 1; j <= 2; ++j) {
        pairs.emplace_back(canon.left(i), canon.right(j));
      }
    }
  }
  std::vector<mdl::PWStats> stats;
  for (const auto& [a, b] : pairs) {
    stats.push_back(mdl::pw_equilibrium_stats(args.cfg, a, b, args.n, c.seed));
  }
  if (c.csv()) {
    std::string out = "a,b,E,stderr_estimate,n_samples,n_resolved,n_failed_nodes,n_unresolved,"
                      "++,+-,-+,--\n";
    for (const auto& s : stats) {
      out += fmt(s.a.angle) + "," + fmt(s.b.angle) + "," + fmt(s.E) + "," +
             fmt(s.stderr_estimate) + "," + std::to_string(s.n_samples) + "," +
             std::to_string(s.n_resolved) + "," + std::to_string(s.n_failed_nodes) + "," +
             std::to_string(s.n_unresolved);
      for (auto n : s.counts) {
        out += "," + std::to_string(n);
      }
      out += "\n";
    }
    emit(c, out);
    return kExitOk;
  }
  Json runs = Json::array();
  for (const auto& s : stats) {
    Json r = kentsim::io::to_json(s);
    r["quantum_E"] = -std::cos(s.a.angle - s.b.angle);
    runs.push_back(r);
  }
  Json report{{"scenario", "pilot-wave"},
              {"config", pw_config_json(args.cfg)},
              {"n", args.n},
              {"seed", c.seed},
              {"runs", runs}};
  if (!single_pair) {
    // stats order: a1b1, a1b2, a2b1, a2b2
    double left = 0.0;
    double right = 0.0;
    for (int i = 0; i < 2; ++i) {
      left = std::max(left, std::abs(stats[2 * i].left_plus_frequency() -
                                     stats[2 * i + 1].left_plus_frequency()));
      right = std::max(right, std::abs(stats[i].right_plus_frequency() -
                                       stats[2 + i].right_plus_frequency()));
    }
    report["left_marginal_difference"] = left;
    report["right_marginal_difference"] = right;
  }
  emit(c, dump(report));
  return kExitOk;
}

// ---------------------------------------------------------------------------------------------
// audit

struct AuditArgs {
  std::string model;
  std::vector<std::string> require{"oi", "pi", "fact", "nc"};
};

int run_audit(const Common& c, const AuditArgs& args) {
  const loc::FiniteHVModel model =
      kentsim::io::model_from_json(kentsim::io::parse_json(read_file(args.model)));
  const loc::AuditReport rep = loc::audit(model, c.tol);
  const loc::ObservableStats stats = loc::observable_stats(model);

  bool pass = rep.normalization_ok;
  for (const auto& r : args.require) {
    if (r == "oi") {
      pass = pass && rep.oi_pass();
    } else if (r == "pi") {
      pass = pass && rep.pi_pass();
    } else if (r == "fact") {
      pass = pass && rep.fact_pass();
    } else {
      pass = pass && rep.no_conspiracy_pass();
    }
  }

  if (c.csv()) {
    std::string out = "check,residual,pass\n";
    out += "oi," + fmt(rep.oi_residual) + "," + (rep.oi_pass() ? "1" : "0") + "\n";
    out += "pi," + fmt(rep.pi_residual) + "," + (rep.pi_pass() ? "1" : "0") + "\n";
    out += "fact," + fmt(rep.fact_residual) + "," + (rep.fact_pass() ? "1" : "0") + "\n";
    out += "nc," + fmt(rep.no_conspiracy_residual) + "," +
           (rep.no_conspiracy_pass() ? "1" : "0") + "\n";
    out += "chsh," + fmt(stats.chsh) + ",\n";
    emit(c, out);
  } else {
    Json report{{"scenario", "audit"},
                {"model", args.model},
                {"n_lambda", model.size()},
                {"audit", kentsim::io::to_json(rep)},
                {"observable", kentsim::io::to_json(stats)},
                {"required", args.require},
                {"pass", pass}};
    emit(c, dump(report));
  }
  return pass ? kExitOk : kExitAuditFailed;
}

// ---------------------------------------------------------------------------------------------
// bell-bound

struct BoundArgs {
  std::size_t n = 1000;
};

int run_bell_bound(const Common& c, const BoundArgs& args) {
  if (args.n == 0) {
    throw InputError("--n must be >= 1");
  }
  const double bound = 2.0 + c.tol;
  double max_chsh = 0.0;
  Json models = Json::array();
  std::string rows = "index,seed,n_lambda,chsh\n";
  for (std::size_t i = 0; i < args.n; ++i) {
    const std::uint64_t seed = c.seed + i;
    const std::size_t n_lambda = 2 + i % 9;
    const double chsh = loc::observable_stats(loc::random_compliant_model(seed, n_lambda)).chsh;
    max_chsh = std::max(max_chsh, chsh);
    models.push_back({{"index", i}, {"seed", seed}, {"n_lambda", n_lambda}, {"chsh", chsh}});
    rows += std::to_string(i) + "," + std::to_string(seed) + "," + std::to_string(n_lambda) +
            "," + fmt(chsh) + "\n";
  }
  const bool pass = max_chsh <= bound;
  if (c.csv()) {
    emit(c, rows);
  } else {
    emit(c, dump(Json{{"scenario", "bell-bound"},
                      {"n_models", args.n},
                      {"seed", c.seed},
                      {"bound", bound},
                      {"max_chsh", max_chsh},
                      {"pass", pass},
                      {"models", models}}));
  }
  return pass ? kExitOk : kExitAuditFailed;
}

void add_common(CLI::App& app, Common& c) {
  app.add_option("--seed", c.seed, "Random seed");
  app.add_option("--tol", c.tol, "Tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", c.out, "Output path (default: stdout)");
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Light-cone beables and hidden-variable audits"};
  app.require_subcommand(1);
  Common common;

  ToyArgs toy;
  auto* toy_cmd = app.add_subcommand("kent-toy", "Single-system toy: regime table and beable field");
  add_common(*toy_cmd, common);
  {
    auto* cfg = toy_cmd->add_option("--config", toy.config, "ToyConfig JSON file");
    for (auto [name, ref] : std::initializer_list<std::pair<const char*, double*>>{
             {"--a", &toy.a}, {"--b", &toy.b}, {"--x1", &toy.x1}, {"--x2", &toy.x2},
             {"--t1", &toy.t1}, {"--T", &toy.T}, {"--m", &toy.m}}) {
      toy_cmd->add_option(name, *ref)->excludes(cfg);
    }
    toy_cmd->add_option("--world", toy.world, "Selected world")
        ->check(CLI::IsMember({"first", "second", "sample"}));
    toy_cmd->add_option("--field-out", toy.field_out, "Write the beable field CSV here");
    toy_cmd->add_option("--nt", toy.nt, "Field grid points in t")->check(CLI::PositiveNumber);
    toy_cmd->add_option("--nx", toy.nx, "Field grid points in x")->check(CLI::PositiveNumber);
    toy_cmd->add_option("--t-min", toy.t_min);
    toy_cmd->add_option("--t-max", toy.t_max);
    toy_cmd->add_option("--x-min", toy.x_min);
    toy_cmd->add_option("--x-max", toy.x_max);
  }

  BellArgs bell;
  auto* bell_cmd = app.add_subcommand("kent-bell", "Bell toy: micro- and observable-level audit");
  add_common(*bell_cmd, common);
  {
    auto* cfg = bell_cmd->add_option("--config", bell.config, "ToyConfig JSON file");
    for (auto [name, ref] : std::initializer_list<std::pair<const char*, double*>>{
             {"--a", &bell.a}, {"--b", &bell.b}, {"--x1", &bell.x1}, {"--x2", &bell.x2},
             {"--x3", &bell.x3}, {"--x4", &bell.x4}, {"--t1", &bell.t1}, {"--T", &bell.T},
             {"--m", &bell.m}}) {
      bell_cmd->add_option(name, *ref)->excludes(cfg);
    }
    bell_cmd->add_option("--model-out", bell.model_out, "Write the micro-level model file here");
  }

  SingletArgs singlet;
  auto* singlet_cmd = app.add_subcommand("singlet", "Singlet Born model at four settings");
  add_common(*singlet_cmd, common);
  singlet_cmd->add_option("--a1", singlet.settings.a1.angle);
  singlet_cmd->add_option("--a2", singlet.settings.a2.angle);
  singlet_cmd->add_option("--b1", singlet.settings.b1.angle);
  singlet_cmd->add_option("--b2", singlet.settings.b2.angle);
  singlet_cmd->add_option("--pairs", singlet.pairs, "Random setting pairs for no-signalling");
  singlet_cmd->add_option("--grid", singlet.grid, "Angle grid points for the correlator check");
  singlet_cmd->add_option("--model-out", singlet.model_out, "Write the model file here");

  PilotArgs pilot;
  auto* pilot_cmd = app.add_subcommand("pilot-wave", "Pilot-wave Stern-Gerlach Bell toy");
  add_common(*pilot_cmd, common);
  pilot_cmd->add_option("--n", pilot.n, "Equilibrium samples per setting pair");
  pilot_cmd->add_option("--dt", pilot.cfg.dt);
  pilot_cmd->add_option("--sigma", pilot.cfg.sigma);
  pilot_cmd->add_option("--speed", pilot.cfg.speed);
  pilot_cmd->add_option("--k", pilot.cfg.wavenumber);
  pilot_cmd->add_option("--t-max", pilot.cfg.t_max);
  pilot_cmd->add_option("--t-left", pilot.cfg.t_left);
  pilot_cmd->add_option("--t-right", pilot.cfg.t_right);
  pilot_cmd->add_option("--a", pilot.a, "Left angle (default: all canonical pairs)");
  pilot_cmd->add_option("--b", pilot.b, "Right angle (default: all canonical pairs)");
  pilot_cmd->add_option("--y-left", pilot.y_left, "Run one trajectory from this position");
  pilot_cmd->add_option("--y-right", pilot.y_right, "Run one trajectory from this position");
  pilot_cmd->add_option("--trajectory-out", pilot.trajectory_out, "Trajectory CSV path");

  AuditArgs audit;
  auto* audit_cmd = app.add_subcommand("audit", "Audit a hidden-variable model file");
  add_common(*audit_cmd, common);
  audit_cmd->add_option("model", audit.model, "Model JSON file")->required();
  audit_cmd->add_option("--require", audit.require, "Checks that decide the exit code")
      ->delimiter(',')
      ->check(CLI::IsMember({"oi", "pi", "fact", "nc"}));

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("bell-bound", "CHSH over random compliant models");
  add_common(*bound_cmd, common);
  bound_cmd->add_option("--n", bound.n, "Number of models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*toy_cmd) {
      return run_kent_toy(common, toy);
    }
    if (*bell_cmd) {
      return run_kent_bell(common, bell);
    }
    if (*singlet_cmd) {
      return run_singlet(common, singlet);
    }
    if (*pilot_cmd) {
      return run_pilot_wave(common, pilot);
    }
    if (*audit_cmd) {
      return run_audit(common, audit);
    }
    return run_bell_bound(common, bound);
  } catch (const kentsim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitInputError;
}
