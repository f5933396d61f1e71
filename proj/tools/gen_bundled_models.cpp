// Writes the bundled example model files into the given directory:
//   singlet.json          singlet Born model at the canonical settings
//   kent_bell_micro.json  micro-level model of the Bell toy (a = 0.6, b = 0.8)
//   local.json            local deterministic model on 64 cells

#include <filesystem>
#include <fstream>
#include <iostream>

#include "kentsim/locality.hpp"
#include "kentsim/models.hpp"
#include "kentsim/serialization.hpp"
#include "kentsim/toyqm.hpp"

namespace {

bool write(const std::filesystem::path& path, const kentsim::locality::FiniteHVModel& m) {
  std::ofstream out(path, std::ios::binary);
  out << kentsim::io::to_json(m).dump(2) << "\n";
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_bundled_models <output-dir>\n";
    return 2;
  }
  const std::filesystem::path dir(argv[1]);
  std::filesystem::create_directories(dir);

  const auto bell = kentsim::toyqm::build_bell(
      kentsim::toyqm::ToyConfig::bell(0.6, 0.8, -20.0, -16.0, 16.0, 20.0, 5.0, 100.0));
  const bool ok = write(dir / "singlet.json", kentsim::models::singlet_hv_model()) &&
                  write(dir / "kent_bell_micro.json", kentsim::locality::kentian_micro_model(bell)) &&
                  write(dir / "local.json", kentsim::models::local_deterministic_model(64));
  if (!ok) {
    std::cerr << "gen_bundled_models: cannot write into " << dir << "\n";
    return 1;
  }
  return 0;
}
