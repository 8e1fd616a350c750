#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cid/config.hpp"
#include "cid/errors.hpp"
#include "cid/imputation.hpp"
#include "cid/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int ListMechanisms() {
  for (const auto& m : cid::BuiltinMechanisms()) {
    std::string weights;
    for (const double w : m.weights) weights += fmt::format("{}{:g}", weights.empty() ? "" : ", ", w);
    std::cout << fmt::format("{:<11} ({})\n", m.name, weights);
  }
  return kExitOk;
}

int RunConfig(const std::filesystem::path& config_path, const cid::ConfigOverrides& ov) {
  cid::AnalysisConfig cfg;
  try {
    cfg = cid::LoadConfig(config_path);
    cid::ApplyOverrides(cfg, ov);
  } catch (const cid::Error& e) {
    std::cerr << "cid: config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    cid::Run(cfg, std::cout);
  } catch (const cid::Error& e) {
    std::cerr << fmt::format("cid: {} ({}): {}\n", cid::ModeName(cfg.mode),
                             cid::ErrcName(e.code()), e.what());
    return e.code() == cid::Errc::kConfig ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "cid: runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Confidence-in-decision sensitivity analysis"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> grid_step;
  auto* run = app.add_subcommand("run", "Run the analysis described by a JSON config");
  run->add_option("config", config_path, "Path to the config file")->required();
  run->add_option("--seed", seed, "Override the random seed");
  run->add_option("--out-dir", out_dir, "Directory for relative output paths");
  run->add_option("--grid-step", grid_step, "Override the knob grid step");

  app.add_subcommand("mechanisms", "List built-in missingness mechanisms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (app.got_subcommand("mechanisms")) return ListMechanisms();

  cid::ConfigOverrides ov;
  ov.seed = seed;
  if (out_dir) ov.out_dir = std::filesystem::path(*out_dir);
  ov.grid_step = grid_step;
  return RunConfig(config_path, ov);
}
