#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cid/imputation.hpp"
#include "cid/regression.hpp"
#include "cid/sweep.hpp"

namespace cid {

enum class Mode { kElection, kLead };

struct ElectionOptions {
  double x0 = 0.0;
  double level = 0.95;
  IntervalKind interval_kind = IntervalKind::kMeanResponse;
  double boundary = 50.0;
  std::optional<PlausibleRegion> plausible_region;
};

struct LeadOptions {
  std::uint64_t n_total = 0;
  std::size_t levels = 10;
  std::size_t high_cutoff = 3;
  std::size_t m = 5;
  double threshold = 0.20;
  double a = 1.0;
  double b = 1.0;
  MnarMechanism mechanism;
  std::vector<double> snapshot_ts;
  unsigned threads = 1;
};

struct AnalysisConfig {
  Mode mode = Mode::kElection;
  std::filesystem::path dataset_path;
  KnobGrid grid{-4.0, 4.0, 0.02, 0.0};
  std::uint64_t seed = 20240101;
  std::filesystem::path csv_path;
  std::filesystem::path svg_path;
  std::optional<ElectionOptions> election;
  std::optional<LeadOptions> lead;
  std::optional<KnobDistribution> knob_distribution;
};

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
  std::optional<double> grid_step;
};

// Validates the document and fills defaults. Relative dataset paths resolve
// against `base_dir`; relative output paths are left for ApplyOverrides.
// Errors carry Errc::kConfig and name the offending field path.
AnalysisConfig ParseConfig(const nlohmann::json& doc,
                           const std::filesystem::path& base_dir = {});
AnalysisConfig ParseConfigText(std::string_view text,
                               const std::filesystem::path& base_dir = {});
AnalysisConfig LoadConfig(const std::filesystem::path& path);

void ApplyOverrides(AnalysisConfig& cfg, const ConfigOverrides& overrides);

// Named mechanism lookup; throws Errc::kConfig for unknown names.
MnarMechanism MechanismByName(std::string_view name);

std::string_view ModeName(Mode mode);

}  // namespace cid
