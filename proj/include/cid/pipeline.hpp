#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "cid/config.hpp"
#include "cid/sweep.hpp"

namespace cid {

struct AnalysisResult {
  CidCurve curve;
  std::string csv;
  std::string svg;
  std::string verdict;
  std::optional<RegionSummary> region_summary;
  std::optional<double> expected_cid;
};

// Runs the configured pipeline in memory without touching the output paths.
AnalysisResult Analyze(const AnalysisConfig& cfg);

// Analyze, then write CSV and SVG atomically and print the verdict line.
AnalysisResult Run(const AnalysisConfig& cfg, std::ostream& out);

}  // namespace cid
