#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cid/imputation.hpp"
#include "cid/sweep.hpp"

namespace cid {

enum class PanelKind { kCidCurve, kIntervalBars, kDistributionBars };

struct FigureColors {
  std::string curve = "black";
  std::string reference = "red";
  std::string region = "purple";
  std::string reference_interval = "blue";
  std::string interval = "gray";
  std::string bars = "steelblue";
  std::string boundary = "darkgray";
};

struct FigureSpec {
  int width_px = 800;
  int height_px = 640;
  std::vector<PanelKind> panels;
  std::optional<double> reference_line;
  std::optional<std::pair<double, double>> region_lines;
  std::string title;
  FigureColors colors;
};

struct Snapshot {
  double t = 0.0;
  CategoricalDistribution freqs;
};

FigureSpec ElectionFigureSpec(const CidCurve& curve,
                              std::optional<PlausibleRegion> region = std::nullopt);
FigureSpec LeadFigureSpec(const CidCurve& curve, const std::string& mechanism_name);

// Stacked CID panel and per-t interval bars. Every panel group declares its
// axis transform as data-x-domain/data-x-range/data-y-domain/data-y-range
// attributes so plotted coordinates can be mapped back to data values.
std::string RenderElectionFigure(const CidCurve& curve, const FigureSpec& spec);

// CID panel plus one level-frequency bar chart per snapshot.
std::string RenderLeadFigure(const CidCurve& curve, std::span<const Snapshot> snapshots,
                             const FigureSpec& spec);

// Completed-data frequencies stored on the curve at each requested t.
std::vector<Snapshot> SnapshotsAt(const CidCurve& curve, std::span<const double> ts);

}  // namespace cid
