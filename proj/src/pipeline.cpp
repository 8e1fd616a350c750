#include "cid/pipeline.hpp"

#include <fmt/format.h>

#include "cid/cid_metrics.hpp"
#include "cid/errors.hpp"
#include "cid/io.hpp"
#include "cid/render.hpp"

namespace cid {
namespace {

std::string FormatChangePoints(const CidCurve& curve) {
  if (curve.change_points.empty()) return "no change points";
  std::string out = curve.change_points.size() == 1 ? "change point " : "change points ";
  for (std::size_t i = 0; i < curve.change_points.size(); ++i) {
    const auto& cp = curve.change_points[i];
    out += fmt::format("{}[{:.2f}, {:.2f}]", i ? ", " : "", cp.t_low, cp.t_high);
  }
  return out;
}

AnalysisResult AnalyzeElection(const AnalysisConfig& cfg) {
  const auto& opt = *cfg.election;
  const auto data = ReadElectionCsv(cfg.dataset_path);
  const auto fit = FitSimpleOls(data);
  auto curve = SweepElection(fit, opt.x0, cfg.grid, opt.level, opt.interval_kind,
                             opt.boundary);

  auto spec = ElectionFigureSpec(curve, opt.plausible_region);
  spec.title = fmt::format("{} ({} {:g}% intervals)", spec.title,
                           IntervalKindName(opt.interval_kind), opt.level * 100.0);

  AnalysisResult result{curve, CurveToCsv(curve), RenderElectionFigure(curve, spec), {},
                        std::nullopt, std::nullopt};
  result.verdict = fmt::format("{}; {}", DecisionName(curve.reference_decision),
                               FormatChangePoints(curve));
  if (opt.plausible_region) {
    result.region_summary = AnnotatePlausibleRegion(curve, *opt.plausible_region);
    if (result.region_summary->empty) {
      result.verdict += fmt::format("; {}", result.region_summary->warning);
    } else {
      result.verdict += fmt::format(
          "; min CID in plausible region {:.3f} ({} change points inside)",
          result.region_summary->min_cid,
          result.region_summary->change_points_inside.size());
    }
  }
  result.verdict += fmt::format("; {} interval", IntervalKindName(opt.interval_kind));
  return result;
}

AnalysisResult AnalyzeLead(const AnalysisConfig& cfg) {
  const auto& opt = *cfg.lead;
  auto counts = ReadLeadCountsCsv(cfg.dataset_path);
  if (counts.size() != opt.levels) {
    throw Error(Errc::kConfig,
                fmt::format("lead.levels: config says {} levels, dataset has {}",
                            opt.levels, counts.size()));
  }
  const LeadPopulation pop(std::move(counts), opt.n_total, opt.high_cutoff);
  const double theta_wc =
      WorstCaseTheta(pop.observed_high_count(), pop.n_observed(), pop.n_total());
  const CostParams costs(opt.a, opt.b, opt.threshold, theta_wc);
  const ThresholdRule rule(opt.threshold);
  const ImputationConfig icfg{opt.m, cfg.seed};

  auto curve = SweepLead(pop, opt.mechanism, cfg.grid, icfg, rule, costs,
                         SweepOptions{opt.threads});

  std::vector<double> snapshot_ts = opt.snapshot_ts;
  if (snapshot_ts.empty()) snapshot_ts.push_back(cfg.grid.t0());
  const auto snapshots = SnapshotsAt(curve, snapshot_ts);
  const auto spec = LeadFigureSpec(curve, opt.mechanism.name);

  AnalysisResult result{curve, CurveToCsv(curve), RenderLeadFigure(curve, snapshots, spec),
                        {}, std::nullopt, std::nullopt};
  result.verdict = fmt::format("{}; {}; reference estimate {:.4f}, C = {:.4f}",
                               DecisionName(curve.reference_decision),
                               FormatChangePoints(curve), curve.reference().estimate,
                               ScalingConstant(curve.reference().estimate, costs));
  return result;
}

}  // namespace

AnalysisResult Analyze(const AnalysisConfig& cfg) {
  auto result = cfg.mode == Mode::kElection ? AnalyzeElection(cfg) : AnalyzeLead(cfg);
  if (cfg.knob_distribution) {
    result.expected_cid = ExpectedCid(result.curve, *cfg.knob_distribution);
    result.verdict += fmt::format("; expected CID {:.4f}", *result.expected_cid);
  }
  return result;
}

AnalysisResult Run(const AnalysisConfig& cfg, std::ostream& out) {
  auto result = Analyze(cfg);
  WriteFilesAtomic({{cfg.csv_path, result.csv}, {cfg.svg_path, result.svg}});
  out << result.verdict << '\n';
  return result;
}

}  // namespace cid
