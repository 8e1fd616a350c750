#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cid/cid_metrics.hpp"
#include "cid/decision_rules.hpp"
#include "cid/imputation.hpp"
#include "cid/regression.hpp"

namespace cid {

// Knob values t0 + i * step for every integer i that keeps the value inside
// [t_min, t_max]. The reference t0 is always a grid point.
class KnobGrid {
 public:
  KnobGrid(double t_min, double t_max, double step, double t0 = 0.0);

  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  double step() const { return step_; }
  double t0() const { return t0_; }

  std::vector<double> Points() const;
  std::size_t ReferenceIndex() const { return below_; }
  std::size_t size() const { return below_ + above_ + 1; }

 private:
  double t_min_;
  double t_max_;
  double step_;
  double t0_;
  std::size_t below_ = 0;
  std::size_t above_ = 0;
};

struct CidPoint {
  double t = 0.0;
  double estimate = 0.0;
  std::optional<Interval> interval;
  Decision decision;
  int d_t = 1;
  std::optional<double> j_t;
  double cid = 0.0;
  std::vector<double> completed_freqs;  // lead sweeps only
};

// Adjacent grid points whose decisions differ.
struct ChangePoint {
  double t_low = 0.0;
  double t_high = 0.0;
  Decision from;
  Decision to;

  double midpoint() const { return 0.5 * (t_low + t_high); }
};

struct CidCurve {
  KnobGrid grid;
  std::vector<CidPoint> points;
  std::vector<ChangePoint> change_points;
  Decision reference_decision;
  std::string metric;  // "overlap" or "cost"
  std::optional<IntervalKind> interval_kind;

  const CidPoint& reference() const { return points[grid.ReferenceIndex()]; }

  // Index of the grid point within step/2 of t, if any.
  std::optional<std::size_t> NearestIndex(double t) const;
};

struct PlausibleRegion {
  PlausibleRegion(double lower, double upper, std::string rationale = {});

  double lower;
  double upper;
  std::string rationale;
};

class KnobDistribution {
 public:
  // Weights are normalized to sum to one.
  KnobDistribution(std::vector<double> support, std::vector<double> weights);

  static KnobDistribution PointMass(double t) { return {{t}, {1.0}}; }

  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> support_;
  std::vector<double> weights_;
};

struct RegionSummary {
  bool empty = true;
  std::string warning;
  std::size_t points = 0;
  double min_cid = 0.0;
  double max_cid = 0.0;
  std::vector<ChangePoint> change_points_inside;
};

struct SweepOptions {
  unsigned threads = 1;
};

// Election pipeline: interval at x0 + t, three-way decision against the
// boundary, overlap with the reference interval, CID = D_t (1 + J_t).
CidCurve SweepElection(const FittedLine& fit, double x0, const KnobGrid& grid,
                       double level, IntervalKind kind, double boundary = 50.0);

// Lead pipeline: multiply-imputed estimate under the tilted mechanism at each
// t, intervention decision, cost-normalized CID against the t0 estimate.
// Output is independent of `options.threads`.
CidCurve SweepLead(const LeadPopulation& pop, const MnarMechanism& mech,
                   const KnobGrid& grid, const ImputationConfig& cfg,
                   const ThresholdRule& rule, const CostParams& costs,
                   const SweepOptions& options = {});

double ExpectedCid(const CidCurve& curve, const KnobDistribution& dist);

RegionSummary AnnotatePlausibleRegion(const CidCurve& curve,
                                      const PlausibleRegion& region);

// Grid-adjacent pairs whose decisions differ.
std::vector<ChangePoint> FindChangePoints(const std::vector<CidPoint>& points);

}  // namespace cid
