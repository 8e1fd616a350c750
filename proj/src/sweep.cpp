#include "cid/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "cid/errors.hpp"

namespace cid {
namespace {

// Absorbs rounding when (t_max - t0) / step is an integer in exact arithmetic.
constexpr double kGridSlack = 1e-9;

std::size_t StepsWithin(double span, double step) {
  return static_cast<std::size_t>(std::floor(span / step + kGridSlack));
}

template <typename Fn>
void ParallelFor(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

KnobGrid::KnobGrid(double t_min, double t_max, double step, double t0)
    : t_min_(t_min), t_max_(t_max), step_(step), t0_(t0) {
  if (!std::isfinite(t_min) || !std::isfinite(t_max) || !std::isfinite(t0) ||
      !(step > 0.0) || !std::isfinite(step)) {
    throw Error(Errc::kDomain, "grid bounds must be finite and step > 0");
  }
  if (!(t_min <= t0 && t0 <= t_max)) {
    throw Error(Errc::kDomain,
                fmt::format("grid needs t_min <= t0 <= t_max (got {}, {}, {})", t_min,
                            t0, t_max));
  }
  below_ = StepsWithin(t0 - t_min, step);
  above_ = StepsWithin(t_max - t0, step);
}

std::vector<double> KnobGrid::Points() const {
  std::vector<double> pts;
  pts.reserve(size());
  const auto below = static_cast<long long>(below_);
  const auto above = static_cast<long long>(above_);
  for (long long i = -below; i <= above; ++i) {
    pts.push_back(t0_ + static_cast<double>(i) * step_);
  }
  return pts;
}

std::optional<std::size_t> CidCurve::NearestIndex(double t) const {
  if (points.empty()) return std::nullopt;
  const double offset = (t - grid.t0()) / grid.step();
  const double rounded = std::round(offset);
  const double index = rounded + static_cast<double>(grid.ReferenceIndex());
  if (index < 0.0 || index >= static_cast<double>(points.size())) return std::nullopt;
  const auto i = static_cast<std::size_t>(index);
  if (std::abs(points[i].t - t) > 0.5 * grid.step() * (1.0 + kGridSlack)) {
    return std::nullopt;
  }
  return i;
}

PlausibleRegion::PlausibleRegion(double lo, double hi, std::string why)
    : lower(lo), upper(hi), rationale(std::move(why)) {
  if (!(lo < hi)) {
    throw Error(Errc::kDomain,
                fmt::format("plausible region needs lower < upper (got {}, {})", lo, hi));
  }
}

KnobDistribution::KnobDistribution(std::vector<double> support,
                                   std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.empty() || support_.size() != weights_.size()) {
    throw Error(Errc::kDomain,
                fmt::format("knob distribution needs matching nonempty support and "
                            "weights ({} vs {})",
                            support_.size(), weights_.size()));
  }
  double total = 0.0;
  for (const double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(Errc::kDomain, "knob weights must be finite and >= 0");
    }
    total += w;
  }
  if (!(total > 0.0)) throw Error(Errc::kDomain, "knob weights have no mass");
  for (auto& w : weights_) w /= total;
}

std::vector<ChangePoint> FindChangePoints(const std::vector<CidPoint>& points) {
  std::vector<ChangePoint> out;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i - 1].decision != points[i].decision) {
      out.push_back({points[i - 1].t, points[i].t, points[i - 1].decision,
                     points[i].decision});
    }
  }
  return out;
}

CidCurve SweepElection(const FittedLine& fit, double x0, const KnobGrid& grid,
                       double level, IntervalKind kind, double boundary) {
  const auto ts = grid.Points();
  const Interval reference = PredictInterval(fit, x0 + grid.t0(), level, kind);
  const Decision ref_decision = DecideElection(reference, boundary);

  std::vector<CidPoint> points;
  points.reserve(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const bool is_ref = i == grid.ReferenceIndex();
    const Interval iv = is_ref ? reference : PredictInterval(fit, x0 + ts[i], level, kind);
    CidPoint p;
    p.t = ts[i];
    p.estimate = iv.center;
    p.interval = iv;
    p.decision = DecideElection(iv, boundary);
    p.d_t = DecisionIndicator(ref_decision, p.decision);
    p.j_t = IntervalOverlap(reference, iv);
    p.cid = CidGeneral(p.d_t, *p.j_t);
    points.push_back(std::move(p));
  }

  auto changes = FindChangePoints(points);
  return CidCurve{grid, std::move(points), std::move(changes), ref_decision, "overlap",
                  kind};
}

CidCurve SweepLead(const LeadPopulation& pop, const MnarMechanism& mech,
                   const KnobGrid& grid, const ImputationConfig& cfg,
                   const ThresholdRule& rule, const CostParams& costs,
                   const SweepOptions& options) {
  if (rule.threshold() != costs.threshold()) {
    throw Error(Errc::kUsage,
                fmt::format("decision threshold {} differs from cost threshold {}",
                            rule.threshold(), costs.threshold()));
  }
  if (mech.weights.size() != pop.levels()) {
    throw Error(Errc::kUsage,
                fmt::format("mechanism '{}' has {} weights for {} levels", mech.name,
                            mech.weights.size(), pop.levels()));
  }
  const auto ts = grid.Points();
  std::vector<ImputationResult> results(
      ts.size(), ImputationResult{0.0, CategoricalDistribution({1.0, 0.0}), {}});
  ParallelFor(ts.size(), options.threads,
              [&](std::size_t i) { results[i] = ImputeTheta(pop, mech, ts[i], cfg); });

  const double theta_ref = results[grid.ReferenceIndex()].theta_hat;
  const Decision ref_decision = DecideIntervention(theta_ref, rule);

  std::vector<CidPoint> points;
  points.reserve(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CidPoint p;
    p.t = ts[i];
    p.estimate = results[i].theta_hat;
    p.decision = DecideIntervention(p.estimate, rule);
    p.d_t = DecisionIndicator(ref_decision, p.decision);
    p.cid = CidLead(theta_ref, p.estimate, p.d_t, costs);
    const auto freqs = results[i].completed_freqs.probs();
    p.completed_freqs.assign(freqs.begin(), freqs.end());
    points.push_back(std::move(p));
  }

  auto changes = FindChangePoints(points);
  return CidCurve{grid, std::move(points), std::move(changes), ref_decision, "cost",
                  std::nullopt};
}

double ExpectedCid(const CidCurve& curve, const KnobDistribution& dist) {
  double total = 0.0;
  for (std::size_t i = 0; i < dist.support().size(); ++i) {
    const double t = dist.support()[i];
    const auto idx = curve.NearestIndex(t);
    if (!idx) {
      throw Error(Errc::kSupportOffGrid,
                  fmt::format("support off grid: t = {} is farther than step/2 from "
                              "every grid point",
                              t));
    }
    total += dist.weights()[i] * curve.points[*idx].cid;
  }
  return total;
}

RegionSummary AnnotatePlausibleRegion(const CidCurve& curve,
                                      const PlausibleRegion& region) {
  RegionSummary summary;
  for (const auto& p : curve.points) {
    if (p.t < region.lower || p.t > region.upper) continue;
    if (summary.points == 0) {
      summary.min_cid = summary.max_cid = p.cid;
    } else {
      summary.min_cid = std::min(summary.min_cid, p.cid);
      summary.max_cid = std::max(summary.max_cid, p.cid);
    }
    ++summary.points;
  }
  if (summary.points == 0) {
    summary.warning = fmt::format(
        "plausible region ({}, {}) contains no grid points in [{}, {}]", region.lower,
        region.upper, curve.grid.t_min(), curve.grid.t_max());
    return summary;
  }
  summary.empty = false;
  for (const auto& cp : curve.change_points) {
    if (cp.t_high >= region.lower && cp.t_low <= region.upper) {
      summary.change_points_inside.push_back(cp);
    }
  }
  return summary;
}

}  // namespace cid
