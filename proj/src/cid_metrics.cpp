#include "cid/cid_metrics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "cid/errors.hpp"

namespace cid {
namespace {

void RequireProportion(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(Errc::kDomain,
                fmt::format("{} must lie in [0, 1], got {}", what, v));
  }
}

void RequireIndicator(int d) {
  if (d != 0 && d != 1) {
    throw Error(Errc::kDomain, fmt::format("indicator must be 0 or 1, got {}", d));
  }
}

}  // namespace

CostParams::CostParams(double a, double b, double threshold, double theta_wc)
    : a_(a), b_(b), threshold_(threshold), theta_wc_(theta_wc) {
  if (!(a >= 0.0) || !(b >= 0.0) || (a == 0.0 && b == 0.0)) {
    throw Error(Errc::kDomain,
                fmt::format("cost weights must be >= 0 and not both zero "
                            "(a={}, b={})",
                            a, b));
  }
  if (!(threshold < theta_wc && theta_wc <= 1.0)) {
    throw Error(Errc::kDomain,
                fmt::format("need threshold < theta_wc <= 1 (threshold={}, "
                            "theta_wc={})",
                            threshold, theta_wc));
  }
}

double IntervalOverlap(const Interval& first, const Interval& second) {
  const double w1 = first.width();
  const double w2 = second.width();
  if (w1 <= 0.0 || w2 <= 0.0) {
    const bool same = first.lower == second.lower && first.upper == second.upper;
    return same ? 1.0 : 0.0;
  }
  const double lo = std::max(first.lower, second.lower);
  const double hi = std::min(first.upper, second.upper);
  const double overlap = hi > lo ? hi - lo : 0.0;
  const double j = 0.5 * (overlap / w1 + overlap / w2);
  return std::clamp(j, 0.0, 1.0);
}

double CidGeneral(int d_t, double j_t) {
  RequireIndicator(d_t);
  RequireProportion(j_t, "overlap");
  return d_t * (1.0 + j_t);
}

double WorstCaseTheta(std::uint64_t observed_high_count, std::uint64_t n_observed,
                      std::uint64_t n_total) {
  if (observed_high_count > n_observed || n_observed > n_total || n_total == 0) {
    throw Error(Errc::kDomain,
                fmt::format("need high <= observed <= total, total > 0 "
                            "(high={}, observed={}, total={})",
                            observed_high_count, n_observed, n_total));
  }
  const auto missing = n_total - n_observed;
  return static_cast<double>(observed_high_count + missing) /
         static_cast<double>(n_total);
}

double ScalingConstant(double theta_ref, const CostParams& params) {
  const double thr = params.threshold();
  return std::max((theta_ref - thr) * params.a(),
                  (params.theta_wc() - std::max(theta_ref, thr)) * params.b());
}

double CidLead(double theta_ref, double theta_t, int d_t, const CostParams& params) {
  RequireProportion(theta_ref, "reference estimate");
  RequireProportion(theta_t, "perturbed estimate");
  RequireIndicator(d_t);
  if (theta_t > params.theta_wc()) {
    throw Error(Errc::kDomain,
                fmt::format("perturbed estimate {} exceeds worst case {}", theta_t,
                            params.theta_wc()));
  }
  const double c = ScalingConstant(theta_ref, params);
  if (!(c > 0.0)) {
    throw Error(Errc::kDegenerateScaling,
                "degenerate scaling: maximum attainable cost is zero");
  }
  const double thr = params.threshold();

  if (theta_ref > thr) {
    // Overestimate: the intervention is sized for theta_ref, so the wasted
    // share is capped at the distance down to the target.
    const double cost = theta_ref >= theta_t
                            ? std::min(theta_ref - thr, theta_ref - theta_t) * params.a()
                            : (theta_t - theta_ref) * params.b();
    return 1.0 - cost / c;
  }

  if ((d_t == 0) != (theta_t > thr)) {
    throw Error(Errc::kDomain,
                fmt::format("indicator {} is inconsistent with estimate {} "
                            "against threshold {}",
                            d_t, theta_t, thr));
  }
  return 1.0 - (1 - d_t) * (theta_t - thr) * params.b() / c;
}

}  // namespace cid
