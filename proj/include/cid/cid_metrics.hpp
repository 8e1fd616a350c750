#pragma once

#include <cstdint>

#include "cid/regression.hpp"

namespace cid {

// Linear cost model for the intervention metric. `a` is the cost per unit of
// unnecessary intervention, `b` the cost per unit of unmet target, and
// theta_wc the worst-case proportion if every unobserved unit were high.
class CostParams {
 public:
  CostParams(double a, double b, double threshold, double theta_wc);

  double a() const { return a_; }
  double b() const { return b_; }
  double threshold() const { return threshold_; }
  double theta_wc() const { return theta_wc_; }

 private:
  double a_;
  double b_;
  double threshold_;
  double theta_wc_;
};

// Mean of the intersection length relative to each interval's length, in
// [0, 1]. Zero-width inputs give 1 for the identical point and 0 otherwise.
double IntervalOverlap(const Interval& first, const Interval& second);

// d_t * (1 + j_t); lies in {0} or [1, 2].
double CidGeneral(int d_t, double j_t);

// Proportion above the cutoff if every missing unit were above it.
double WorstCaseTheta(std::uint64_t observed_high_count, std::uint64_t n_observed,
                      std::uint64_t n_total);

// Maximum attainable cost for a given reference estimate; normalizes CidLead.
double ScalingConstant(double theta_ref, const CostParams& params);

// Cost-normalized confidence in the reference intervention decision when the
// estimate under departure t is theta_t. Result lies in [0, 1].
double CidLead(double theta_ref, double theta_t, int d_t, const CostParams& params);

}  // namespace cid
