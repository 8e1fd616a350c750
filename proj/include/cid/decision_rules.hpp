#pragma once

#include <string_view>
#include <variant>

#include "cid/regression.hpp"

namespace cid {

// Ordered so that a larger value favours the incumbent.
enum class ElectionDecision { kChallengerWins = 0, kUnclear = 1, kIncumbentWins = 2 };

enum class InterventionDecision { kDontIntervene = 0, kIntervene = 1 };

using Decision = std::variant<ElectionDecision, InterventionDecision>;

class ThresholdRule {
 public:
  ThresholdRule() = default;
  explicit ThresholdRule(double threshold);

  double threshold() const { return threshold_; }

 private:
  double threshold_ = 0.20;
};

// Incumbent if the whole interval lies above the boundary, challenger if it
// lies below, unclear otherwise. An endpoint exactly on the boundary is
// unclear.
ElectionDecision DecideElection(const Interval& interval, double boundary = 50.0);

// Intervene iff theta_hat > threshold.
InterventionDecision DecideIntervention(double theta_hat,
                                        const ThresholdRule& rule = ThresholdRule{});

// 1 when the candidate matches the reference, 0 otherwise. Both decisions must
// come from the same rule.
int DecisionIndicator(const Decision& reference, const Decision& candidate);

std::string_view DecisionName(ElectionDecision d);
std::string_view DecisionName(InterventionDecision d);
std::string_view DecisionName(const Decision& d);

}  // namespace cid
