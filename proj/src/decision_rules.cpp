#include "cid/decision_rules.hpp"

#include <cmath>

#include <fmt/format.h>

#include "cid/errors.hpp"

namespace cid {

ThresholdRule::ThresholdRule(double threshold) : threshold_(threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(Errc::kDomain,
                fmt::format("threshold must lie in (0, 1), got {}", threshold));
  }
}

ElectionDecision DecideElection(const Interval& interval, double boundary) {
  if (boundary < interval.lower) return ElectionDecision::kIncumbentWins;
  if (interval.upper < boundary) return ElectionDecision::kChallengerWins;
  return ElectionDecision::kUnclear;
}

InterventionDecision DecideIntervention(double theta_hat,
                                        const ThresholdRule& rule) {
  if (!(theta_hat >= 0.0 && theta_hat <= 1.0)) {
    throw Error(Errc::kDomain,
                fmt::format("proportion must lie in [0, 1], got {}", theta_hat));
  }
  return theta_hat > rule.threshold() ? InterventionDecision::kIntervene
                                      : InterventionDecision::kDontIntervene;
}

int DecisionIndicator(const Decision& reference, const Decision& candidate) {
  if (reference.index() != candidate.index()) {
    throw Error(Errc::kUsage,
                "cannot compare decisions produced by different rules");
  }
  return reference == candidate ? 1 : 0;
}

std::string_view DecisionName(ElectionDecision d) {
  switch (d) {
    case ElectionDecision::kIncumbentWins:
      return "incumbent";
    case ElectionDecision::kUnclear:
      return "unclear";
    case ElectionDecision::kChallengerWins:
      return "challenger";
  }
  return "unclear";
}

std::string_view DecisionName(InterventionDecision d) {
  return d == InterventionDecision::kIntervene ? "intervene" : "no-intervene";
}

std::string_view DecisionName(const Decision& d) {
  return std::visit([](auto v) { return DecisionName(v); }, d);
}

}  // namespace cid
