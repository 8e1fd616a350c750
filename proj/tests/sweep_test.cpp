#include "cid/sweep.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "cid/errors.hpp"
#include "cid/io.hpp"
#include "test_data.hpp"

namespace cid {
namespace {

FittedLine HibbsFit() { return FitSimpleOls(ReadElectionCsv(testing::DataDir() / "hibbs.csv")); }

CidCurve HibbsCurve(double step = 0.02) {
  return SweepElection(HibbsFit(), -0.728, KnobGrid(-4, 4, step), 0.95,
                       IntervalKind::kMeanResponse);
}

LeadPopulation ObservedLeadPopulation() {
  return LeadPopulation(ApportionCounts(testing::kObservedLeadProbs, testing::kObserved),
                        testing::kPopulation, 3);
}

CostParams CostsFor(const LeadPopulation& pop) {
  return CostParams(1, 1, 0.20,
                    WorstCaseTheta(pop.observed_high_count(), pop.n_observed(), pop.n_total()));
}

bool BracketNear(const CidCurve& curve, double target, double tol) {
  for (const auto& cp : curve.change_points) {
    if (cp.t_low - tol <= target && target <= cp.t_high + tol) return true;
  }
  return false;
}

TEST(KnobGrid, ContainsReferenceExactly) {
  const KnobGrid g(-1.0, 2.0, 0.3, 0.1);
  const auto pts = g.Points();
  EXPECT_EQ(pts[g.ReferenceIndex()], 0.1);
  EXPECT_EQ(pts.size(), g.size());
  EXPECT_GE(pts.front(), -1.0 - 1e-12);
  EXPECT_LE(pts.back(), 2.0 + 1e-12);
  EXPECT_EQ(KnobGrid(-4, 4, 0.02).size(), 401u);
  EXPECT_EQ(KnobGrid(0, 0, 0.02).size(), 1u);
  EXPECT_THROW(KnobGrid(1, 2, 0.1, 0.0), Error);
  EXPECT_THROW(KnobGrid(-1, 1, 0.0), Error);
}

TEST(SweepElection, PublishedChangePoints) {
  const auto curve = HibbsCurve();
  ASSERT_EQ(curve.change_points.size(), 2u);
  EXPECT_EQ(curve.reference_decision, Decision{ElectionDecision::kChallengerWins});
  EXPECT_TRUE(BracketNear(curve, 0.88, 0.05));
  EXPECT_TRUE(BracketNear(curve, 2.62, 0.05));
  EXPECT_EQ(curve.change_points[0].to, Decision{ElectionDecision::kUnclear});
  EXPECT_EQ(curve.change_points[1].to, Decision{ElectionDecision::kIncumbentWins});
}

TEST(SweepElection, OverlapAtLeastHalfRegion) {
  const auto curve = HibbsCurve();
  double lo = 1e9, hi = -1e9;
  for (const auto& p : curve.points) {
    if (*p.j_t >= 0.5) {
      lo = std::min(lo, p.t);
      hi = std::max(hi, p.t);
    }
  }
  EXPECT_NEAR(lo, -2.0, 0.05);
  EXPECT_NEAR(hi, 1.2, 0.05);
  // Contiguous.
  for (const auto& p : curve.points) {
    if (p.t >= lo && p.t <= hi) {
      EXPECT_GE(*p.j_t, 0.5);
    }
  }
}

TEST(SweepElection, ReferencePointAndAffineEstimates) {
  const auto fit = HibbsFit();
  const auto curve = HibbsCurve();
  const auto& ref = curve.reference();
  EXPECT_EQ(ref.t, 0.0);
  EXPECT_EQ(ref.d_t, 1);
  EXPECT_EQ(ref.cid, 2.0);
  for (const auto& p : curve.points) {
    EXPECT_NEAR(p.estimate, ref.estimate + fit.slope * p.t, 1e-9);
    EXPECT_LE(p.cid, 2.0);
  }
}

TEST(SweepElection, SinglePointGrid) {
  const auto curve = SweepElection(HibbsFit(), -0.728, KnobGrid(0, 0, 0.02), 0.95,
                                   IntervalKind::kMeanResponse);
  ASSERT_EQ(curve.points.size(), 1u);
  EXPECT_EQ(curve.points[0].cid, 2.0);
  EXPECT_TRUE(curve.change_points.empty());
}

TEST(SweepElection, BracketsAreAdjacentDecisionChanges) {
  const auto curve = HibbsCurve();
  std::size_t expected = 0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    if (DecisionName(curve.points[i].decision) != DecisionName(curve.points[i - 1].decision)) {
      ASSERT_LT(expected, curve.change_points.size());
      EXPECT_EQ(curve.change_points[expected].t_low, curve.points[i - 1].t);
      EXPECT_EQ(curve.change_points[expected].t_high, curve.points[i].t);
      EXPECT_NE(curve.change_points[expected].from, curve.change_points[expected].to);
      ++expected;
    }
  }
  EXPECT_EQ(expected, curve.change_points.size());
}

TEST(SweepElection, HalvingStepKeepsEveryBracket) {
  for (const double step : {0.4, 0.1, 0.02}) {
    const auto coarse = HibbsCurve(step);
    const auto fine = HibbsCurve(step / 2.0);
    for (const auto& cp : coarse.change_points) {
      bool found = false;
      for (const auto& f : fine.change_points) {
        found |= f.t_low >= cp.t_low - 1e-12 && f.t_high <= cp.t_high + 1e-12;
      }
      EXPECT_TRUE(found) << "step " << step << " bracket " << cp.t_low;
    }
  }
}

TEST(ExpectedCid, PointMassesAndAverages) {
  const auto curve = HibbsCurve();
  EXPECT_EQ(ExpectedCid(curve, KnobDistribution::PointMass(0.0)), 2.0);
  EXPECT_EQ(ExpectedCid(curve, KnobDistribution::PointMass(1.5)), 0.0);
  const auto at = [&](double t) { return curve.points[*curve.NearestIndex(t)].cid; };
  EXPECT_NEAR(ExpectedCid(curve, KnobDistribution({-0.5, 0.0, 0.5}, {1, 1, 1})),
              (at(-0.5) + at(0.0) + at(0.5)) / 3.0, 1e-15);
  for (const auto& p : curve.points) {
    EXPECT_EQ(ExpectedCid(curve, KnobDistribution::PointMass(p.t)), p.cid);
  }
  // Snaps within half a step.
  EXPECT_EQ(ExpectedCid(curve, KnobDistribution::PointMass(0.009)), 2.0);
  try {
    ExpectedCid(curve, KnobDistribution::PointMass(4.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kSupportOffGrid);
  }
  EXPECT_THROW(KnobDistribution({0.0}, {-1.0}), Error);
  EXPECT_THROW(KnobDistribution({0.0, 1.0}, {1.0}), Error);
}

TEST(AnnotatePlausibleRegion, PublishedRegionIsStable) {
  const auto curve = HibbsCurve();
  const auto s = AnnotatePlausibleRegion(curve, PlausibleRegion(-0.635, 0.728));
  EXPECT_FALSE(s.empty);
  EXPECT_TRUE(s.change_points_inside.empty());
  EXPECT_GE(s.min_cid, 1.0);
  EXPECT_EQ(s.max_cid, 2.0);

  const auto wide = AnnotatePlausibleRegion(curve, PlausibleRegion(0.5, 3.0));
  EXPECT_EQ(wide.change_points_inside.size(), 2u);
  EXPECT_EQ(wide.min_cid, 0.0);

  const auto off = AnnotatePlausibleRegion(curve, PlausibleRegion(10.0, 12.0));
  EXPECT_TRUE(off.empty);
  EXPECT_FALSE(off.warning.empty());
  EXPECT_EQ(off.points, 0u);

  EXPECT_THROW(PlausibleRegion(1.0, 1.0), Error);
}

TEST(SweepLead, AccordionAndParametricChangePoints) {
  const auto pop = ObservedLeadPopulation();
  const auto costs = CostsFor(pop);
  const KnobGrid grid(-2, 4, 0.05);
  const ImputationConfig cfg{200, 20240101};

  const auto acc = SweepLead(pop, AccordionMechanism(), grid, cfg, ThresholdRule(), costs);
  EXPECT_EQ(acc.reference_decision, Decision{InterventionDecision::kIntervene});
  ASSERT_EQ(acc.change_points.size(), 1u);
  EXPECT_NEAR(acc.change_points[0].midpoint(), 0.4, 0.1);
  EXPECT_EQ(acc.reference().cid, 1.0);
  EXPECT_EQ(acc.reference().d_t, 1);

  const auto par = SweepLead(pop, ParametricMechanism(), grid, cfg, ThresholdRule(), costs);
  ASSERT_EQ(par.change_points.size(), 1u);
  EXPECT_NEAR(par.change_points[0].midpoint(), 0.8, 0.1);

  for (const auto& p : acc.points) {
    EXPECT_GE(p.cid, 0.0);
    EXPECT_LE(p.cid, 1.0);
    EXPECT_EQ(p.completed_freqs.size(), 10u);
    EXPECT_FALSE(p.interval.has_value());
  }
}

TEST(SweepLead, MarEverywhereHasNoChangePoints) {
  const auto pop = ObservedLeadPopulation();
  const auto curve = SweepLead(pop, MarMechanism(10), KnobGrid(-1, 1, 0.25), {500, 8},
                               ThresholdRule(), CostsFor(pop));
  EXPECT_TRUE(curve.change_points.empty());
  // Imputation draws differ across t, so only Monte Carlo noise separates them.
  for (const auto& p : curve.points) EXPECT_NEAR(p.estimate, curve.reference().estimate, 0.002);
}

TEST(SweepLead, ThreadCountDoesNotChangeOutput) {
  const auto pop = ObservedLeadPopulation();
  const KnobGrid grid(-1, 1, 0.1);
  const auto one = SweepLead(pop, ParametricMechanism(), grid, {20, 4}, ThresholdRule(),
                             CostsFor(pop), {1});
  const auto four = SweepLead(pop, ParametricMechanism(), grid, {20, 4}, ThresholdRule(),
                              CostsFor(pop), {4});
  EXPECT_EQ(CurveToCsv(one), CurveToCsv(four));
}

TEST(SweepLead, ThresholdMismatchIsUsageError) {
  const auto pop = ObservedLeadPopulation();
  EXPECT_THROW(SweepLead(pop, AccordionMechanism(), KnobGrid(0, 1, 0.5), {2, 1},
                         ThresholdRule(0.3), CostsFor(pop)),
               Error);
}

}  // namespace
}  // namespace cid
