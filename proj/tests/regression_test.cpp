#include "cid/regression.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cid/errors.hpp"
#include "cid/io.hpp"
#include "support/oracles.hpp"
#include "test_data.hpp"

namespace cid {
namespace {

// Reference values computed independently with numpy/scipy on data/hibbs.csv.
constexpr double kHibbsIntercept = 46.247648016800795;
constexpr double kHibbsSlope = 3.060528054386932;
constexpr double kHibbsSigma2 = 14.162333878159497;
constexpr double kHibbsLower = 39.60998629570892;
constexpr double kHibbsUpper = 48.4291808907053;

FittedLine HibbsFit() { return FitSimpleOls(ReadElectionCsv(testing::DataDir() / "hibbs.csv")); }

TEST(FitSimpleOls, ReproducesBreadAndPeaceModel) {
  const auto fit = HibbsFit();
  EXPECT_EQ(fit.n, 16u);
  EXPECT_NEAR(fit.intercept, 46.248, 0.01);
  EXPECT_NEAR(fit.slope, 3.061, 0.01);
  EXPECT_NEAR(fit.sigma2, 14.16, 0.01);
  EXPECT_NEAR(fit.intercept, kHibbsIntercept, 1e-9);
  EXPECT_NEAR(fit.slope, kHibbsSlope, 1e-9);
  EXPECT_NEAR(fit.sigma2, kHibbsSigma2, 1e-9);
}

TEST(FitSimpleOls, ExactLine) {
  const std::vector<double> x{0, 1, 2}, y{0, 1, 2};
  const auto fit = FitSimpleOls(x, y);
  EXPECT_NEAR(fit.intercept, 0.0, 1e-15);
  EXPECT_NEAR(fit.slope, 1.0, 1e-15);
  EXPECT_NEAR(fit.sigma2, 0.0, 1e-15);
}

TEST(FitSimpleOls, MatchesNormalEquationsOracle) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> ux(-3.0, 5.0), noise(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(10), y(10);
    for (int i = 0; i < 10; ++i) {
      x[i] = ux(gen);
      y[i] = 2.0 - 0.7 * x[i] + noise(gen);
    }
    const auto fit = FitSimpleOls(x, y);
    const auto [a, b] = testing::NormalEquationsFit(x, y);
    EXPECT_NEAR(fit.intercept, a, 1e-10 * std::abs(a));
    EXPECT_NEAR(fit.slope, b, 1e-10 * std::abs(b));
  }
}

TEST(FitSimpleOls, Errors) {
  const std::vector<double> two{1, 2};
  try {
    FitSimpleOls(two, two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kInsufficientData);
  }
  const std::vector<double> flat{1, 1, 1}, y{1, 2, 3};
  try {
    FitSimpleOls(flat, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kSingularDesign);
  }
  EXPECT_THROW(ElectionDataset({{1952, 1.0, 50.0}, {1956, 1.0, 52.0}, {1960, 1.0, 49.0}}),
               Error);
}

TEST(FitSimpleOls, LineThroughMeansAndResidualsSumToZero) {
  const auto data = ReadElectionCsv(testing::DataDir() / "hibbs.csv");
  const auto fit = FitSimpleOls(data);
  double y_mean = 0.0, resid = 0.0, scale = 0.0;
  for (const auto& r : data.records()) {
    y_mean += r.vote;
    resid += r.vote - fit.Predict(r.growth);
    scale += std::abs(r.vote);
  }
  y_mean /= static_cast<double>(data.size());
  EXPECT_NEAR(fit.Predict(fit.x_mean), y_mean, 1e-12 * y_mean);
  EXPECT_LE(std::abs(resid), 1e-9 * scale);
}

TEST(FitSimpleOls, ShiftingResponseShiftsInterceptOnly) {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> nd;
  std::vector<double> x(12), y(12);
  for (int i = 0; i < 12; ++i) {
    x[i] = nd(gen);
    y[i] = 1.0 + 3.0 * x[i] + nd(gen);
  }
  const auto base = FitSimpleOls(x, y);
  for (const double c : {-7.5, 0.25, 100.0}) {
    std::vector<double> shifted = y;
    for (auto& v : shifted) v += c;
    const auto fit = FitSimpleOls(x, shifted);
    EXPECT_NEAR(fit.intercept, base.intercept + c, 1e-9 * std::abs(base.intercept + c));
    EXPECT_NEAR(fit.slope, base.slope, 1e-9 * std::abs(base.slope));
    EXPECT_NEAR(fit.sigma2, base.sigma2, 1e-9 * base.sigma2);
  }
}

TEST(PredictInterval, ReproducesPublishedMeanResponseInterval) {
  const auto fit = HibbsFit();
  const auto iv = PredictInterval(fit, -0.728, 0.95, IntervalKind::kMeanResponse);
  EXPECT_NEAR(iv.center, 44.0, 0.1);
  EXPECT_NEAR(iv.lower, 39.6, 0.3);
  EXPECT_NEAR(iv.upper, 48.4, 0.3);
  EXPECT_NEAR(iv.lower, kHibbsLower, 1e-8);
  EXPECT_NEAR(iv.upper, kHibbsUpper, 1e-8);
  EXPECT_LE(iv.lower, iv.center);
  EXPECT_LE(iv.center, iv.upper);
}

TEST(PredictInterval, NewObservationIsWider) {
  const auto fit = HibbsFit();
  for (double x0 = -4.0; x0 <= 6.0; x0 += 0.5) {
    const auto mean = PredictInterval(fit, x0, 0.95, IntervalKind::kMeanResponse);
    const auto obs = PredictInterval(fit, x0, 0.95, IntervalKind::kNewObservation);
    EXPECT_GT(obs.width(), mean.width());
    EXPECT_DOUBLE_EQ(obs.center, mean.center);
  }
  // The new-observation interval is far wider than the published one.
  const auto obs = PredictInterval(fit, -0.728, 0.95, IntervalKind::kNewObservation);
  EXPECT_GT(obs.width() / 2.0, 7.0);
}

TEST(PredictInterval, ZeroResidualVarianceGivesPointInterval) {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const auto fit = FitSimpleOls(x, y);
  for (const double x0 : {-2.0, 0.5, 10.0}) {
    const auto iv = PredictInterval(fit, x0, 0.9, IntervalKind::kNewObservation);
    EXPECT_NEAR(iv.lower, iv.upper, 1e-12);
    EXPECT_NEAR(iv.center, 1.0 + 2.0 * x0, 1e-12);
  }
}

TEST(PredictInterval, HalfWidthMinimizedAtInputMean) {
  const auto fit = HibbsFit();
  const double at_mean =
      IntervalHalfWidth(fit, fit.x_mean, 0.95, IntervalKind::kMeanResponse);
  const double q = StudentTQuantile(static_cast<double>(fit.n - 2), 0.975);
  EXPECT_NEAR(at_mean, q * std::sqrt(fit.sigma2 / static_cast<double>(fit.n)), 1e-12);

  double best_x = 0.0, best = 1e300;
  for (int i = -4000; i <= 6000; ++i) {
    const double x0 = i * 1e-3;
    const double hw = IntervalHalfWidth(fit, x0, 0.95, IntervalKind::kMeanResponse);
    if (hw < best) {
      best = hw;
      best_x = x0;
    }
  }
  EXPECT_NEAR(best_x, fit.x_mean, 1e-3);
  EXPECT_GE(best, at_mean);
}

TEST(PredictInterval, HalfWidthStrictlyConvex) {
  const auto fit = HibbsFit();
  auto hw = [&](double x) {
    return IntervalHalfWidth(fit, x, 0.95, IntervalKind::kMeanResponse);
  };
  for (double x = -5.0; x <= 8.0; x += 0.37) {
    EXPECT_LT(hw(x), 0.5 * (hw(x - 0.2) + hw(x + 0.2)));
  }
}

TEST(PredictInterval, CenterIsAffineInInput) {
  const auto fit = HibbsFit();
  const double x0 = -0.728;
  const auto base = PredictInterval(fit, x0, 0.95, IntervalKind::kMeanResponse);
  for (const double t : {-3.0, -0.5, 0.25, 2.0}) {
    const auto iv = PredictInterval(fit, x0 + t, 0.95, IntervalKind::kMeanResponse);
    EXPECT_NEAR(iv.center, base.center + fit.slope * t, 1e-12);
  }
}

TEST(PredictInterval, RejectsBadLevel) {
  const auto fit = HibbsFit();
  EXPECT_THROW(PredictInterval(fit, 0.0, 1.0, IntervalKind::kMeanResponse), Error);
  EXPECT_THROW(PredictInterval(fit, 0.0, 0.0, IntervalKind::kMeanResponse), Error);
}

TEST(StudentTQuantile, AgreesWithQuadratureOracle) {
  for (const auto& [df, p] : {std::pair{5.0, 0.975}, {14.0, 0.975}, {30.0, 0.995}}) {
    EXPECT_NEAR(StudentTQuantile(df, p), testing::StudentTQuantileByQuadrature(df, p), 1e-6)
        << "df=" << df << " p=" << p;
  }
}

TEST(IntervalKind, NamesRoundTrip) {
  for (const auto k : {IntervalKind::kMeanResponse, IntervalKind::kNewObservation}) {
    EXPECT_EQ(ParseIntervalKind(IntervalKindName(k)), k);
  }
  EXPECT_THROW(ParseIntervalKind("prediction"), Error);
}

}  // namespace
}  // namespace cid
