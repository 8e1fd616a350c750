#include "cid/regression.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "cid/errors.hpp"

namespace cid {
namespace {

void ValidateColumns(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(Errc::kUsage, fmt::format("column size mismatch: {} vs {}",
                                          x.size(), y.size()));
  }
  if (x.size() < 3) {
    throw Error(Errc::kInsufficientData,
                fmt::format("insufficient data: need at least 3 records, got {}",
                            x.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw Error(Errc::kDomain, fmt::format("non-finite value in row {}", i));
    }
  }
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*lo == *hi) {
    throw Error(Errc::kSingularDesign,
                "singular design: all input values are identical");
  }
}

}  // namespace

ElectionDataset::ElectionDataset(std::vector<ElectionRecord> records)
    : records_(std::move(records)) {
  std::vector<double> x, y;
  x.reserve(records_.size());
  y.reserve(records_.size());
  for (const auto& r : records_) {
    x.push_back(r.growth);
    y.push_back(r.vote);
  }
  ValidateColumns(x, y);
}

std::string_view IntervalKindName(IntervalKind kind) {
  return kind == IntervalKind::kMeanResponse ? "mean-response"
                                             : "new-observation";
}

IntervalKind ParseIntervalKind(std::string_view name) {
  if (name == "mean-response") return IntervalKind::kMeanResponse;
  if (name == "new-observation") return IntervalKind::kNewObservation;
  throw Error(Errc::kConfig,
              fmt::format("unknown interval kind '{}'", std::string(name)));
}

FittedLine FitSimpleOls(const ElectionDataset& data) {
  std::vector<double> x, y;
  for (const auto& r : data.records()) {
    x.push_back(r.growth);
    y.push_back(r.vote);
  }
  return FitSimpleOls(x, y);
}

FittedLine FitSimpleOls(std::span<const double> x, std::span<const double> y) {
  ValidateColumns(x, y);
  const auto n = x.size();
  const double nd = static_cast<double>(n);

  double x_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x_mean += x[i];
    y_mean += y[i];
  }
  x_mean /= nd;
  y_mean /= nd;

  // Centered sums avoid the cancellation of the raw normal equations.
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - x_mean;
    sxx += dx * dx;
    sxy += dx * (y[i] - y_mean);
  }
  if (!(sxx > 0.0)) {
    throw Error(Errc::kSingularDesign, "singular design: zero x variance");
  }

  FittedLine fit;
  fit.slope = sxy / sxx;
  fit.intercept = y_mean - fit.slope * x_mean;
  fit.n = n;
  fit.x_mean = x_mean;
  fit.sxx = sxx;

  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - fit.Predict(x[i]);
    rss += e * e;
  }
  fit.sigma2 = rss / (nd - 2.0);
  return fit;
}

double StudentTQuantile(double df, double p) {
  if (!(df > 0.0) || !(p > 0.0 && p < 1.0)) {
    throw Error(Errc::kDomain,
                fmt::format("t quantile needs df > 0 and 0 < p < 1 (df={}, p={})",
                            df, p));
  }
  return boost::math::quantile(boost::math::students_t_distribution<double>(df),
                               p);
}

double IntervalHalfWidth(const FittedLine& fit, double x0, double level,
                         IntervalKind kind) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(Errc::kDomain,
                fmt::format("interval level must lie in (0, 1), got {}", level));
  }
  const double q =
      StudentTQuantile(static_cast<double>(fit.n) - 2.0, 0.5 + level / 2.0);
  const double extra = kind == IntervalKind::kNewObservation ? 1.0 : 0.0;
  const double dx = x0 - fit.x_mean;
  const double var =
      fit.sigma2 * (extra + 1.0 / static_cast<double>(fit.n) + dx * dx / fit.sxx);
  return q * std::sqrt(var);
}

Interval PredictInterval(const FittedLine& fit, double x0, double level,
                         IntervalKind kind) {
  const double half = IntervalHalfWidth(fit, x0, level, kind);
  const double center = fit.Predict(x0);
  return Interval{center - half, center + half, level, center};
}

}  // namespace cid
