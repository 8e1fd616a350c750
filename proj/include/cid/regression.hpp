#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace cid {

struct ElectionRecord {
  int year = 0;
  double growth = 0.0;  // weighted-average real income growth, percent
  double vote = 0.0;    // incumbent party vote share, percent
};

// Validated (year, growth, vote) table. At least three rows with non-constant
// growth.
class ElectionDataset {
 public:
  explicit ElectionDataset(std::vector<ElectionRecord> records);

  std::span<const ElectionRecord> records() const { return records_; }
  std::size_t size() const { return records_.size(); }

 private:
  std::vector<ElectionRecord> records_;
};

// Least-squares line together with the sufficient statistics needed to build
// intervals at arbitrary inputs.
struct FittedLine {
  double intercept = 0.0;
  double slope = 0.0;
  double sigma2 = 0.0;  // residual sum of squares / (n - 2)
  std::size_t n = 0;
  double x_mean = 0.0;
  double sxx = 0.0;     // sum of squared x deviations

  double Predict(double x0) const { return intercept + slope * x0; }
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  double center = 0.0;

  double width() const { return upper - lower; }
};

enum class IntervalKind { kMeanResponse, kNewObservation };

std::string_view IntervalKindName(IntervalKind kind);
IntervalKind ParseIntervalKind(std::string_view name);

FittedLine FitSimpleOls(const ElectionDataset& data);

// Overload on raw columns; same validation as the dataset constructor.
FittedLine FitSimpleOls(std::span<const double> x, std::span<const double> y);

// Two-sided Student-t interval around intercept + slope * x0 with n - 2
// degrees of freedom.
Interval PredictInterval(const FittedLine& fit, double x0, double level,
                         IntervalKind kind);

// Half-width used by PredictInterval.
double IntervalHalfWidth(const FittedLine& fit, double x0, double level,
                         IntervalKind kind);

// Upper quantile q with P(T <= q) = p for T ~ Student-t(df).
double StudentTQuantile(double df, double p);

}  // namespace cid
