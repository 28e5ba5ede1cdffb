#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace sligeo {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Error metrics over residuals e_i = truth_i - estimate_i. These are the
/// single implementation shared by the estimation cost and the CV reports.
double mean_error(std::span<const double> errors);
double mean_absolute_error(std::span<const double> errors);
double root_mean_square_error(std::span<const double> errors);
double max_absolute_error(std::span<const double> errors);

enum class CostMetric { mae, rmse };

std::string_view cost_metric_name(CostMetric metric);
CostMetric parse_cost_metric(std::string_view name);
double evaluate_cost(CostMetric metric, std::span<const double> errors);

}  // namespace sligeo
