#include "sligeo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sligeo/error.hpp"

namespace sligeo {

namespace {

void require_nonempty(std::span<const double> errors) {
  if (errors.empty()) throw InvalidArgument("error metric needs at least one residual");
}

}  // namespace

double mean_error(std::span<const double> errors) {
  require_nonempty(errors);
  CompensatedSum s;
  for (double e : errors) s.add(e);
  return s.value() / static_cast<double>(errors.size());
}

double mean_absolute_error(std::span<const double> errors) {
  require_nonempty(errors);
  CompensatedSum s;
  for (double e : errors) s.add(std::fabs(e));
  return s.value() / static_cast<double>(errors.size());
}

double root_mean_square_error(std::span<const double> errors) {
  require_nonempty(errors);
  CompensatedSum s;
  for (double e : errors) s.add(e * e);
  return std::sqrt(s.value() / static_cast<double>(errors.size()));
}

double max_absolute_error(std::span<const double> errors) {
  require_nonempty(errors);
  double m = 0.0;
  for (double e : errors) m = std::max(m, std::fabs(e));
  return m;
}

std::string_view cost_metric_name(CostMetric metric) {
  return metric == CostMetric::mae ? "mae" : "rmse";
}

CostMetric parse_cost_metric(std::string_view name) {
  if (name == "mae") return CostMetric::mae;
  if (name == "rmse") return CostMetric::rmse;
  throw InvalidArgument("unknown cost metric '" + std::string(name) + "' (expected mae or rmse)");
}

double evaluate_cost(CostMetric metric, std::span<const double> errors) {
  return metric == CostMetric::mae ? mean_absolute_error(errors)
                                   : root_mean_square_error(errors);
}

}  // namespace sligeo
