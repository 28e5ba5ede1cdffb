#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sligeo/sli_core.hpp"

namespace sligeo {

enum class VariogramFamily { spherical, gaussian, cubic, power, exponential };

inline constexpr std::array<VariogramFamily, 5> kAllVariogramFamilies = {
    VariogramFamily::spherical, VariogramFamily::gaussian, VariogramFamily::cubic,
    VariogramFamily::power, VariogramFamily::exponential};

std::string_view variogram_family_name(VariogramFamily family);
VariogramFamily parse_variogram_family(std::string_view name);

struct VariogramModel {
  VariogramFamily family = VariogramFamily::spherical;
  double sigma2 = 1.0;    // correlated variance
  double xi = 1.0;        // correlation length (scale length for power)
  double c0 = 0.0;        // nugget variance, applied for r > 0 only
  double exponent = 1.0;  // power family only, in (0, 2)

  void validate() const;
};

/// Unit shape g(u); capped at 1 for the sill-bounded families.
double model_shape(VariogramFamily family, double u, double exponent = 1.0);

/// c0 [r > 0] + sigma2 g(r / xi); zero at r = 0.
double model_value(const VariogramModel& model, double r);

/// Normalization of the robust estimator.
///  standard: gamma = 0.5 [mean |dx|^(1/2)]^4 / (0.457 + 0.494/n + 0.045/n^2)
///  literal:  the 1/2 factor taken inside the fourth power, which is smaller
///            by a factor of 8.
enum class RobustNormalization { standard, literal };

std::string_view robust_normalization_name(RobustNormalization n);
RobustNormalization parse_robust_normalization(std::string_view name);

struct LagBins {
  std::size_t count = 25;
  double max_lag = 0.0;  // 0: half the largest pairwise distance
  RobustNormalization normalization = RobustNormalization::standard;
};

/// Omnidirectional robust variogram. Bin i covers (edges[i], edges[i+1]];
/// empty bins are omitted, so edges has one more entry than the full bin
/// count while the per-bin vectors only list occupied bins.
struct EmpiricalVariogram {
  std::vector<double> edges;
  std::vector<double> centers;    // bin midpoints
  std::vector<double> mean_lags;  // average pair separation within the bin
  std::vector<double> gamma;
  std::vector<std::size_t> counts;
  std::vector<std::size_t> bin_ids;
  RobustNormalization normalization = RobustNormalization::standard;

  std::size_t size() const { return gamma.size(); }
};

EmpiricalVariogram empirical_variogram(const SampleSet& samples, const LagBins& bins,
                                       unsigned workers = 1);

/// Robust estimate from a list of absolute increments.
double robust_estimate(double sum_sqrt_abs, std::size_t pairs, RobustNormalization n);

/// sum_i [gamma(r_i) - gamma_hat_i]^2 / gamma(r_i)^2 at the mean lag of each
/// bin; the model value in the denominator is floored at 1e-12.
double fit_error(const VariogramModel& model, const EmpiricalVariogram& emp);

struct VariogramFitOptions {
  bool nugget = true;
  std::size_t starts = 8;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 2000;
};

struct VariogramFit {
  VariogramModel model;
  double error = 0.0;
};

struct VariogramFitReport {
  std::vector<VariogramFit> ranked;  // ascending error
  std::vector<std::string> warnings;
};

/// Fits each family by minimizing fit_error. The power family keeps xi fixed
/// at the largest lag so that (sigma2, xi) are not redundant. The nugget
/// search starts from the nugget-free optimum, so allowing a nugget never
/// increases the error. Throws NumericalError when every family fails.
VariogramFitReport fit_variogram(const EmpiricalVariogram& emp,
                                 const std::vector<VariogramFamily>& families,
                                 const VariogramFitOptions& options = {});

}  // namespace sligeo
