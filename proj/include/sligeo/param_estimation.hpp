#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sligeo/kernels.hpp"
#include "sligeo/metrics.hpp"
#include "sligeo/optimize.hpp"
#include "sligeo/sli_core.hpp"

namespace sligeo {

/// How leave-one-out folds treat the bandwidths and weight normalization.
///  strict: each fold rebuilds bandwidths, Z_w and the mean from the N-1
///          remaining samples.
///  fast:   bandwidths and Z_w come from the full sample; the left-out point's
///          own couplings are dropped and the mean and count use N-1 samples.
enum class BandwidthMode { strict, fast };

std::string_view bandwidth_mode_name(BandwidthMode mode);
BandwidthMode parse_bandwidth_mode(std::string_view name);

struct EstimationConfig {
  std::vector<KernelSpec> kernels{KernelSpec{}};
  std::vector<std::size_t> k_values{2, 3, 4};
  Bound mu_bounds{0.5, 5.0};
  Bound c1_bounds{2.220446049250313e-16, 1e8, true};
  double c1_init = 115.0;
  double mu_init = 1.5;
  CostMetric cost = CostMetric::mae;
  std::size_t starts = 5;
  std::uint64_t seed = 0;
  BandwidthMode mode = BandwidthMode::fast;
  NelderMeadOptions optimizer{};
  unsigned workers = 1;

  void validate() const;
};

/// Leave-one-out predictions at every sample (lambda plays no role).
std::vector<double> loo_predictions(const SampleSet& samples, const KernelSpec& kernel,
                                    std::size_t k, double c1, double mu, BandwidthMode mode,
                                    unsigned workers = 1);

/// truth - prediction for every sample.
std::vector<double> loo_residuals(const SampleSet& samples, const KernelSpec& kernel,
                                  std::size_t k, double c1, double mu, BandwidthMode mode,
                                  unsigned workers = 1);

double loo_cost(const SampleSet& samples, const KernelSpec& kernel, std::size_t k, double c1,
                double mu, CostMetric cost, BandwidthMode mode, unsigned workers = 1);

struct LambdaStar {
  double value = 0.0;
  bool degenerate = false;  // constant data: value is 0 and variances are undefined
};

/// 2 H / N with H evaluated at lambda = 1 and the other parameters as given.
LambdaStar lambda_star(const SampleSet& samples, const SliParams& params, unsigned workers = 1);

/// Outcome of optimizing (c1, mu) for one (kernel, k) pair.
struct CandidateResult {
  KernelSpec kernel;
  std::size_t k = 0;
  bool ok = false;
  double c1 = 0.0;
  double mu = 0.0;
  double cost = 0.0;
  double lambda = 0.0;
  std::size_t evaluations = 0;
  std::size_t starts_converged = 0;
  std::string message;  // failure reason when !ok
};

struct FittedModel {
  SliParams params;
  double cost = 0.0;
  CostMetric metric = CostMetric::mae;
  BandwidthMode mode = BandwidthMode::fast;
  bool variance_defined = true;
  std::vector<CandidateResult> candidates;  // in (kernel, k) config order
};

/// Minimizes the LOO cost over (c1, mu) for every kernel and k candidate and
/// keeps the best. Throws NumericalError when every candidate fails.
FittedModel fit(const SampleSet& samples, const EstimationConfig& config);

}  // namespace sligeo
