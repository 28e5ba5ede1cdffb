#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sligeo/ordinary_kriging.hpp"
#include "sligeo/param_estimation.hpp"
#include "sligeo/sli_core.hpp"

namespace sligeo {

/// Cross-validation statistics. Errors follow truth - prediction.
struct CvReport {
  double me = 0.0;
  double mae = 0.0;
  double mare = 0.0;  // NaN when every truth value is 0
  double rmse = 0.0;
  double rmsre = 0.0;
  double maxae = 0.0;
  double r = 0.0;  // Pearson correlation, NaN when undefined
  bool r_defined = false;
  std::size_t count = 0;
  std::size_t zero_truth_excluded = 0;  // skipped by the relative measures
  std::vector<double> errors;           // per evaluated point, input order
  std::vector<std::size_t> failed;      // points without a prediction
  std::int64_t fold = -1;
};

/// Pairs with a non-finite prediction are listed in `failed` and skipped.
/// Throws when lengths differ or fewer than one usable pair remains.
CvReport cv_statistics(std::span<const double> truth, std::span<const double> pred);

CvReport run_loo_sli(const SampleSet& samples, const SliParams& params, BandwidthMode mode,
                     unsigned workers = 1);
CvReport run_loo_ok(const SampleSet& samples, const KrigingConfig& config, unsigned workers = 1);

struct CvSplit {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
  std::size_t fold = 0;
  std::uint64_t seed = 0;  // seed of this fold's generator
};

/// folds random splits with floor(N p) test points each. Fold f draws from
/// an mt19937_64 seeded with a splitmix64 hash of (seed, f).
std::vector<CvSplit> make_splits(std::size_t n, double p, std::size_t folds, std::uint64_t seed);

struct LpoFold {
  CvSplit split;
  std::optional<FittedModel> model;
  std::optional<CvReport> sli;
  std::optional<CvReport> ok;
  std::string sli_error;
  std::string ok_error;
};

/// SLI refits on every training set; OK reuses the given variogram. Either
/// predictor may be omitted. Folds run in parallel and are returned by fold id.
std::vector<LpoFold> run_lpo(const SampleSet& samples, const EstimationConfig* sli,
                             const KrigingConfig* ok, double p, std::size_t folds,
                             std::uint64_t seed, unsigned workers = 1);

struct StabilityRow {
  std::size_t fold = 0;
  double c1 = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double ratio = 0.0;  // c1 / lambda
};

struct Dispersion {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double relative_iqr = 0.0;  // (q3 - q1) / |median|
};

struct StabilityReport {
  std::vector<StabilityRow> rows;
  Dispersion ratio;
  Dispersion mu;
  Dispersion c1;
};

StabilityReport parameter_stability_report(std::span<const FittedModel> models,
                                           std::span<const std::size_t> fold_ids = {});

/// Quantile of sorted data by linear interpolation between order statistics
/// (position (n - 1) q).
double quantile_sorted(std::span<const double> sorted, double q);

/// standard: [q1 - 1.5 IQR, q3 + 1.5 IQR]; q3_both: [q3 - 1.5 IQR, q3 + 1.5 IQR].
enum class OutlierRule { standard, q3_both };

std::string_view outlier_rule_name(OutlierRule rule);
OutlierRule parse_outlier_rule(std::string_view name);

struct BoxSummary {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double fence_lo = 0.0;
  double fence_hi = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
  std::vector<double> outliers;  // ascending
};

BoxSummary box_summary(std::span<const double> values, OutlierRule rule = OutlierRule::standard);

}  // namespace sligeo
