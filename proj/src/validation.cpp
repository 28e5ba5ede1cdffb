#include "sligeo/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sligeo/error.hpp"
#include "sligeo/metrics.hpp"
#include "sligeo/parallel.hpp"
#include "sligeo/random.hpp"
#include "sligeo/sli_predict.hpp"

namespace sligeo {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

CvReport cv_statistics(std::span<const double> truth, std::span<const double> pred) {
  if (truth.size() != pred.size())
    throw InvalidArgument("truth and prediction lengths differ");
  if (truth.empty()) throw InvalidArgument("cross-validation statistics need data");
  CvReport rep;
  std::vector<double> t, p;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!std::isfinite(pred[i])) {
      rep.failed.push_back(i);
      continue;
    }
    t.push_back(truth[i]);
    p.push_back(pred[i]);
    rep.errors.push_back(truth[i] - pred[i]);
  }
  if (rep.errors.empty()) throw DataError("no point received a prediction");
  rep.count = rep.errors.size();
  const double n = static_cast<double>(rep.count);

  rep.me = mean_error(rep.errors);
  rep.mae = mean_absolute_error(rep.errors);
  rep.rmse = root_mean_square_error(rep.errors);
  rep.maxae = max_absolute_error(rep.errors);

  CompensatedSum rel_abs, rel_sq;
  std::size_t rel_n = 0;
  for (std::size_t i = 0; i < rep.count; ++i) {
    if (t[i] == 0.0) {
      ++rep.zero_truth_excluded;
      continue;
    }
    const double r = rep.errors[i] / t[i];
    rel_abs.add(std::abs(r));
    rel_sq.add(r * r);
    ++rel_n;
  }
  rep.mare = rel_n > 0 ? rel_abs.value() / static_cast<double>(rel_n) : kNaN;
  rep.rmsre = rel_n > 0 ? std::sqrt(rel_sq.value() / static_cast<double>(rel_n)) : kNaN;

  rep.r = kNaN;
  if (rep.count >= 2) {
    CompensatedSum st, sp;
    for (std::size_t i = 0; i < rep.count; ++i) {
      st.add(t[i]);
      sp.add(p[i]);
    }
    const double mt = st.value() / n, mp = sp.value() / n;
    CompensatedSum stt, spp, stp;
    for (std::size_t i = 0; i < rep.count; ++i) {
      const double a = t[i] - mt, b = p[i] - mp;
      stt.add(a * a);
      spp.add(b * b);
      stp.add(a * b);
    }
    if (stt.value() > 0.0 && spp.value() > 0.0) {
      rep.r = std::clamp(stp.value() / std::sqrt(stt.value() * spp.value()), -1.0, 1.0);
      rep.r_defined = true;
    }
  }
  return rep;
}

CvReport run_loo_sli(const SampleSet& samples, const SliParams& params, BandwidthMode mode,
                     unsigned workers) {
  const auto pred =
      loo_predictions(samples, params.kernel, params.k, params.c1, params.mu, mode, workers);
  return cv_statistics(samples.values, pred);
}

CvReport run_loo_ok(const SampleSet& samples, const KrigingConfig& config, unsigned workers) {
  config.validate();
  const SpatialIndex index(samples.points);
  std::vector<double> pred(samples.size(), kNaN);
  parallel_for(samples.size(), workers, [&](std::size_t i) {
    try {
      const auto p = ok_predict_point(samples.points[i], samples, index, config, i);
      if (p.status == KrigingPrediction::Status::solved) pred[i] = p.value;
    } catch (const NumericalError&) {
      // recorded as a failed point
    }
  });
  return cv_statistics(samples.values, pred);
}

std::vector<CvSplit> make_splits(std::size_t n, double p, std::size_t folds, std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("leave-p-out rate must lie in (0, 1)");
  if (folds == 0) throw InvalidArgument("fold count must be >= 1");
  const auto test_size = static_cast<std::size_t>(std::floor(static_cast<double>(n) * p));
  if (test_size == 0 || test_size >= n)
    throw InvalidArgument("rate " + std::to_string(p) + " leaves an empty train or test set for N=" +
                          std::to_string(n));
  std::vector<CvSplit> splits(folds);
  for (std::size_t f = 0; f < folds; ++f) {
    CvSplit& s = splits[f];
    s.fold = f;
    s.seed = splitmix64(seed ^ splitmix64(f));
    std::mt19937_64 rng(s.seed);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[uniform_index(rng, i + 1)]);
    s.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(test_size));
    s.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(test_size), perm.end());
    std::sort(s.test.begin(), s.test.end());
    std::sort(s.train.begin(), s.train.end());
  }
  return splits;
}

std::vector<LpoFold> run_lpo(const SampleSet& samples, const EstimationConfig* sli,
                             const KrigingConfig* ok, double p, std::size_t folds,
                             std::uint64_t seed, unsigned workers) {
  auto splits = make_splits(samples.size(), p, folds, seed);
  std::vector<LpoFold> out(splits.size());
  parallel_for(splits.size(), workers, [&](std::size_t f) {
    LpoFold& fold = out[f];
    fold.split = std::move(splits[f]);
    const SampleSet train = samples.subset(fold.split.train);
    std::vector<double> truth;
    for (std::size_t id : fold.split.test) truth.push_back(samples.values[id]);

    if (sli != nullptr) {
      try {
        EstimationConfig cfg = *sli;
        cfg.workers = 1;
        cfg.seed = splitmix64(sli->seed ^ fold.split.seed);
        fold.model = fit(train, cfg);
        SliParams params = fold.model->params;
        const SliPredictor predictor(train, params);
        std::vector<double> pred;
        for (std::size_t id : fold.split.test)
          pred.push_back(predictor.predict(samples.points[id]).value);
        fold.sli = cv_statistics(truth, pred);
        fold.sli->fold = static_cast<std::int64_t>(f);
      } catch (const Error& e) {
        fold.sli_error = e.what();
      }
    }
    if (ok != nullptr) {
      try {
        const SpatialIndex index(train.points);
        std::vector<double> pred;
        for (std::size_t id : fold.split.test) {
          const auto r = ok_predict_point(samples.points[id], train, index, *ok);
          pred.push_back(r.status == KrigingPrediction::Status::solved ? r.value : kNaN);
        }
        fold.ok = cv_statistics(truth, pred);
        fold.ok->fold = static_cast<std::int64_t>(f);
      } catch (const Error& e) {
        fold.ok_error = e.what();
      }
    }
  });
  return out;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty set");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("quantile level must lie in [0, 1]");
  const double pos = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace {

Dispersion dispersion(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  Dispersion d;
  d.median = quantile_sorted(v, 0.5);
  d.q1 = quantile_sorted(v, 0.25);
  d.q3 = quantile_sorted(v, 0.75);
  d.min = v.front();
  d.max = v.back();
  d.relative_iqr = d.median != 0.0 ? (d.q3 - d.q1) / std::abs(d.median) : kNaN;
  return d;
}

}  // namespace

StabilityReport parameter_stability_report(std::span<const FittedModel> models,
                                           std::span<const std::size_t> fold_ids) {
  if (models.size() < 2) throw InvalidArgument("stability report needs at least 2 fitted models");
  if (!fold_ids.empty() && fold_ids.size() != models.size())
    throw InvalidArgument("fold id count does not match model count");
  StabilityReport rep;
  std::vector<double> ratios, mus, c1s;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const SliParams& p = models[i].params;
    StabilityRow row{fold_ids.empty() ? i : fold_ids[i], p.c1, p.lambda, p.mu,
                     p.lambda > 0.0 ? p.c1 / p.lambda : kNaN};
    rep.rows.push_back(row);
    if (std::isfinite(row.ratio)) ratios.push_back(row.ratio);
    mus.push_back(row.mu);
    c1s.push_back(row.c1);
  }
  if (ratios.empty()) throw DataError("every fold has a degenerate scale coefficient");
  rep.ratio = dispersion(ratios);
  rep.mu = dispersion(mus);
  rep.c1 = dispersion(c1s);
  return rep;
}

std::string_view outlier_rule_name(OutlierRule rule) {
  return rule == OutlierRule::standard ? "standard" : "q3_both";
}

OutlierRule parse_outlier_rule(std::string_view name) {
  if (name == "standard") return OutlierRule::standard;
  if (name == "q3_both") return OutlierRule::q3_both;
  throw InvalidArgument("unknown outlier rule '" + std::string(name) + "'");
}

BoxSummary box_summary(std::span<const double> values, OutlierRule rule) {
  if (values.empty()) throw InvalidArgument("box summary of an empty set");
  std::vector<double> v(values.begin(), values.end());
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidArgument("box summary needs finite values");
  }
  std::sort(v.begin(), v.end());
  BoxSummary b;
  b.median = quantile_sorted(v, 0.5);
  b.q1 = quantile_sorted(v, 0.25);
  b.q3 = quantile_sorted(v, 0.75);
  const double iqr = b.q3 - b.q1;
  b.fence_lo = (rule == OutlierRule::standard ? b.q1 : b.q3) - 1.5 * iqr;
  b.fence_hi = b.q3 + 1.5 * iqr;
  b.whisker_lo = std::numeric_limits<double>::infinity();
  b.whisker_hi = -std::numeric_limits<double>::infinity();
  for (double x : v) {
    if (x < b.fence_lo || x > b.fence_hi) {
      b.outliers.push_back(x);
    } else {
      b.whisker_lo = std::min(b.whisker_lo, x);
      b.whisker_hi = std::max(b.whisker_hi, x);
    }
  }
  if (b.outliers.size() == v.size()) {
    // Possible only under the q3_both rule; whiskers collapse onto the box.
    b.whisker_lo = b.q1;
    b.whisker_hi = b.q3;
  }
  return b;
}

}  // namespace sligeo
