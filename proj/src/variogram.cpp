#include "sligeo/variogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sligeo/error.hpp"
#include "sligeo/metrics.hpp"
#include "sligeo/optimize.hpp"
#include "sligeo/parallel.hpp"

namespace sligeo {

std::string_view variogram_family_name(VariogramFamily family) {
  switch (family) {
    case VariogramFamily::spherical: return "spherical";
    case VariogramFamily::gaussian: return "gaussian";
    case VariogramFamily::cubic: return "cubic";
    case VariogramFamily::power: return "power";
    case VariogramFamily::exponential: return "exponential";
  }
  return "unknown";
}

VariogramFamily parse_variogram_family(std::string_view name) {
  for (auto f : kAllVariogramFamilies) {
    if (variogram_family_name(f) == name) return f;
  }
  throw InvalidArgument("unknown variogram family '" + std::string(name) + "'");
}

void VariogramModel::validate() const {
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw InvalidArgument("sigma2 must be >= 0");
  if (!(xi > 0.0) || !std::isfinite(xi)) throw InvalidArgument("xi must be > 0");
  if (!(c0 >= 0.0) || !std::isfinite(c0)) throw InvalidArgument("nugget c0 must be >= 0");
  if (family == VariogramFamily::power && !(exponent > 0.0 && exponent < 2.0))
    throw InvalidArgument("power exponent must lie in (0, 2)");
}

double model_shape(VariogramFamily family, double u, double exponent) {
  if (!(u >= 0.0)) throw InvalidArgument("lag must be >= 0");
  switch (family) {
    case VariogramFamily::spherical:
      return u >= 1.0 ? 1.0 : 1.5 * u - 0.5 * u * u * u;
    case VariogramFamily::gaussian:
      return 1.0 - std::exp(-u * u);
    case VariogramFamily::exponential:
      return 1.0 - std::exp(-u);
    case VariogramFamily::cubic: {
      if (u >= 1.0) return 1.0;
      const double u2 = u * u, u3 = u2 * u, u5 = u3 * u2, u7 = u5 * u2;
      return 7.0 * u2 - 8.75 * u3 + 3.5 * u5 - 0.75 * u7;
    }
    case VariogramFamily::power:
      return std::pow(u, exponent);
  }
  return 0.0;
}

double model_value(const VariogramModel& model, double r) {
  if (!(r >= 0.0)) throw InvalidArgument("lag must be >= 0");
  if (r == 0.0) return 0.0;
  return model.c0 + model.sigma2 * model_shape(model.family, r / model.xi, model.exponent);
}

std::string_view robust_normalization_name(RobustNormalization n) {
  return n == RobustNormalization::standard ? "standard" : "literal";
}

RobustNormalization parse_robust_normalization(std::string_view name) {
  if (name == "standard") return RobustNormalization::standard;
  if (name == "literal") return RobustNormalization::literal;
  throw InvalidArgument("unknown robust normalization '" + std::string(name) + "'");
}

double robust_estimate(double sum_sqrt_abs, std::size_t pairs, RobustNormalization n) {
  if (pairs == 0) throw InvalidArgument("robust estimate needs at least one pair");
  const double np = static_cast<double>(pairs);
  const double denom = 0.457 + 0.494 / np + 0.045 / (np * np);
  if (n == RobustNormalization::literal) {
    const double inner = sum_sqrt_abs / (2.0 * np);
    return inner * inner * inner * inner / denom;
  }
  const double inner = sum_sqrt_abs / np;
  return 0.5 * inner * inner * inner * inner / denom;
}

namespace {

constexpr std::size_t kChunkRows = 64;

struct BinAccumulator {
  std::vector<double> root;
  std::vector<double> lag;
  std::vector<std::size_t> count;
  explicit BinAccumulator(std::size_t bins) : root(bins), lag(bins), count(bins) {}
};

}  // namespace

EmpiricalVariogram empirical_variogram(const SampleSet& samples, const LagBins& bins,
                                       unsigned workers) {
  const std::size_t n = samples.size();
  if (n < 2) throw InvalidArgument("variogram needs at least 2 samples");
  if (bins.count == 0) throw InvalidArgument("bin count must be >= 1");
  if (!(bins.max_lag >= 0.0) || !std::isfinite(bins.max_lag))
    throw InvalidArgument("max lag must be finite and >= 0");
  const PointSet& pts = samples.points;
  const std::size_t chunks = (n + kChunkRows - 1) / kChunkRows;

  double max_lag = bins.max_lag;
  if (max_lag == 0.0) {
    std::vector<double> chunk_max(chunks, 0.0);
    parallel_for(chunks, workers, [&](std::size_t c) {
      const std::size_t end = std::min(n, (c + 1) * kChunkRows);
      double m = 0.0;
      for (std::size_t i = c * kChunkRows; i < end; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) m = std::max(m, distance(pts[i], pts[j]));
      }
      chunk_max[c] = m;
    });
    max_lag = 0.5 * *std::max_element(chunk_max.begin(), chunk_max.end());
    if (!(max_lag > 0.0)) throw DataError("all sample locations coincide");
  }

  EmpiricalVariogram emp;
  emp.normalization = bins.normalization;
  emp.edges.resize(bins.count + 1);
  for (std::size_t i = 0; i <= bins.count; ++i)
    emp.edges[i] = max_lag * static_cast<double>(i) / static_cast<double>(bins.count);
  emp.edges.back() = max_lag;

  auto bin_of = [&](double d) -> std::size_t {
    // Index i with edges[i] < d <= edges[i+1]; caller guarantees 0 < d <= max_lag.
    auto i = static_cast<std::size_t>(d / max_lag * static_cast<double>(bins.count));
    i = std::min(i, bins.count - 1);
    while (i > 0 && d <= emp.edges[i]) --i;
    while (i + 1 < bins.count && d > emp.edges[i + 1]) ++i;
    return i;
  };

  std::vector<BinAccumulator> partial(chunks, BinAccumulator(bins.count));
  parallel_for(chunks, workers, [&](std::size_t c) {
    BinAccumulator& acc = partial[c];
    const std::size_t end = std::min(n, (c + 1) * kChunkRows);
    for (std::size_t i = c * kChunkRows; i < end; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = distance(pts[i], pts[j]);
        if (d == 0.0 || d > max_lag) continue;
        const std::size_t b = bin_of(d);
        acc.root[b] += std::sqrt(std::abs(samples.values[i] - samples.values[j]));
        acc.lag[b] += d;
        ++acc.count[b];
      }
    }
  });

  for (std::size_t b = 0; b < bins.count; ++b) {
    CompensatedSum root, lag;
    std::size_t count = 0;
    for (const auto& acc : partial) {
      root.add(acc.root[b]);
      lag.add(acc.lag[b]);
      count += acc.count[b];
    }
    if (count == 0) continue;
    emp.bin_ids.push_back(b);
    emp.centers.push_back(0.5 * (emp.edges[b] + emp.edges[b + 1]));
    emp.mean_lags.push_back(lag.value() / static_cast<double>(count));
    emp.gamma.push_back(robust_estimate(root.value(), count, bins.normalization));
    emp.counts.push_back(count);
  }
  return emp;
}

double fit_error(const VariogramModel& model, const EmpiricalVariogram& emp) {
  CompensatedSum s;
  for (std::size_t i = 0; i < emp.size(); ++i) {
    const double g = model_value(model, emp.mean_lags[i]);
    const double den = std::max(g, 1e-12);
    const double r = (g - emp.gamma[i]) / den;
    s.add(r * r);
  }
  return s.value();
}

namespace {

// Parameter vector layout: (sigma2, xi or exponent, c0).
VariogramModel unpack(VariogramFamily family, std::span<const double> x, double power_xi) {
  VariogramModel m;
  m.family = family;
  m.sigma2 = x[0];
  if (family == VariogramFamily::power) {
    m.xi = power_xi;
    m.exponent = x[1];
  } else {
    m.xi = x[1];
  }
  m.c0 = x[2];
  return m;
}

}  // namespace

VariogramFitReport fit_variogram(const EmpiricalVariogram& emp,
                                 const std::vector<VariogramFamily>& families,
                                 const VariogramFitOptions& options) {
  if (emp.size() < 4) throw InvalidArgument("variogram fit needs at least 4 nonempty bins");
  if (families.empty()) throw InvalidArgument("no variogram families requested");
  if (emp.mean_lags.size() != emp.size()) throw InvalidArgument("empirical variogram is inconsistent");

  const double gmax = *std::max_element(emp.gamma.begin(), emp.gamma.end());
  const double gmin = *std::min_element(emp.gamma.begin(), emp.gamma.end());
  const double lag_min = *std::min_element(emp.mean_lags.begin(), emp.mean_lags.end());
  const double lag_max = *std::max_element(emp.mean_lags.begin(), emp.mean_lags.end());
  if (!(gmax > 0.0)) throw DataError("empirical variogram is identically zero");

  NelderMeadOptions nm;
  nm.max_iterations = options.max_iterations;
  nm.x_tolerance = 1e-10;
  nm.f_tolerance = 1e-14;

  VariogramFitReport report;
  std::uint64_t seed = options.seed;
  for (VariogramFamily family : families) {
    const bool power = family == VariogramFamily::power;
    const double sill_hi = 10.0 * gmax;
    std::vector<Bound> bounds{{0.0, sill_hi},
                              power ? Bound{1e-3, 1.999} : Bound{lag_min * 1e-2, lag_max * 10.0, true},
                              {0.0, 0.0}};
    const auto objective = [&](std::span<const double> x) {
      return fit_error(unpack(family, x, lag_max), emp);
    };
    std::vector<double> x0{std::max(gmax - gmin, 1e-3 * gmax), power ? 1.0 : 0.5 * lag_max, 0.0};

    try {
      seed = seed * 6364136223846793005ull + 1442695040888963407ull;
      auto runs = minimize_multistart(objective, x0, bounds, nm, options.starts, seed);
      auto best = std::min_element(runs.begin(), runs.end(),
                                   [](const auto& a, const auto& b) { return a.value < b.value; });
      if (!std::isfinite(best->value)) throw NumericalError("no finite fit");
      OptimizeResult pick = *best;
      if (options.nugget) {
        bounds[2] = Bound{0.0, gmax};
        std::vector<double> from(pick.x);
        auto nested = minimize_multistart(objective, from, bounds, nm, options.starts, seed ^ 1u);
        auto nb = std::min_element(nested.begin(), nested.end(),
                                   [](const auto& a, const auto& b) { return a.value < b.value; });
        if (nb->value <= pick.value) pick = *nb;
      }
      VariogramFit fit{unpack(family, pick.x, lag_max), pick.value};
      fit.model.validate();
      report.ranked.push_back(fit);
    } catch (const Error& e) {
      report.warnings.push_back(std::string(variogram_family_name(family)) +
                                " fit failed: " + e.what());
    }
  }
  if (report.ranked.empty()) throw NumericalError("variogram fit failed for every family");
  std::stable_sort(report.ranked.begin(), report.ranked.end(),
                   [](const VariogramFit& a, const VariogramFit& b) { return a.error < b.error; });
  return report;
}

}  // namespace sligeo
