#include "sligeo/param_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sligeo/error.hpp"
#include "sligeo/parallel.hpp"
#include "sligeo/random.hpp"
#include "sligeo/sli_predict.hpp"

namespace sligeo {

std::string_view bandwidth_mode_name(BandwidthMode mode) {
  return mode == BandwidthMode::strict ? "strict" : "fast";
}

BandwidthMode parse_bandwidth_mode(std::string_view name) {
  if (name == "strict") return BandwidthMode::strict;
  if (name == "fast") return BandwidthMode::fast;
  throw InvalidArgument("unknown bandwidth mode '" + std::string(name) +
                        "' (expected strict or fast)");
}

void EstimationConfig::validate() const {
  if (kernels.empty()) throw InvalidArgument("estimation needs at least one kernel");
  if (k_values.empty()) throw InvalidArgument("estimation needs at least one k value");
  for (std::size_t k : k_values) {
    if (k == 0) throw InvalidArgument("k candidates must be >= 1");
  }
  auto check = [](const Bound& b, double init, const char* name) {
    if (std::isnan(b.lo) || std::isnan(b.hi) || b.lo > b.hi || !(b.lo > 0.0))
      throw InvalidArgument(std::string(name) + " bounds must be positive and ordered");
    if (!(init >= b.lo && init <= b.hi))
      throw InvalidArgument(std::string(name) + " initial guess lies outside its bounds");
  };
  check(mu_bounds, mu_init, "mu");
  check(c1_bounds, c1_init, "c1");
  if (!std::isfinite(mu_bounds.hi)) throw InvalidArgument("mu upper bound must be finite");
  if (starts == 0) throw InvalidArgument("multistart count must be >= 1");
}

namespace {

void check_loo_inputs(const SampleSet& samples, std::size_t k, double c1, double mu) {
  if (samples.size() < 3) throw InvalidArgument("leave-one-out needs at least 3 samples");
  if (k == 0 || k + 1 >= samples.size())
    throw InvalidArgument("neighbor order k=" + std::to_string(k) + " too large for " +
                          std::to_string(samples.size()) + " samples");
  if (!(c1 > 0.0) || !std::isfinite(c1)) throw InvalidArgument("c1 must be > 0");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("mu must be > 0");
}

std::vector<double> loo_fast(const SampleSet& samples, const KernelSpec& kernel, std::size_t k,
                             double c1, double mu, unsigned workers) {
  const std::size_t n = samples.size();
  const SpatialIndex index(samples.points);
  const BandwidthField bw = local_bandwidths(index, k, mu);
  const WeightMatrix w = compute_weights(samples, index, bw, kernel, workers);

  // Column lists of W so each fold can read w_{j,i} as well as w_{i,j}.
  std::vector<std::vector<std::size_t>> incoming(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (const auto& e : w.row(r)) {
      if (e.col != r) incoming[e.col].push_back(r);
    }
  }

  CompensatedSum total;
  for (double v : samples.values) total.add(v);
  const double sum = total.value();
  const double rest = static_cast<double>(n - 1);

  std::vector<double> pred(n);
  parallel_for(n, workers, [&](std::size_t i) {
    std::vector<std::size_t> nb;
    for (const auto& e : w.row(i)) {
      if (e.col != i) nb.push_back(e.col);
    }
    nb.insert(nb.end(), incoming[i].begin(), incoming[i].end());
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());

    const double m = (sum - samples.values[i]) / rest;
    CompensatedSum num, den;
    for (std::size_t j : nb) {
      const double s = w.at(i, j) + w.at(j, i);
      num.add(s * (samples.values[j] - m));
      den.add(s);
    }
    pred[i] = m + c1 * num.value() / (1.0 / rest + c1 * den.value());
  });
  return pred;
}

std::vector<double> loo_strict(const SampleSet& samples, const KernelSpec& kernel,
                               std::size_t k, double c1, double mu, unsigned workers) {
  const std::size_t n = samples.size();
  std::vector<double> pred(n);
  parallel_for(n, workers, [&](std::size_t i) {
    std::vector<std::size_t> keep;
    keep.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) keep.push_back(j);
    }
    SampleSet reduced = samples.subset(keep);
    SliParams p;
    p.lambda = 1.0;
    p.mean = reduced.mean();
    p.c1 = c1;
    p.k = k;
    p.mu = mu;
    p.kernel = kernel;
    const SliPredictor predictor(std::move(reduced), p);
    pred[i] = predictor.predict(samples.points[i]).value;
  });
  return pred;
}

}  // namespace

std::vector<double> loo_predictions(const SampleSet& samples, const KernelSpec& kernel,
                                    std::size_t k, double c1, double mu, BandwidthMode mode,
                                    unsigned workers) {
  check_loo_inputs(samples, k, c1, mu);
  return mode == BandwidthMode::fast ? loo_fast(samples, kernel, k, c1, mu, workers)
                                     : loo_strict(samples, kernel, k, c1, mu, workers);
}

std::vector<double> loo_residuals(const SampleSet& samples, const KernelSpec& kernel,
                                  std::size_t k, double c1, double mu, BandwidthMode mode,
                                  unsigned workers) {
  auto pred = loo_predictions(samples, kernel, k, c1, mu, mode, workers);
  for (std::size_t i = 0; i < pred.size(); ++i) pred[i] = samples.values[i] - pred[i];
  return pred;
}

double loo_cost(const SampleSet& samples, const KernelSpec& kernel, std::size_t k, double c1,
                double mu, CostMetric cost, BandwidthMode mode, unsigned workers) {
  return evaluate_cost(cost, loo_residuals(samples, kernel, k, c1, mu, mode, workers));
}

LambdaStar lambda_star(const SampleSet& samples, const SliParams& params, unsigned workers) {
  SliParams unit = params;
  unit.lambda = 1.0;
  unit.validate();
  const SpatialIndex index(samples.points);
  const BandwidthField bw = local_bandwidths(index, unit.k, unit.mu);
  const WeightMatrix w = compute_weights(samples, index, bw, unit.kernel, workers);
  const double h = energy(samples, unit, w);
  LambdaStar out;
  out.value = 2.0 * h / static_cast<double>(samples.size());
  out.degenerate = !(out.value > 0.0);
  return out;
}

FittedModel fit(const SampleSet& samples, const EstimationConfig& config) {
  config.validate();
  const double mean = samples.mean();
  const Bound bounds[2] = {config.c1_bounds, config.mu_bounds};
  const double x0[2] = {config.c1_init, config.mu_init};

  FittedModel model;
  model.metric = config.cost;
  model.mode = config.mode;
  std::size_t best = 0;
  bool found = false;
  std::uint64_t stream = config.seed;

  for (const KernelSpec& kernel : config.kernels) {
    for (std::size_t k : config.k_values) {
      CandidateResult cand;
      cand.kernel = kernel;
      cand.k = k;
      stream = splitmix64(stream);
      std::string last_error;
      const Objective objective = [&](std::span<const double> x) {
        try {
          return loo_cost(samples, kernel, k, x[0], x[1], config.cost, config.mode,
                          config.workers);
        } catch (const Error& e) {
          last_error = e.what();
          return std::numeric_limits<double>::infinity();
        }
      };
      const auto runs =
          minimize_multistart(objective, x0, bounds, config.optimizer, config.starts, stream);
      const OptimizeResult* pick = nullptr;
      for (const auto& r : runs) {
        cand.evaluations += r.evaluations;
        if (r.converged) ++cand.starts_converged;
        if (std::isfinite(r.value) && (pick == nullptr || r.value < pick->value)) pick = &r;
      }
      if (pick == nullptr) {
        cand.message = last_error.empty() ? "no start produced a finite cost" : last_error;
      } else {
        cand.ok = true;
        cand.c1 = pick->x[0];
        cand.mu = pick->x[1];
        cand.cost = pick->value;
        SliParams p;
        p.mean = mean;
        p.c1 = cand.c1;
        p.k = k;
        p.mu = cand.mu;
        p.kernel = kernel;
        cand.lambda = lambda_star(samples, p, config.workers).value;
        if (!found || cand.cost < model.candidates[best].cost) {
          best = model.candidates.size();
          found = true;
        }
      }
      model.candidates.push_back(std::move(cand));
    }
  }

  if (!found) {
    std::ostringstream msg;
    msg << "parameter estimation failed for every candidate:";
    for (const auto& c : model.candidates)
      msg << "\n  " << kernel_name(c.kernel.family) << " k=" << c.k << ": " << c.message;
    throw NumericalError(msg.str());
  }
  const CandidateResult& b = model.candidates[best];
  model.params.mean = mean;
  model.params.c1 = b.c1;
  model.params.k = b.k;
  model.params.mu = b.mu;
  model.params.kernel = b.kernel;
  model.params.lambda = b.lambda;
  model.cost = b.cost;
  model.variance_defined = b.lambda > 0.0;
  return model;
}

}  // namespace sligeo
