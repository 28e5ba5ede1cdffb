#include "sligeo/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sligeo/error.hpp"
#include "sligeo/random.hpp"

namespace sligeo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Map between a user coordinate and the unconstrained search coordinate.
struct Axis {
  Bound b;
  double lo = 0.0;  // in search units (log when log_scale)
  double hi = 0.0;

  explicit Axis(const Bound& bound) : b(bound) {
    if (std::isnan(b.lo) || std::isnan(b.hi) || b.lo > b.hi)
      throw InvalidArgument("invalid optimizer bound");
    if (b.log_scale) {
      if (!(b.lo > 0.0)) throw InvalidArgument("log-scale bound needs a positive lower end");
      lo = std::log(b.lo);
      hi = std::log(b.hi);
    } else {
      lo = b.lo;
      hi = b.hi;
    }
  }

  bool fixed() const { return lo == hi; }

  double to_user(double y) const {
    double t;
    const bool flo = std::isfinite(lo), fhi = std::isfinite(hi);
    if (fixed()) {
      t = lo;
    } else if (flo && fhi) {
      t = lo + (hi - lo) * (std::sin(y) + 1.0) * 0.5;
      t = std::clamp(t, lo, hi);
    } else if (flo) {
      t = lo + y * y;
    } else if (fhi) {
      t = hi - y * y;
    } else {
      t = y;
    }
    return b.log_scale ? std::clamp(std::exp(t), b.lo, b.hi) : t;
  }

  double to_search(double x) const {
    double t = b.log_scale ? std::log(x) : x;
    t = std::clamp(t, lo, hi);
    const bool flo = std::isfinite(lo), fhi = std::isfinite(hi);
    if (fixed()) return 0.0;
    if (flo && fhi) return std::asin(std::clamp(2.0 * (t - lo) / (hi - lo) - 1.0, -1.0, 1.0));
    if (flo) return std::sqrt(t - lo);
    if (fhi) return std::sqrt(hi - t);
    return t;
  }
};

}  // namespace

OptimizeResult minimize_bounded(const Objective& f, std::span<const double> x0,
                                std::span<const Bound> bounds, const NelderMeadOptions& options) {
  if (x0.size() != bounds.size()) throw InvalidArgument("start point and bounds differ in length");
  std::vector<Axis> axes;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    axes.emplace_back(bounds[i]);
    if (x0[i] < bounds[i].lo || x0[i] > bounds[i].hi || std::isnan(x0[i]))
      throw InvalidArgument("start point lies outside the bounds");
  }

  OptimizeResult res;
  auto to_user = [&](const std::vector<double>& y) {
    std::vector<double> x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = axes[i].to_user(y[i]);
    return x;
  };
  auto eval = [&](const std::vector<double>& y) {
    ++res.evaluations;
    const double v = f(to_user(y));
    return std::isfinite(v) ? v : kInf;
  };

  if (options.max_iterations == 0) {
    res.x.assign(x0.begin(), x0.end());
    ++res.evaluations;
    const double v = f(res.x);
    res.value = std::isfinite(v) ? v : kInf;
    res.converged = true;
    return res;
  }

  std::vector<std::size_t> free_axes;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (!axes[i].fixed()) free_axes.push_back(i);
  }
  std::vector<double> y0(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) y0[i] = axes[i].to_search(x0[i]);

  const std::size_t n = free_axes.size();
  std::vector<std::vector<double>> simplex(n + 1, y0);
  for (std::size_t j = 0; j < n; ++j) simplex[j + 1][free_axes[j]] += options.initial_step;
  std::vector<double> fv(n + 1);
  for (std::size_t j = 0; j <= n; ++j) fv[j] = eval(simplex[j]);

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> s2(n + 1);
    std::vector<double> f2(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      s2[j] = std::move(simplex[order[j]]);
      f2[j] = fv[order[j]];
    }
    simplex = std::move(s2);
    fv = std::move(f2);
  };
  auto point = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> p = c;
    for (std::size_t i : free_axes) p[i] = c[i] + t * (w[i] - c[i]);
    return p;
  };

  sort_simplex();
  while (n > 0 && res.iterations < options.max_iterations) {
    double diameter = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      for (std::size_t i : free_axes)
        diameter = std::max(diameter, std::abs(simplex[j][i] - simplex[0][i]));
    }
    const bool flat = std::isfinite(fv[n]) &&
                      fv[n] - fv[0] <= options.f_tolerance * (std::abs(fv[0]) + options.f_tolerance);
    if (diameter <= options.x_tolerance || flat) {
      res.converged = true;
      break;
    }
    ++res.iterations;

    std::vector<double> centroid = simplex[0];
    for (std::size_t i : free_axes) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += simplex[j][i];
      centroid[i] = s / static_cast<double>(n);
    }
    const auto reflected = point(centroid, simplex[n], -1.0);
    const double fr = eval(reflected);
    if (fr < fv[0]) {
      const auto expanded = point(centroid, simplex[n], -2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[n] = expanded;
        fv[n] = fe;
      } else {
        simplex[n] = reflected;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      simplex[n] = reflected;
      fv[n] = fr;
    } else {
      const bool outside = fr < fv[n];
      const auto contracted = point(centroid, outside ? reflected : simplex[n], 0.5);
      const double fc = eval(contracted);
      if (fc < std::min(fr, fv[n])) {
        simplex[n] = contracted;
        fv[n] = fc;
      } else {
        for (std::size_t j = 1; j <= n; ++j) {
          simplex[j] = point(simplex[0], simplex[j], 0.5);
          fv[j] = eval(simplex[j]);
        }
      }
    }
    sort_simplex();
  }
  if (n == 0) res.converged = true;
  res.x = to_user(simplex[0]);
  res.value = fv[0];
  return res;
}

std::vector<OptimizeResult> minimize_multistart(const Objective& f, std::span<const double> x0,
                                                std::span<const Bound> bounds,
                                                const NelderMeadOptions& options,
                                                std::size_t starts, std::uint64_t seed) {
  if (starts == 0) throw InvalidArgument("multistart needs at least one start");
  if (x0.size() != bounds.size()) throw InvalidArgument("start point and bounds differ in length");
  std::mt19937_64 rng(seed);
  std::vector<OptimizeResult> runs;
  runs.reserve(starts);
  std::vector<double> start(x0.begin(), x0.end());
  for (std::size_t s = 0; s < starts; ++s) {
    if (s > 0) {
      for (std::size_t i = 0; i < bounds.size(); ++i) {
        const Bound& b = bounds[i];
        double lo = b.lo, hi = b.hi;
        if (!std::isfinite(lo)) lo = b.log_scale ? x0[i] / 100.0 : x0[i] - 100.0 * std::abs(x0[i]) - 1.0;
        if (!std::isfinite(hi)) hi = b.log_scale ? x0[i] * 100.0 : x0[i] + 100.0 * std::abs(x0[i]) + 1.0;
        const double u = uniform_unit(rng);
        start[i] = b.log_scale ? std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)))
                               : lo + u * (hi - lo);
        start[i] = std::clamp(start[i], b.lo, b.hi);
      }
    }
    runs.push_back(minimize_bounded(f, start, bounds, options));
  }
  return runs;
}

}  // namespace sligeo
