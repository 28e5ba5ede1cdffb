#include "sligeo/kernels.hpp"

#include <cmath>
#include <string>

#include "sligeo/error.hpp"

namespace sligeo {

bool KernelSpec::compact() const {
  return family != KernelFamily::exponential && family != KernelFamily::gaussian;
}

double KernelSpec::support() const { return compact() ? 1.0 : cutoff; }

std::string_view kernel_name(KernelFamily family) {
  switch (family) {
    case KernelFamily::uniform: return "uniform";
    case KernelFamily::triangular: return "triangular";
    case KernelFamily::epanechnikov: return "epanechnikov";
    case KernelFamily::quadratic: return "quadratic";
    case KernelFamily::quartic: return "quartic";
    case KernelFamily::tricube: return "tricube";
    case KernelFamily::spherical: return "spherical";
    case KernelFamily::truncated_cauchy: return "truncated_cauchy";
    case KernelFamily::exponential: return "exponential";
    case KernelFamily::gaussian: return "gaussian";
  }
  return "unknown";
}

KernelFamily parse_kernel(std::string_view name) {
  for (KernelFamily f : kAllKernelFamilies) {
    if (kernel_name(f) == name) return f;
  }
  throw InvalidArgument("unknown kernel family '" + std::string(name) + "'");
}

double eval_kernel(const KernelSpec& spec, double u) {
  if (!(u >= 0.0) || !std::isfinite(u))
    throw InvalidArgument("kernel argument must be finite and >= 0");
  const bool inside = u <= 1.0;
  switch (spec.family) {
    case KernelFamily::uniform:
      return inside ? 1.0 : 0.0;
    case KernelFamily::triangular:
      return inside ? 1.0 - u : 0.0;
    case KernelFamily::epanechnikov:
      return inside ? (1.0 - u) * (1.0 - u) : 0.0;
    case KernelFamily::quadratic:
      return inside ? 1.0 - u * u : 0.0;
    case KernelFamily::quartic: {
      const double t = 1.0 - u * u;
      return inside ? t * t : 0.0;
    }
    case KernelFamily::tricube: {
      const double t = 1.0 - u * u * u;
      return inside ? t * t * t : 0.0;
    }
    case KernelFamily::spherical:
      return inside ? 1.0 - 1.5 * u + 0.5 * u * u * u : 0.0;
    case KernelFamily::truncated_cauchy:
      return inside ? 1.0 / (1.0 + u * u) : 0.0;
    case KernelFamily::exponential:
      return std::exp(-u);
    case KernelFamily::gaussian:
      return std::exp(-u * u);
  }
  return 0.0;
}

double kernel_weight(const KernelSpec& spec, double u) {
  if (u > spec.support()) return 0.0;
  return eval_kernel(spec, u);
}

BandwidthField local_bandwidths(const SpatialIndex& index, std::size_t k, double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("bandwidth factor mu must be > 0");
  const std::size_t n = index.size();
  if (k == 0 || k >= n)
    throw InvalidArgument("neighbor order k=" + std::to_string(k) + " requires k in [1, " +
                          std::to_string(n) + ")");
  BandwidthField field;
  field.k = k;
  field.mu = mu;
  field.h.resize(n);
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = index.knn_distance(index.points()[i], k, true);
    field.h[i] = mu * d;
    if (!(d > 0.0)) bad.push_back(i);
  }
  if (!bad.empty()) {
    std::string msg = "coincident sample points give a zero k-th neighbor distance (k=" +
                      std::to_string(k) + ") at indices:";
    for (std::size_t i = 0; i < bad.size() && i < 20; ++i) msg += " " + std::to_string(bad[i]);
    if (bad.size() > 20) msg += " ... (" + std::to_string(bad.size()) + " total)";
    throw DataError(msg);
  }
  return field;
}

double bandwidth_for_target(std::span<const double> target, const SpatialIndex& index,
                            std::size_t k, double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("bandwidth factor mu must be > 0");
  const auto nn = index.nearest(target, k + 1);
  const bool coincident = !nn.empty() && nn.front().distance == 0.0;
  const std::size_t pos = coincident ? k : k - 1;
  if (k == 0 || pos >= nn.size())
    throw InvalidArgument("neighbor order k=" + std::to_string(k) + " out of range for " +
                          std::to_string(index.size()) + " samples");
  const double d = nn[pos].distance;
  if (!(d > 0.0)) throw DataError("target has a zero k-th neighbor distance (coincident samples)");
  return mu * d;
}

}  // namespace sligeo
