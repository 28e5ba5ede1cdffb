#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sligeo/point_set.hpp"
#include "sligeo/spatial_index.hpp"

namespace sligeo {

enum class KernelFamily {
  uniform,
  triangular,
  epanechnikov,
  quadratic,
  quartic,
  tricube,
  spherical,
  truncated_cauchy,
  exponential,
  gaussian,
};

inline constexpr std::array<KernelFamily, 10> kAllKernelFamilies = {
    KernelFamily::uniform,     KernelFamily::triangular,       KernelFamily::epanechnikov,
    KernelFamily::quadratic,   KernelFamily::quartic,          KernelFamily::tricube,
    KernelFamily::spherical,   KernelFamily::truncated_cauchy, KernelFamily::exponential,
    KernelFamily::gaussian,
};

/// A kernel family plus the truncation point used for the infinite-support
/// families (exponential, gaussian). Compact families ignore `cutoff`.
struct KernelSpec {
  KernelFamily family = KernelFamily::spherical;
  double cutoff = 5.0;

  bool compact() const;
  /// Largest normalized distance u with a stored (possibly nonzero) weight.
  double support() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

std::string_view kernel_name(KernelFamily family);
/// Parses the lowercase family name; throws InvalidArgument for unknown names.
KernelFamily parse_kernel(std::string_view name);

/// K(u) for u >= 0, exactly as the closed-form kernel table defines it.
///
/// The step function is closed at the boundary (θ(0) = 1), so the compact
/// families are evaluated at u = 1 and vanish only for u > 1. Note that the
/// truncated Cauchy kernel is discontinuous there: K(1) = 0.5, K(1+) = 0.
/// Infinite-support families are NOT truncated here; see kernel_weight().
double eval_kernel(const KernelSpec& spec, double u);

/// K(u) restricted to u <= spec.support(); this is what assembly uses.
double kernel_weight(const KernelSpec& spec, double u);

/// Adaptive bandwidths h_n = mu * D_{n,[k]}.
struct BandwidthField {
  std::vector<double> h;
  std::size_t k = 0;
  double mu = 0.0;
};

/// Bandwidth of every indexed point from its k-th nearest neighbour (self
/// excluded). Throws DataError listing the points whose k-th neighbour
/// distance is zero (coincident points up to order k).
BandwidthField local_bandwidths(const SpatialIndex& index, std::size_t k, double mu);

/// Bandwidth at an arbitrary target: mu times the k-th nearest sample distance,
/// skipping one sample at exactly zero distance if the target coincides with it.
double bandwidth_for_target(std::span<const double> target, const SpatialIndex& index,
                            std::size_t k, double mu);

}  // namespace sligeo
