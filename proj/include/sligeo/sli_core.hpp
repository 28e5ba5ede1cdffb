#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "sligeo/kernels.hpp"
#include "sligeo/point_set.hpp"

namespace sligeo {

/// Observation locations with one finite value per location.
struct SampleSet {
  PointSet points;
  std::vector<double> values;

  SampleSet(PointSet pts, std::vector<double> vals);

  std::size_t size() const { return values.size(); }
  double mean() const;
  SampleSet subset(std::span<const std::size_t> ids) const;
};

/// Parameter vector (lambda, m_x, c1, k, mu) plus the kernel.
struct SliParams {
  double lambda = 1.0;  // scale coefficient
  double mean = 0.0;    // constant mean level m_x
  double c1 = 1.0;      // rigidity coefficient
  std::size_t k = 3;
  double mu = 1.5;
  KernelSpec kernel{};

  /// Throws InvalidArgument unless lambda, c1, mu > 0 and k >= 1.
  void validate() const;
};

/// Normalized kernel interaction weights w_{n,m} in compressed-row form.
///
/// Only entries inside the kernel support with K > 0 are stored; the diagonal
/// self-weight K(0)/Z = 1/Z is always present. The matrix is generally not
/// symmetric because each row uses its own bandwidth.
class WeightMatrix {
 public:
  struct Entry {
    std::size_t col;
    double value;
  };

  std::size_t size() const { return row_ptr_.size() - 1; }
  /// The global normalization: sum over all pairs (k, l), l = k included.
  double normalization() const { return z_; }
  std::span<const Entry> row(std::size_t n) const {
    return {entries_.data() + row_ptr_[n], row_ptr_[n + 1] - row_ptr_[n]};
  }
  std::size_t stored() const { return entries_.size(); }
  /// w_{n,m}, or 0 if not stored. O(log row length).
  double at(std::size_t n, std::size_t m) const;

 private:
  friend WeightMatrix compute_weights(const SampleSet&, const SpatialIndex&,
                                      const BandwidthField&, const KernelSpec&, unsigned);
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Entry> entries_;
  double z_ = 0.0;
};

/// Builds the weights of every sample pair within kernel support. Rows are
/// assembled independently (optionally in parallel); the normalization is a
/// compensated sum taken in row order, so the result does not depend on
/// `workers`.
WeightMatrix compute_weights(const SampleSet& samples, const SpatialIndex& index,
                             const BandwidthField& bandwidths, const KernelSpec& kernel,
                             unsigned workers = 1);
/// Same, building a temporary index over the sample points.
WeightMatrix compute_weights(const SampleSet& samples, const BandwidthField& bandwidths,
                             const KernelSpec& kernel, unsigned workers = 1);

/// Kernel-averaged squared difference S1 = sum_n sum_m w_{n,m} (x_n - x_m)^2.
double gradient_term(const SampleSet& samples, const WeightMatrix& weights);

/// H = [ (X-m)'(X-m)/N + c1 S1 ] / (2 lambda).
double energy(const SampleSet& samples, const SliParams& params, const WeightMatrix& weights);

/// Symmetric sparse precision matrix. Stores the diagonal and the strict
/// lower triangle in compressed-row form (row i holds columns j < i).
class SparsePrecision {
 public:
  struct Entry {
    std::size_t col;
    double value;
  };

  std::size_t size() const { return diag_.size(); }
  std::span<const double> diagonal() const { return diag_; }
  std::span<const Entry> lower_row(std::size_t i) const {
    return {lower_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::size_t lower_stored() const { return lower_.size(); }
  const SliParams& params() const { return params_; }

  /// J_{i,j} (either triangle).
  double at(std::size_t i, std::size_t j) const;
  /// y = J x.
  std::vector<double> multiply(std::span<const double> x) const;
  /// x' J x.
  double quadratic_form(std::span<const double> x) const;
  /// Dense row-major copy; intended for tests and small diagnostics.
  std::vector<double> to_dense() const;
  /// Writes "row col value" lines (0-based, both triangles, row-major).
  void write_coordinates(std::ostream& os) const;

 private:
  friend SparsePrecision build_precision(const SampleSet&, const SliParams&,
                                         const WeightMatrix&);
  std::vector<double> diag_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Entry> lower_;
  SliParams params_;
};

/// J = (I/N + c1 J1) / lambda with J1 built from symmetrized weights.
/// Throws InvalidArgument for lambda <= 0 or c1 <= 0.
SparsePrecision build_precision(const SampleSet& samples, const SliParams& params,
                                const WeightMatrix& weights);

/// Stored nonzeros of the full symmetric matrix over N^2.
double sparsity_index(const SparsePrecision& precision);

}  // namespace sligeo
