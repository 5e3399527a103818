#pragma once

#include <cstdint>
#include <vector>

#include "sbe/matrix.hpp"
#include "sbe/rng.hpp"

namespace sbe {

enum class DataSource { Csv, Idx, Synthetic };

/// Immutable point set. Row i is point p_i; squared row norms are precomputed
/// once for the expanded-form distance kernels.
class Dataset {
 public:
  /// Requires N >= 1, d >= 1 and every entry finite.
  Dataset(Matrix points, DataSource source, std::vector<int> labels = {});

  std::size_t size() const { return points_.rows; }
  std::size_t dim() const { return points_.cols; }
  const Matrix& points() const { return points_; }
  const double* point(std::size_t i) const { return points_.row(i); }
  double point_sqnorm(std::size_t i) const { return sqnorms_[i]; }
  DataSource source() const { return source_; }

  bool has_labels() const { return !labels_.empty(); }
  const std::vector<int>& labels() const { return labels_; }

 private:
  Matrix points_;
  std::vector<double> sqnorms_;
  std::vector<int> labels_;
  DataSource source_;
};

/// K centroid positions. Validated on construction; default-constructed
/// instances are empty placeholders (e.g. inside a not-yet-filled trace).
class Centroids {
 public:
  Centroids() = default;
  /// Requires K >= 1 and every entry finite.
  explicit Centroids(Matrix centers);

  std::size_t count() const { return centers_.rows; }
  std::size_t dim() const { return centers_.cols; }
  const Matrix& centers() const { return centers_; }

  bool operator==(const Centroids&) const = default;

 private:
  Matrix centers_;
};

/// Nearest-centroid partition: labels[i] is the index of point i's centroid,
/// counts[j] = |C_j|.
struct Assignment {
  std::vector<std::int32_t> labels;
  std::vector<std::int64_t> counts;
};

/// All tunables of the stochastic solvers. `alpha` is the trajectory
/// averaging weight, `beta` the geometric step decay applied after each
/// outer iteration.
struct SolverConfig {
  std::size_t k = 0;
  double gamma0 = 0.0;
  double alpha = 0.75;
  double beta = 1.0 / 1.01;
  std::size_t batch_size = 0;
  std::size_t imaxit = 5;
  std::size_t omaxit = 100;
  std::uint64_t seed = 0;

  /// Throws ContractViolation unless gamma0 > 0, 1 <= batch_size <= n,
  /// imaxit >= 1, omaxit >= 1, 0 <= alpha < 1 and 0 < beta <= 1.
  void validate(std::size_t n_points) const;
};

/// Nearest-centroid assignment of every point; exact squared-distance ties
/// resolve to the smallest centroid index.
Assignment assign(const Dataset& data, const Centroids& c);

/// k distinct rows of `data` sampled uniformly without replacement.
Centroids init_random(const Dataset& data, std::size_t k, RngStream& rng);

/// Wraps an explicit K x d matrix of centroid positions.
Centroids init_explicit(Matrix values);

namespace detail {

// Unchecked kernels shared by the solvers; `centers` rows are centroids.
void assign_rows(const Dataset& data, const Matrix& centers, Assignment& out);

// Uniform m-subset of {0..n-1} (Floyd's algorithm), returned sorted.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t m,
                                                    RngStream& rng);

}  // namespace detail

}  // namespace sbe
