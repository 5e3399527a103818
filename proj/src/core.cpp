#include "sbe/core.hpp"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include "sbe/errors.hpp"
#include "scan_kernels.hpp"

namespace sbe {

Dataset::Dataset(Matrix points, DataSource source, std::vector<int> labels)
    : points_(std::move(points)), labels_(std::move(labels)), source_(source) {
  if (points_.rows < 1 || points_.cols < 1)
    throw ContractViolation("Dataset: need at least one point and one dimension");
  if (!points_.all_finite())
    throw ContractViolation("Dataset: non-finite entry");
  if (!labels_.empty() && labels_.size() != points_.rows)
    throw ContractViolation("Dataset: label count does not match point count");
  sqnorms_.resize(points_.rows);
  for (std::size_t i = 0; i < points_.rows; ++i)
    sqnorms_[i] = row_sqnorm(points_.row(i), points_.cols);
}

Centroids::Centroids(Matrix centers) : centers_(std::move(centers)) {
  if (centers_.rows < 1 || centers_.cols < 1)
    throw ContractViolation("Centroids: need at least one centroid and one dimension");
  if (!centers_.all_finite())
    throw ContractViolation("Centroids: non-finite entry");
}

void SolverConfig::validate(std::size_t n_points) const {
  if (k < 1) throw ContractViolation("SolverConfig: k must be >= 1");
  if (!(gamma0 > 0.0)) throw ContractViolation("SolverConfig: gamma0 must be > 0");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw ContractViolation("SolverConfig: alpha must be in [0, 1)");
  if (!(beta > 0.0 && beta <= 1.0))
    throw ContractViolation("SolverConfig: beta must be in (0, 1]");
  if (batch_size < 1 || batch_size > n_points)
    throw ContractViolation("SolverConfig: batch_size must be in [1, N]");
  if (imaxit < 1) throw ContractViolation("SolverConfig: imaxit must be >= 1");
  if (omaxit < 1) throw ContractViolation("SolverConfig: omaxit must be >= 1");
}

namespace detail {

void assign_rows(const Dataset& data, const Matrix& centers, Assignment& out) {
  const std::size_t n = data.size();
  const std::size_t k = centers.rows;
  out.labels.assign(n, 0);
  out.counts.assign(k, 0);
  const std::vector<double> csq = center_sqnorms(centers);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = nearest_center(data.point(i), centers, csq, nullptr);
    out.labels[i] = static_cast<std::int32_t>(j);
    ++out.counts[j];
  }
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t m,
                                                    RngStream& rng) {
  // Floyd's algorithm: uniform over m-subsets, O(m) memory.
  std::vector<std::size_t> out;
  out.reserve(m);
  std::unordered_set<std::size_t> seen;
  seen.reserve(m * 2);
  for (std::size_t j = n - m; j < n; ++j) {
    const std::size_t t = static_cast<std::size_t>(rng.uniform_below(j + 1));
    if (seen.insert(t).second) {
      out.push_back(t);
    } else {
      seen.insert(j);
      out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

Assignment assign(const Dataset& data, const Centroids& c) {
  if (data.dim() != c.dim())
    throw ContractViolation("assign: dataset and centroid dimensions differ");
  Assignment a;
  detail::assign_rows(data, c.centers(), a);
  return a;
}

Centroids init_random(const Dataset& data, std::size_t k, RngStream& rng) {
  if (k < 1 || k > data.size())
    throw ContractViolation("init_random: k must be in [1, N]");
  const auto idx = detail::sample_without_replacement(data.size(), k, rng);
  Matrix centers(k, data.dim());
  for (std::size_t j = 0; j < k; ++j) {
    const double* p = data.point(idx[j]);
    double* c = centers.row(j);
    for (std::size_t t = 0; t < data.dim(); ++t) c[t] = p[t];
  }
  return Centroids(std::move(centers));
}

Centroids init_explicit(Matrix values) { return Centroids(std::move(values)); }

}  // namespace sbe
