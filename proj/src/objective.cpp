#include "sbe/objective.hpp"

#include <algorithm>

#include "sbe/errors.hpp"
#include "scan_kernels.hpp"

namespace sbe {

namespace detail {

double objective_rows(const Dataset& data, const Matrix& centers) {
  const std::size_t n = data.size();
  const std::vector<double> csq = center_sqnorms(centers);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double score = 0.0;
    nearest_center(data.point(i), centers, csq, &score);
    // ||c - p||^2 = ||p||^2 + (||c||^2 - 2 <c,p>), clamped against rounding.
    total += std::max(data.point_sqnorm(i) + score, 0.0);
  }
  return total / (2.0 * static_cast<double>(n));
}

void full_gradient_rows(const Dataset& data, const Matrix& centers, Matrix& out) {
  const std::size_t n = data.size();
  const std::size_t k = centers.rows;
  const std::size_t d = centers.cols;
  const std::vector<double> csq = center_sqnorms(centers);
  out.rows = k;
  out.cols = d;
  out.values.assign(k * d, 0.0);
  std::vector<std::int64_t> counts(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = data.point(i);
    const std::size_t j = nearest_center(p, centers, csq, nullptr);
    ++counts[j];
    double* sum = out.row(j);
    for (std::size_t t = 0; t < d; ++t) sum[t] += p[t];
  }
  // out currently holds per-cluster point sums; turn into gradient blocks.
  for (std::size_t j = 0; j < k; ++j) {
    double* g = out.row(j);
    const double* c = centers.row(j);
    if (counts[j] == 0) {
      for (std::size_t t = 0; t < d; ++t) g[t] = 0.0;
      continue;
    }
    const double cnt = static_cast<double>(counts[j]);
    for (std::size_t t = 0; t < d; ++t)
      g[t] = (cnt * c[t] - g[t]) / static_cast<double>(n);
  }
}

void minibatch_gradient_rows(const Dataset& data, const Matrix& centers,
                             const std::vector<std::size_t>& batch, Matrix& out) {
  const std::size_t k = centers.rows;
  const std::size_t d = centers.cols;
  const std::size_t m = batch.size();
  const std::vector<double> csq = center_sqnorms(centers);
  out.rows = k;
  out.cols = d;
  out.values.assign(k * d, 0.0);
  std::vector<std::int64_t> counts(k, 0);
  for (const std::size_t i : batch) {
    const double* p = data.point(i);
    const std::size_t j = nearest_center(p, centers, csq, nullptr);
    ++counts[j];
    double* sum = out.row(j);
    for (std::size_t t = 0; t < d; ++t) sum[t] += p[t];
  }
  for (std::size_t j = 0; j < k; ++j) {
    double* g = out.row(j);
    const double* c = centers.row(j);
    if (counts[j] == 0) {
      for (std::size_t t = 0; t < d; ++t) g[t] = 0.0;
      continue;
    }
    const double cnt = static_cast<double>(counts[j]);
    for (std::size_t t = 0; t < d; ++t)
      g[t] = (cnt * c[t] - g[t]) / static_cast<double>(m);
  }
}

double lipschitz_rows(const Dataset& data, const Matrix& centers) {
  Assignment a;
  assign_rows(data, centers, a);
  std::int64_t largest = 0;
  for (const std::int64_t c : a.counts) largest = std::max(largest, c);
  return static_cast<double>(largest) / static_cast<double>(data.size());
}

}  // namespace detail

namespace {

void check_dims(const Dataset& data, const Centroids& c, const char* op) {
  if (data.dim() != c.dim())
    throw ContractViolation(std::string(op) + ": dataset and centroid dimensions differ");
}

}  // namespace

double objective(const Dataset& data, const Centroids& c) {
  check_dims(data, c, "objective");
  return detail::objective_rows(data, c.centers());
}

GradientBlock full_gradient(const Dataset& data, const Centroids& c) {
  check_dims(data, c, "full_gradient");
  Matrix out;
  detail::full_gradient_rows(data, c.centers(), out);
  return out;
}

MiniBatch sample_minibatch(std::size_t n, std::size_t m, RngStream& rng) {
  if (m < 1 || m > n)
    throw ContractViolation("sample_minibatch: m must be in [1, n]");
  return MiniBatch{detail::sample_without_replacement(n, m, rng)};
}

GradientBlock minibatch_gradient(const Dataset& data, const Centroids& c,
                                 const MiniBatch& batch) {
  check_dims(data, c, "minibatch_gradient");
  if (batch.indices.empty())
    throw ContractViolation("minibatch_gradient: empty batch");
  for (const std::size_t i : batch.indices)
    if (i >= data.size())
      throw ContractViolation("minibatch_gradient: batch index out of range");
  Matrix out;
  detail::minibatch_gradient_rows(data, c.centers(), batch.indices, out);
  return out;
}

std::vector<double> hessian_diagonal(const Dataset& data, const Centroids& c) {
  check_dims(data, c, "hessian_diagonal");
  const Assignment a = assign(data, c);
  std::vector<double> diag(c.count());
  for (std::size_t j = 0; j < c.count(); ++j)
    diag[j] = static_cast<double>(a.counts[j]) / static_cast<double>(data.size());
  return diag;
}

double lipschitz_estimate(const Dataset& data, const Centroids& c) {
  check_dims(data, c, "lipschitz_estimate");
  return detail::lipschitz_rows(data, c.centers());
}

}  // namespace sbe
