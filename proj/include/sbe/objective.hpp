#pragma once

#include <vector>

#include "sbe/core.hpp"

namespace sbe {

/// Per-centroid gradient: row j is the gradient block with respect to x_j.
/// Rows of centroids that own no points are zero.
using GradientBlock = Matrix;

/// Distinct point indices forming one mini-batch.
struct MiniBatch {
  std::vector<std::size_t> indices;
};

/// phi(x) = (1/2N) sum_i min_j ||x_j - p_i||^2.
double objective(const Dataset& data, const Centroids& c);

/// Block j = (1/N) sum_{i in C_j} (x_j - p_i), with C_j from assign().
GradientBlock full_gradient(const Dataset& data, const Centroids& c);

/// m distinct indices uniform without replacement; advances rng.
MiniBatch sample_minibatch(std::size_t n, std::size_t m, RngStream& rng);

/// Block j = (1/M) sum over batch points nearest to x_j of (x_j - p_i).
GradientBlock minibatch_gradient(const Dataset& data, const Centroids& c,
                                 const MiniBatch& batch);

/// Entry j = |C_j| / N.
std::vector<double> hessian_diagonal(const Dataset& data, const Centroids& c);

/// max_j |C_j| / N: the gradient's Lipschitz constant on the current
/// assignment region.
double lipschitz_estimate(const Dataset& data, const Centroids& c);

namespace detail {

double objective_rows(const Dataset& data, const Matrix& centers);
void full_gradient_rows(const Dataset& data, const Matrix& centers, Matrix& out);
void minibatch_gradient_rows(const Dataset& data, const Matrix& centers,
                             const std::vector<std::size_t>& batch, Matrix& out);
double lipschitz_rows(const Dataset& data, const Matrix& centers);

}  // namespace detail

}  // namespace sbe
