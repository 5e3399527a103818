#pragma once

// Internal distance-scan helpers shared by the core and objective kernels.

#include <cstddef>
#include <limits>
#include <vector>

#include "sbe/matrix.hpp"

namespace sbe::detail {

inline std::vector<double> center_sqnorms(const Matrix& centers) {
  std::vector<double> sq(centers.rows);
  for (std::size_t j = 0; j < centers.rows; ++j)
    sq[j] = row_sqnorm(centers.row(j), centers.cols);
  return sq;
}

// argmin_j ||c_j - p||^2 via the expanded form ||c_j||^2 - 2 <c_j, p>; exact
// ties resolve to the smallest j because only a strictly smaller score
// replaces the running best. score_out receives min_j (||c_j||^2 - 2<c_j,p>),
// i.e. the squared distance minus ||p||^2.
inline std::size_t nearest_center(const double* p, const Matrix& centers,
                                  const std::vector<double>& csq, double* score_out) {
  const std::size_t k = centers.rows;
  const std::size_t d = centers.cols;
  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j) {
    const double* c = centers.row(j);
    double dot = 0.0;
    for (std::size_t t = 0; t < d; ++t) dot += c[t] * p[t];
    const double score = csq[j] - 2.0 * dot;
    if (score < best_score) {
      best = j;
      best_score = score;
    }
  }
  if (score_out) *score_out = best_score;
  return best;
}

}  // namespace sbe::detail
