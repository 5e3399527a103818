#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbe/core.hpp"
#include "sbe/objective.hpp"

namespace sbe {

struct TraceOptions {
  /// Record the full-data objective once per outer iteration. Instrumentation
  /// only: never counted in distance_evaluations, excluded from wall times.
  bool record_objective = true;
};

struct SolveTrace {
  std::string algorithm;
  std::vector<double> objective_per_outer_iter;
  std::vector<double> wall_time_per_iter;        // seconds, solver kernel only
  std::vector<double> step_size_per_outer_iter;  // gamma used per outer (sbe/be)
  std::uint64_t distance_evaluations = 0;
  std::size_t iterations = 0;
  Centroids final_centroids;
  double final_objective = 0.0;
};

struct FixedPointResult {
  Centroids y_star;
  double residual = 0.0;  // ||y - (x_k - gamma grad phi(y))||_F at y_star
  std::size_t iterations = 0;
  bool converged = false;
};

/// One Lloyd iteration: assign all points, move each centroid to its cluster
/// mean; empty clusters keep their previous position.
Centroids em_step(const Dataset& data, const Centroids& c);

/// Lloyd's algorithm until the centroid displacement (Frobenius) drops to
/// `tol` or `max_iter` is reached. tol = 0 stops at an exact fixed point.
SolveTrace em_run(const Dataset& data, const Centroids& init, std::size_t max_iter,
                  double tol = 0.0, TraceOptions opts = {});

/// Mini-batch EM: per outer iteration, one batch of cfg.batch_size points is
/// assigned and each touched centroid moves toward its batch-cluster mean
/// with per-point learning rate 1/(cumulative count for that centroid).
SolveTrace mbem_run(const Dataset& data, const Centroids& init, const SolverConfig& cfg,
                    RngStream& rng, TraceOptions opts = {});
SolveTrace mbem_run(const Dataset& data, const Centroids& init, const SolverConfig& cfg,
                    TraceOptions opts = {});

/// Deterministic full-gradient fixed-point iteration y <- x_k - gamma grad
/// phi(y) from y = x_k. Non-convergence is reported via converged = false,
/// never an exception. `iterate_log`, when given, receives y^0, y^1, ...
FixedPointResult fixed_point_solve(const Dataset& data, const Centroids& x_k,
                                   double gamma, std::size_t max_inner = 10000,
                                   double tol = 1e-10,
                                   std::vector<Matrix>* iterate_log = nullptr);

/// One proximal-point step solved via fixed_point_solve with the default
/// tolerance. converged = false is a warning carried in the result.
FixedPointResult be_prox_step(const Dataset& data, const Centroids& x_k, double gamma);

/// Deterministic backward Euler: repeated be_prox_step with geometric step
/// decay, stopping at omaxit or when the outer displacement drops to `tol`.
SolveTrace be_run(const Dataset& data, const Centroids& init, const SolverConfig& cfg,
                  double tol = 0.0, TraceOptions opts = {});

/// Stochastic backward Euler. Outer loop k: anchor = x^{k-1}; inner loop of
/// cfg.imaxit fresh mini-batches iterating y <- anchor - gamma grad_batch(y)
/// while x^k accumulates the average alpha x^k + (1-alpha) y; gamma decays by
/// beta after each outer iteration. Non-finite centroids abort with
/// DivergenceError naming the outer iteration.
SolveTrace sbe_run(const Dataset& data, const Centroids& init, const SolverConfig& cfg,
                   RngStream& rng, TraceOptions opts = {});
SolveTrace sbe_run(const Dataset& data, const Centroids& init, const SolverConfig& cfg,
                   TraceOptions opts = {});

}  // namespace sbe
