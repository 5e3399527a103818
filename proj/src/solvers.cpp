#include "sbe/solvers.hpp"

#include <chrono>
#include <utility>

#include "sbe/errors.hpp"
#include "scan_kernels.hpp"

namespace sbe {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_init(const Dataset& data, const Centroids& init, const char* op) {
  if (init.count() < 1) throw ContractViolation(std::string(op) + ": empty init");
  if (data.dim() != init.dim())
    throw ContractViolation(std::string(op) + ": dataset and init dimensions differ");
}

// Assign all points and return cluster means; empty clusters keep their
// previous centroid row.
Matrix lloyd_means(const Dataset& data, const Matrix& centers) {
  const std::size_t n = data.size();
  const std::size_t k = centers.rows;
  const std::size_t d = centers.cols;
  const std::vector<double> csq = detail::center_sqnorms(centers);
  Matrix sums(k, d, 0.0);
  std::vector<std::int64_t> counts(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = data.point(i);
    const std::size_t j = detail::nearest_center(p, centers, csq, nullptr);
    ++counts[j];
    double* s = sums.row(j);
    for (std::size_t t = 0; t < d; ++t) s[t] += p[t];
  }
  for (std::size_t j = 0; j < k; ++j) {
    double* s = sums.row(j);
    if (counts[j] == 0) {
      const double* c = centers.row(j);
      for (std::size_t t = 0; t < d; ++t) s[t] = c[t];
    } else {
      const double cnt = static_cast<double>(counts[j]);
      for (std::size_t t = 0; t < d; ++t) s[t] /= cnt;
    }
  }
  return sums;
}

void finish_trace(SolveTrace& tr, const Dataset& data, Matrix final_centers,
                  const TraceOptions& opts) {
  tr.final_objective = (opts.record_objective && !tr.objective_per_outer_iter.empty())
                           ? tr.objective_per_outer_iter.back()
                           : detail::objective_rows(data, final_centers);
  tr.final_centroids = Centroids(std::move(final_centers));
}

}  // namespace

Centroids em_step(const Dataset& data, const Centroids& c) {
  check_init(data, c, "em_step");
  return Centroids(lloyd_means(data, c.centers()));
}

SolveTrace em_run(const Dataset& data, const Centroids& init, std::size_t max_iter,
                  double tol, TraceOptions opts) {
  check_init(data, init, "em_run");
  if (max_iter < 1) throw ContractViolation("em_run: max_iter must be >= 1");

  SolveTrace tr;
  tr.algorithm = "em";
  Matrix centers = init.centers();
  const std::uint64_t evals_per_iter =
      static_cast<std::uint64_t>(data.size()) * init.count();

  for (std::size_t it = 1; it <= max_iter; ++it) {
    const auto t0 = Clock::now();
    Matrix next = lloyd_means(data, centers);
    const double displacement = frobenius_distance(next, centers);
    centers = std::move(next);
    tr.wall_time_per_iter.push_back(seconds_since(t0));
    tr.distance_evaluations += evals_per_iter;
    tr.iterations = it;
    if (opts.record_objective)
      tr.objective_per_outer_iter.push_back(detail::objective_rows(data, centers));
    if (displacement <= tol) break;
  }
  finish_trace(tr, data, std::move(centers), opts);
  return tr;
}

SolveTrace mbem_run(const Dataset& data, const Centroids& init, const SolverConfig& cfg,
                    RngStream& rng, TraceOptions opts) {
  check_init(data, init, "mbem_run");
  cfg.validate(data.size());
  if (cfg.k != init.count())
    throw ContractViolation("mbem_run: cfg.k does not match init centroid count");

  const std::size_t n = data.size();
  const std::size_t k = init.count();
  const std::size_t d = data.dim();
  const std::size_t m = cfg.batch_size;

  SolveTrace tr;
  tr.algorithm = "mbem";
  Matrix centers = init.centers();
  std::vector<std::int64_t> cumulative(k, 0);  // points ever assigned, per centroid
  Matrix sums(k, d);
  std::vector<std::int64_t> counts(k);

  for (std::size_t outer = 1; outer <= cfg.omaxit; ++outer) {
    const auto t0 = Clock::now();
    const auto batch = detail::sample_without_replacement(n, m, rng);
    const std::vector<double> csq = detail::center_sqnorms(centers);
    sums.values.assign(k * d, 0.0);
    counts.assign(k, 0);
    for (const std::size_t i : batch) {
      const double* p = data.point(i);
      const std::size_t j = detail::nearest_center(p, centers, csq, nullptr);
      ++counts[j];
      double* s = sums.row(j);
      for (std::size_t t = 0; t < d; ++t) s[t] += p[t];
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) continue;
      cumulative[j] += counts[j];
      // x_j += (m_j / v_j) (batch_mean_j - x_j): the streaming update with
      // per-point learning rate 1/v_j applied in closed form.
      const double rate =
          static_cast<double>(counts[j]) / static_cast<double>(cumulative[j]);
      const double* s = sums.row(j);
      double* c = centers.row(j);
      const double cnt = static_cast<double>(counts[j]);
      for (std::size_t t = 0; t < d; ++t) c[t] += rate * (s[t] / cnt - c[t]);
    }
    tr.wall_time_per_iter.push_back(seconds_since(t0));
    tr.distance_evaluations += static_cast<std::uint64_t>(m) * k;
    tr.iterations = outer;
    if (opts.record_objective)
      tr.objective_per_outer_iter.push_back(detail::objective_rows(data, centers));
  }
  finish_trace(tr, data, std::move(centers), opts);
  return tr;
}

SolveTrace mbem_run(const Dataset& data, const Centroids& init, const SolverConfig& cfg,
                    TraceOptions opts) {
  RngStream rng(cfg.seed, 0);
  return mbem_run(data, init, cfg, rng, opts);
}

FixedPointResult fixed_point_solve(const Dataset& data, const Centroids& x_k,
                                   double gamma, std::size_t max_inner, double tol,
                                   std::vector<Matrix>* iterate_log) {
  check_init(data, x_k, "fixed_point_solve");
  if (!(gamma > 0.0)) throw ContractViolation("fixed_point_solve: gamma must be > 0");
  if (max_inner < 1) throw ContractViolation("fixed_point_solve: max_inner must be >= 1");

  const Matrix& anchor = x_k.centers();
  Matrix y = anchor;
  Matrix grad;
  Matrix y_next(y.rows, y.cols);
  if (iterate_log) iterate_log->push_back(y);

  const auto step_from = [&](const Matrix& from) {
    detail::full_gradient_rows(data, from, grad);
    for (std::size_t t = 0; t < from.values.size(); ++t)
      y_next.values[t] = anchor.values[t] - gamma * grad.values[t];
  };

  FixedPointResult result;
  for (std::size_t it = 1; it <= max_inner; ++it) {
    step_from(y);
    if (iterate_log) iterate_log->push_back(y_next);
    // ||y - (anchor - gamma grad(y))||: the fixed-point residual of y.
    result.residual = frobenius_distance(y, y_next);
    result.iterations = it;
    if (result.residual <= tol) {
      result.converged = true;
      result.y_star = Centroids(std::move(y));
      return result;
    }
    std::swap(y, y_next);
  }
  // max_inner reached: report the latest iterate with its own residual.
  step_from(y);
  result.residual = frobenius_distance(y, y_next);
  result.converged = result.residual <= tol;
  result.y_star = Centroids(std::move(y));
  return result;
}

FixedPointResult be_prox_step(const Dataset& data, const Centroids& x_k, double gamma) {
  return fixed_point_solve(data, x_k, gamma);
}

SolveTrace be_run(const Dataset& data, const Centroids& init, const SolverConfig& cfg,
                  double tol, TraceOptions opts) {
  check_init(data, init, "be_run");
  if (!(cfg.gamma0 > 0.0)) throw ContractViolation("be_run: gamma0 must be > 0");
  if (!(cfg.beta > 0.0 && cfg.beta <= 1.0))
    throw ContractViolation("be_run: beta must be in (0, 1]");
  if (cfg.omaxit < 1) throw ContractViolation("be_run: omaxit must be >= 1");

  SolveTrace tr;
  tr.algorithm = "be";
  Centroids current = init;
  double gamma = cfg.gamma0;
  const std::uint64_t evals_per_grad =
      static_cast<std::uint64_t>(data.size()) * init.count();

  for (std::size_t outer = 1; outer <= cfg.omaxit; ++outer) {
    const auto t0 = Clock::now();
    FixedPointResult step = fixed_point_solve(data, current, gamma);
    const double displacement =
        frobenius_distance(step.y_star.centers(), current.centers());
    current = std::move(step.y_star);
    tr.wall_time_per_iter.push_back(seconds_since(t0));
    tr.distance_evaluations += evals_per_grad * step.iterations;
    tr.step_size_per_outer_iter.push_back(gamma);
    gamma *= cfg.beta;
    tr.iterations = outer;
    if (opts.record_objective)
      tr.objective_per_outer_iter.push_back(
          detail::objective_rows(data, current.centers()));
    if (displacement <= tol) break;
  }
  finish_trace(tr, data, current.centers(), opts);
  return tr;
}

SolveTrace sbe_run(const Dataset& data, const Centroids& init, const SolverConfig& cfg,
                   RngStream& rng, TraceOptions opts) {
  check_init(data, init, "sbe_run");
  cfg.validate(data.size());
  if (cfg.k != init.count())
    throw ContractViolation("sbe_run: cfg.k does not match init centroid count");

  const std::size_t n = data.size();
  const std::size_t k = init.count();
  const std::size_t m = cfg.batch_size;

  SolveTrace tr;
  tr.algorithm = "sbe";
  Matrix x = init.centers();
  Matrix anchor, y, xk, grad;
  double gamma = cfg.gamma0;

  for (std::size_t outer = 1; outer <= cfg.omaxit; ++outer) {
    const auto t0 = Clock::now();
    anchor = x;
    y = anchor;   // y^{0,k} = x^{k-1}
    xk = anchor;  // x^k starts at y^{0,k}
    for (std::size_t inner = 0; inner < cfg.imaxit; ++inner) {
      const auto batch = detail::sample_without_replacement(n, m, rng);
      detail::minibatch_gradient_rows(data, y, batch, grad);
      for (std::size_t t = 0; t < y.values.size(); ++t) {
        y.values[t] = anchor.values[t] - gamma * grad.values[t];
        xk.values[t] = cfg.alpha * xk.values[t] + (1.0 - cfg.alpha) * y.values[t];
      }
    }
    x = std::move(xk);
    tr.wall_time_per_iter.push_back(seconds_since(t0));
    tr.step_size_per_outer_iter.push_back(gamma);
    gamma *= cfg.beta;
    tr.distance_evaluations +=
        static_cast<std::uint64_t>(cfg.imaxit) * m * k;
    tr.iterations = outer;
    if (!x.all_finite())
      throw DivergenceError(
          "sbe_run: non-finite centroids at outer iteration " + std::to_string(outer),
          outer);
    if (opts.record_objective)
      tr.objective_per_outer_iter.push_back(detail::objective_rows(data, x));
  }
  finish_trace(tr, data, std::move(x), opts);
  return tr;
}

SolveTrace sbe_run(const Dataset& data, const Centroids& init, const SolverConfig& cfg,
                   TraceOptions opts) {
  RngStream rng(cfg.seed, 0);
  return sbe_run(data, init, cfg, rng, opts);
}

}  // namespace sbe
