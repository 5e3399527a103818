#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sbe/core.hpp"
#include "sbe/solvers.hpp"

namespace sbe {

enum class Algorithm { Em, MbEm, Sbe, Be };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct SummaryStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double variance = 0.0;  // population variance (divisor = count)
};

/// Exact order statistics and population moments; input must be non-empty.
SummaryStats summarize(const std::vector<double>& values);

/// Min/max/mean/variance of final objectives over repeated seeded runs,
/// plus the per-trial arrays they are computed from.
struct TrialSummary {
  std::string algorithm;
  std::size_t k = 0;
  std::size_t batch_size = 0;
  std::size_t omaxit = 0;
  std::size_t imaxit = 0;
  std::uint64_t base_seed = 0;
  std::size_t trials = 0;

  // Indexed by trial; diverged slots hold NaN / zero and are listed below.
  std::vector<double> final_objectives;
  std::vector<double> wall_seconds;
  std::vector<std::uint64_t> distance_evaluations;
  std::vector<std::size_t> diverged_trials;

  SummaryStats stats;  // over non-diverged trials
};

struct Histogram {
  std::vector<double> bin_edges;       // bins + 1 ascending edges
  std::vector<std::size_t> counts;     // per bin; sums to the input size
};

/// Equal-width bins over [min, max]; the last bin is right-inclusive.
Histogram make_histogram(const std::vector<double>& values, std::size_t bins);

/// Runs `trials` independent solves; trial t draws its initial centroids and
/// all batches from RngStream(base_seed, t), so results are identical for any
/// worker count. threads = 0 means hardware concurrency.
TrialSummary run_trials(const Dataset& data, Algorithm algo, const SolverConfig& cfg,
                        std::size_t trials, std::uint64_t base_seed,
                        std::size_t threads = 1);

struct CostRow {
  std::string algorithm;
  std::size_t iterations = 0;
  std::uint64_t distance_evaluations_total = 0;
  double distance_evaluations_per_iter = 0.0;
  double mean_seconds_per_iter = 0.0;
};

/// Per-algorithm mean per-outer-iteration wall time and distance-evaluation
/// counts (EM: N*K per iteration, mb-EM: M*K, SBE: imaxit*M*K).
struct CostReport {
  std::vector<CostRow> rows;
};

CostReport compare_cost(const std::vector<SolveTrace>& traces);

/// Table-style JSON (min/max/mean/variance plus per-trial arrays). Wall-clock
/// timings are emitted only on request: they are not reproducible across runs
/// and every default output must be.
std::string trial_summary_to_json(const TrialSummary& summary,
                                  bool include_timings = false);

/// CSV with header `bin_left,bin_right,count`.
std::string histogram_to_csv(const Histogram& h);
void write_histogram_csv(const std::filesystem::path& path, const Histogram& h);

}  // namespace sbe
