#include "sbe/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "sbe/data_io.hpp"
#include "sbe/errors.hpp"

namespace sbe {

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Em: return "em";
    case Algorithm::MbEm: return "mbem";
    case Algorithm::Sbe: return "sbe";
    case Algorithm::Be: return "be";
  }
  return "unknown";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "em") return Algorithm::Em;
  if (name == "mbem") return Algorithm::MbEm;
  if (name == "sbe") return Algorithm::Sbe;
  if (name == "be") return Algorithm::Be;
  throw ContractViolation("unknown algorithm '" + name + "' (use em|mbem|sbe|be)");
}

SummaryStats summarize(const std::vector<double>& values) {
  if (values.empty()) throw ContractViolation("summarize: empty input");
  SummaryStats s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (const double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (const double v : values) {
    const double d = v - s.mean;
    sq += d * d;
  }
  s.variance = sq / static_cast<double>(values.size());
  return s;
}

Histogram make_histogram(const std::vector<double>& values, std::size_t bins) {
  if (values.empty()) throw ContractViolation("make_histogram: empty input");
  if (bins < 1) throw ContractViolation("make_histogram: bins must be >= 1");
  const double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (hi == lo) hi = lo + 1.0;  // keep edges strictly increasing

  Histogram h;
  h.bin_edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b <= bins; ++b)
    h.bin_edges[b] = lo + width * static_cast<double>(b);
  h.bin_edges.back() = hi;

  h.counts.assign(bins, 0);
  for (const double v : values) {
    std::size_t idx = static_cast<std::size_t>((v - lo) / width);
    if (idx >= bins) idx = bins - 1;  // right-inclusive last bin
    ++h.counts[idx];
  }
  return h;
}

namespace {

struct TrialSlot {
  double objective = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;
  std::uint64_t distance_evaluations = 0;
  bool diverged = false;
};

SolveTrace run_one(const Dataset& data, Algorithm algo, const SolverConfig& cfg,
                   const Centroids& init, RngStream& rng) {
  const TraceOptions opts{/*record_objective=*/false};
  switch (algo) {
    case Algorithm::Em: return em_run(data, init, cfg.omaxit, 0.0, opts);
    case Algorithm::MbEm: return mbem_run(data, init, cfg, rng, opts);
    case Algorithm::Sbe: return sbe_run(data, init, cfg, rng, opts);
    case Algorithm::Be: return be_run(data, init, cfg, 0.0, opts);
  }
  throw ContractViolation("run_one: bad algorithm");
}

}  // namespace

TrialSummary run_trials(const Dataset& data, Algorithm algo, const SolverConfig& cfg,
                        std::size_t trials, std::uint64_t base_seed,
                        std::size_t threads) {
  if (trials < 1) throw ContractViolation("run_trials: trials must be >= 1");
  if (cfg.k < 1 || cfg.k > data.size())
    throw ContractViolation("run_trials: k must be in [1, N]");

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, trials);

  std::vector<TrialSlot> slots(trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto worker = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        RngStream rng(base_seed, t);
        const Centroids init = init_random(data, cfg.k, rng);
        const SolveTrace trace = run_one(data, algo, cfg, init, rng);
        slots[t].objective = trace.final_objective;
        slots[t].distance_evaluations = trace.distance_evaluations;
        slots[t].wall_seconds = std::accumulate(trace.wall_time_per_iter.begin(),
                                                trace.wall_time_per_iter.end(), 0.0);
      } catch (const DivergenceError&) {
        slots[t].diverged = true;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  TrialSummary summary;
  summary.algorithm = algorithm_name(algo);
  summary.k = cfg.k;
  summary.batch_size =
      (algo == Algorithm::MbEm || algo == Algorithm::Sbe) ? cfg.batch_size : data.size();
  summary.omaxit = cfg.omaxit;
  summary.imaxit = (algo == Algorithm::Sbe) ? cfg.imaxit : 1;
  summary.base_seed = base_seed;
  summary.trials = trials;

  std::vector<double> completed;
  completed.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    summary.final_objectives.push_back(slots[t].objective);
    summary.wall_seconds.push_back(slots[t].wall_seconds);
    summary.distance_evaluations.push_back(slots[t].distance_evaluations);
    if (slots[t].diverged)
      summary.diverged_trials.push_back(t);
    else
      completed.push_back(slots[t].objective);
  }
  if (completed.empty())
    throw DivergenceError("run_trials: all " + std::to_string(trials) +
                              " trials diverged",
                          0);
  summary.stats = summarize(completed);
  return summary;
}

CostReport compare_cost(const std::vector<SolveTrace>& traces) {
  if (traces.empty()) throw ContractViolation("compare_cost: no traces");
  CostReport report;
  for (const auto& tr : traces) {
    CostRow row;
    row.algorithm = tr.algorithm;
    row.iterations = tr.iterations;
    row.distance_evaluations_total = tr.distance_evaluations;
    row.distance_evaluations_per_iter =
        static_cast<double>(tr.distance_evaluations) /
        static_cast<double>(tr.iterations);
    const double total_wall = std::accumulate(tr.wall_time_per_iter.begin(),
                                              tr.wall_time_per_iter.end(), 0.0);
    row.mean_seconds_per_iter = total_wall / static_cast<double>(tr.iterations);
    report.rows.push_back(row);
  }
  return report;
}

std::string trial_summary_to_json(const TrialSummary& summary, bool include_timings) {
  nlohmann::ordered_json j;
  j["algorithm"] = summary.algorithm;
  j["k"] = summary.k;
  j["batch_size"] = summary.batch_size;
  j["omaxit"] = summary.omaxit;
  j["imaxit"] = summary.imaxit;
  j["base_seed"] = summary.base_seed;
  j["trials"] = summary.trials;
  j["min"] = summary.stats.min;
  j["max"] = summary.stats.max;
  j["mean"] = summary.stats.mean;
  j["variance"] = summary.stats.variance;
  j["variance_convention"] = "population";
  j["final_objectives"] = summary.final_objectives;  // NaN -> null for diverged
  j["distance_evaluations"] = summary.distance_evaluations;
  j["diverged_trials"] = summary.diverged_trials;
  if (include_timings) j["wall_seconds"] = summary.wall_seconds;
  return j.dump(2) + "\n";
}

std::string histogram_to_csv(const Histogram& h) {
  std::string out = "bin_left,bin_right,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out += format_double(h.bin_edges[b]);
    out.push_back(',');
    out += format_double(h.bin_edges[b + 1]);
    out.push_back(',');
    out += std::to_string(h.counts[b]);
    out.push_back('\n');
  }
  return out;
}

void write_histogram_csv(const std::filesystem::path& path, const Histogram& h) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open for writing: " + path.string());
  const std::string body = histogram_to_csv(h);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw FormatError("write failed: " + path.string());
}

}  // namespace sbe
