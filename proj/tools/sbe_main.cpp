// Command-line frontend: generate synthetic datasets, run a single clustering
// solve, or benchmark repeated seeded trials. Every output file is written
// together with a <file>.manifest.json that records the resolved invocation,
// so any result can be re-derived bit for bit.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbe/data_io.hpp"
#include "sbe/errors.hpp"
#include "sbe/harness.hpp"
#include "sbe/manifest.hpp"
#include "sbe/solvers.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitDivergence = 4;

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw sbe::FormatError("cannot open for writing: " + path.string());
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw sbe::FormatError("write failed: " + path.string());
}

bool looks_like_idx(const std::filesystem::path& path) {
  const std::string name = path.filename().string();
  return path.extension() == ".idx" || name.ends_with("-ubyte") ||
         name.ends_with("idx3-ubyte");
}

// ---- shared flag bundle for cluster/bench ------------------------------------

struct ClusterFlags {
  std::string data_path;
  std::string algo;
  std::size_t k = 0;
  double gamma0 = 0.0;  // 0 = default to K
  double alpha = 0.75;
  double beta = 1.0 / 1.01;
  std::size_t batch_size = 0;
  std::size_t imaxit = 5;
  std::size_t omaxit = 100;
  std::uint64_t seed = 0;
  std::string init = "random";
  bool csv_header = false;
  std::optional<std::size_t> label_column;
};

void add_cluster_flags(CLI::App* cmd, ClusterFlags& f) {
  cmd->add_option("--data", f.data_path, "input dataset (CSV, or IDX image file)")
      ->required();
  cmd->add_option("--algo", f.algo, "algorithm: em|mbem|sbe|be")->required();
  cmd->add_option("--k", f.k, "number of centroids");
  cmd->add_option("--gamma0", f.gamma0, "initial step size (default: K)");
  cmd->add_option("--alpha", f.alpha, "trajectory averaging weight (default 0.75)");
  cmd->add_option("--beta", f.beta, "step decay per outer iteration (default 1/1.01)");
  cmd->add_option("--batch-size", f.batch_size, "mini-batch size M (sbe, mbem)");
  cmd->add_option("--imaxit", f.imaxit, "inner iterations per outer (sbe; default 5)");
  cmd->add_option("--omaxit", f.omaxit, "outer iterations (default 100)");
  cmd->add_option("--seed", f.seed, "RNG seed (default 0)");
  cmd->add_option("--init", f.init, "random | file=PATH (default random)");
  cmd->add_flag("--csv-header", f.csv_header, "skip one CSV header line");
  cmd->add_option("--label-column", f.label_column,
                  "CSV column holding labels; stripped before clustering");
}

sbe::Dataset load_dataset(const ClusterFlags& f) {
  const std::filesystem::path p(f.data_path);
  if (looks_like_idx(p)) return sbe::load_idx(p);
  return sbe::load_csv(p, f.csv_header, f.label_column);
}

std::string fmt_flag(double v) { return sbe::format_double(v); }

// Resolve gamma0/k/init; fills the manifest flag list in a fixed order.
struct ResolvedRun {
  sbe::Algorithm algo;
  sbe::SolverConfig cfg;
  std::optional<sbe::Centroids> init_centroids;  // set for --init file=...
  std::vector<std::pair<std::string, std::string>> manifest_flags;
};

ResolvedRun resolve(const ClusterFlags& f, const sbe::Dataset& data) {
  ResolvedRun r;
  r.algo = sbe::algorithm_from_name(f.algo);

  std::size_t k = f.k;
  if (f.init.rfind("file=", 0) == 0) {
    const std::string path = f.init.substr(5);
    const sbe::Dataset centers = sbe::load_csv(path, false, std::nullopt);
    r.init_centroids = sbe::init_explicit(centers.points());
    if (k == 0) k = r.init_centroids->count();
    if (k != r.init_centroids->count())
      throw sbe::ContractViolation("--k does not match the row count of " + path);
  } else if (f.init != "random") {
    throw sbe::ContractViolation("--init must be 'random' or 'file=PATH'");
  }
  if (k == 0)
    throw sbe::ContractViolation("--k is required unless --init file= provides it");

  r.cfg.k = k;
  r.cfg.gamma0 = f.gamma0 > 0.0 ? f.gamma0 : static_cast<double>(k);
  r.cfg.alpha = f.alpha;
  r.cfg.beta = f.beta;
  r.cfg.batch_size = f.batch_size;
  r.cfg.imaxit = f.imaxit;
  r.cfg.omaxit = f.omaxit;
  r.cfg.seed = f.seed;

  const bool needs_batch = r.algo == sbe::Algorithm::Sbe || r.algo == sbe::Algorithm::MbEm;
  if (needs_batch && r.cfg.batch_size == 0)
    throw sbe::ContractViolation("--batch-size is required for " + f.algo);
  if ((r.algo == sbe::Algorithm::Sbe || r.algo == sbe::Algorithm::Be) &&
      f.gamma0 <= 0.0)
    std::cout << "gamma0 not given; using gamma0 = K = " << r.cfg.gamma0 << "\n";

  r.manifest_flags = {
      {"data", f.data_path},
      {"algo", f.algo},
      {"k", std::to_string(k)},
      {"gamma0", fmt_flag(r.cfg.gamma0)},
      {"alpha", fmt_flag(r.cfg.alpha)},
      {"beta", fmt_flag(r.cfg.beta)},
      {"batch_size", std::to_string(r.cfg.batch_size)},
      {"imaxit", std::to_string(r.cfg.imaxit)},
      {"omaxit", std::to_string(r.cfg.omaxit)},
      {"seed", std::to_string(f.seed)},
      {"init", f.init},
  };
  return r;
}

sbe::SolveTrace dispatch(const sbe::Dataset& data, const ResolvedRun& r) {
  sbe::RngStream rng(r.cfg.seed, 0);
  const sbe::Centroids init = r.init_centroids
                                  ? *r.init_centroids
                                  : sbe::init_random(data, r.cfg.k, rng);
  switch (r.algo) {
    case sbe::Algorithm::Em: return sbe::em_run(data, init, r.cfg.omaxit);
    case sbe::Algorithm::MbEm: return sbe::mbem_run(data, init, r.cfg, rng);
    case sbe::Algorithm::Sbe: return sbe::sbe_run(data, init, r.cfg, rng);
    case sbe::Algorithm::Be: return sbe::be_run(data, init, r.cfg);
  }
  throw sbe::ContractViolation("bad algorithm");
}

// ---- generate ----------------------------------------------------------------

struct GenerateFlags {
  std::string preset;
  std::string spec_path;
  std::string out_path;
  std::string bases_path;
  std::uint64_t seed = 0;
  std::size_t per_center = 7500;
  double sigma = 0.25;
};

sbe::Dataset generate_from_spec_file(const std::string& path, sbe::RngStream& rng) {
  std::ifstream f(path);
  if (!f) throw sbe::FormatError("cannot open: " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw sbe::FormatError(path + ": " + e.what());
  }
  const std::string type = j.value("type", "");
  if (type == "gaussian-mixture") {
    sbe::GaussianMixtureSpec spec;
    for (const auto& comp : j.at("components")) {
      sbe::GaussianComponent c;
      c.mean = comp.at("mean").get<std::vector<double>>();
      const auto& cov = comp.at("covariance");
      c.covariance = sbe::Matrix(c.mean.size(), c.mean.size());
      for (std::size_t i = 0; i < c.mean.size(); ++i)
        for (std::size_t t = 0; t < c.mean.size(); ++t)
          c.covariance.at(i, t) = cov.at(i).at(t).get<double>();
      c.count = comp.at("count").get<std::size_t>();
      spec.components.push_back(std::move(c));
    }
    return sbe::generate_gaussian(spec, rng);
  }
  if (type == "noisy-centroids") {
    sbe::NoisyCentroidSpec spec;
    const auto& rows = j.at("centroids");
    const std::size_t k = rows.size();
    const std::size_t d = rows.at(0).size();
    spec.centroids = sbe::Matrix(k, d);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t t = 0; t < d; ++t)
        spec.centroids.at(i, t) = rows.at(i).at(t).get<double>();
    spec.per_center_count = j.at("per_center_count").get<std::size_t>();
    spec.noise_sigma = j.at("noise_sigma").get<double>();
    return sbe::generate_noisy_centroids(spec, rng);
  }
  throw sbe::FormatError(path +
                         ": unknown spec type '" + type +
                         "' (use gaussian-mixture or noisy-centroids)");
}

int run_generate(const GenerateFlags& g) {
  if (g.preset.empty() == g.spec_path.empty())
    throw sbe::ContractViolation("generate needs exactly one of --preset or --spec");

  sbe::RngStream rng(g.seed, 0);
  std::optional<sbe::Dataset> data;
  if (!g.preset.empty()) {
    if (g.preset == sbe::kPresetGaussian2d) {
      data = sbe::generate_gaussian(sbe::preset_gaussian_2d(), rng);
    } else if (g.preset == sbe::kPresetNoisyMnist) {
      std::optional<sbe::Matrix> bases;
      if (!g.bases_path.empty())
        bases = sbe::load_csv(g.bases_path, false, std::nullopt).points();
      data = sbe::generate_noisy_centroids(
          sbe::preset_noisy_mnist(rng, g.per_center, g.sigma, std::move(bases)), rng);
    } else {
      std::string names;
      for (const auto& n : sbe::preset_names()) names += "\n  " + n;
      throw sbe::ContractViolation("unknown preset '" + g.preset +
                                   "'; available presets:" + names);
    }
  } else {
    data = generate_from_spec_file(g.spec_path, rng);
  }

  const std::string body = sbe::matrix_to_csv(data->points());
  write_text(g.out_path, body);

  sbe::RunManifest manifest;
  manifest.subcommand = "generate";
  manifest.flags = {
      {"preset", g.preset},
      {"spec", g.spec_path},
      {"seed", std::to_string(g.seed)},
      {"out", g.out_path},
      {"bases", g.bases_path},
      {"per_center", std::to_string(g.per_center)},
      {"sigma", sbe::format_double(g.sigma)},
  };
  manifest.seed = g.seed;
  manifest.dataset_fingerprint = sbe::fnv1a64(body.data(), body.size());
  manifest.outputs = {g.out_path};
  manifest.write_for(g.out_path);

  std::cout << "wrote " << data->size() << "x" << data->dim() << " dataset to "
            << g.out_path << "\n";
  return kExitOk;
}

// ---- cluster -----------------------------------------------------------------

struct ClusterOutputs {
  std::string trace_out;
  std::string centroids_out;
};

std::string trace_to_csv(const sbe::SolveTrace& trace) {
  std::string out = "iter,objective\n";
  for (std::size_t i = 0; i < trace.objective_per_outer_iter.size(); ++i) {
    out += std::to_string(i + 1);
    out.push_back(',');
    out += sbe::format_double(trace.objective_per_outer_iter[i]);
    out.push_back('\n');
  }
  return out;
}

int run_cluster(const ClusterFlags& f, const ClusterOutputs& outs) {
  const sbe::Dataset data = load_dataset(f);
  const ResolvedRun r = resolve(f, data);
  const sbe::SolveTrace trace = dispatch(data, r);

  sbe::RunManifest manifest;
  manifest.subcommand = "cluster";
  manifest.flags = r.manifest_flags;
  manifest.flags.emplace_back("trace_out", outs.trace_out);
  manifest.flags.emplace_back("centroids_out", outs.centroids_out);
  manifest.seed = r.cfg.seed;
  manifest.dataset_fingerprint = sbe::fnv1a64_file(f.data_path);
  if (!outs.trace_out.empty()) manifest.outputs.push_back(outs.trace_out);
  if (!outs.centroids_out.empty()) manifest.outputs.push_back(outs.centroids_out);

  if (!outs.trace_out.empty()) {
    write_text(outs.trace_out, trace_to_csv(trace));
    manifest.write_for(outs.trace_out);
  }
  if (!outs.centroids_out.empty()) {
    write_text(outs.centroids_out, sbe::matrix_to_csv(trace.final_centroids.centers()));
    manifest.write_for(outs.centroids_out);
  }

  std::cout << trace.algorithm << ": " << trace.iterations
            << " outer iterations, final objective "
            << sbe::format_double(trace.final_objective) << ", distance evaluations "
            << trace.distance_evaluations << "\n";
  return kExitOk;
}

// ---- bench -------------------------------------------------------------------

struct BenchFlags {
  std::size_t trials = 0;
  std::size_t bins = 30;
  std::size_t threads = 0;
  std::string summary_out;
  std::string hist_out;
  std::string timings_out;
};

int run_bench(const ClusterFlags& f, const BenchFlags& b) {
  const sbe::Dataset data = load_dataset(f);
  const ResolvedRun r = resolve(f, data);
  if (r.init_centroids)
    throw sbe::ContractViolation("bench uses random init per trial; --init file= "
                                 "is only for cluster");

  const sbe::TrialSummary summary =
      sbe::run_trials(data, r.algo, r.cfg, b.trials, f.seed, b.threads);

  sbe::RunManifest manifest;
  manifest.subcommand = "bench";
  manifest.flags = r.manifest_flags;
  manifest.flags.emplace_back("trials", std::to_string(b.trials));
  manifest.flags.emplace_back("bins", std::to_string(b.bins));
  manifest.flags.emplace_back("summary_out", b.summary_out);
  manifest.flags.emplace_back("hist_out", b.hist_out);
  manifest.seed = f.seed;
  manifest.dataset_fingerprint = sbe::fnv1a64_file(f.data_path);
  if (!b.summary_out.empty()) manifest.outputs.push_back(b.summary_out);
  if (!b.hist_out.empty()) manifest.outputs.push_back(b.hist_out);

  if (!b.summary_out.empty()) {
    write_text(b.summary_out, sbe::trial_summary_to_json(summary));
    manifest.write_for(b.summary_out);
  }
  if (!b.hist_out.empty()) {
    std::vector<double> completed;
    for (std::size_t t = 0; t < summary.trials; ++t)
      if (std::find(summary.diverged_trials.begin(), summary.diverged_trials.end(), t) ==
          summary.diverged_trials.end())
        completed.push_back(summary.final_objectives[t]);
    sbe::write_histogram_csv(b.hist_out, sbe::make_histogram(completed, b.bins));
    manifest.write_for(b.hist_out);
  }
  if (!b.timings_out.empty()) {
    // Wall-clock timings are intentionally separate: they differ run to run,
    // while all default outputs are bitwise reproducible.
    write_text(b.timings_out, sbe::trial_summary_to_json(summary, true));
  }

  std::cout << summary.algorithm << " x" << summary.trials
            << " trials: min " << sbe::format_double(summary.stats.min) << ", max "
            << sbe::format_double(summary.stats.max) << ", mean "
            << sbe::format_double(summary.stats.mean) << ", variance "
            << sbe::format_double(summary.stats.variance);
  if (!summary.diverged_trials.empty())
    std::cout << " (" << summary.diverged_trials.size() << " trials diverged)";
  std::cout << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic backward Euler k-means: solvers and benchmark harness"};
  app.require_subcommand(1);

  GenerateFlags gen;
  CLI::App* generate = app.add_subcommand("generate", "write a synthetic dataset CSV");
  generate->add_option("--preset", gen.preset, "built-in preset name");
  generate->add_option("--spec", gen.spec_path, "JSON spec file");
  generate->add_option("--seed", gen.seed, "RNG seed (default 0)");
  generate->add_option("--out", gen.out_path, "output CSV path")->required();
  generate->add_option("--bases", gen.bases_path,
                       "CSV of base centroid rows (noisy-mnist preset)");
  generate->add_option("--per-center", gen.per_center,
                       "points per base centroid (default 7500)");
  generate->add_option("--sigma", gen.sigma, "noise sigma (default 0.25)");

  ClusterFlags cf;
  ClusterOutputs couts;
  CLI::App* cluster = app.add_subcommand("cluster", "run one clustering solve");
  add_cluster_flags(cluster, cf);
  cluster->add_option("--trace-out", couts.trace_out, "objective trace CSV");
  cluster->add_option("--centroids-out", couts.centroids_out, "final centroids CSV");

  ClusterFlags bf;
  BenchFlags bench_flags;
  CLI::App* bench = app.add_subcommand("bench", "repeated seeded trials + summary");
  add_cluster_flags(bench, bf);
  bench->add_option("--trials", bench_flags.trials, "number of trials")->required();
  bench->add_option("--bins", bench_flags.bins, "histogram bins (default 30)");
  bench->add_option("--threads", bench_flags.threads,
                    "worker pool size; 0 = hardware (results identical)")
      ->envname("SBE_THREADS");
  bench->add_option("--summary-out", bench_flags.summary_out, "TrialSummary JSON");
  bench->add_option("--hist-out", bench_flags.hist_out, "histogram CSV");
  bench->add_option("--timings-out", bench_flags.timings_out,
                    "summary JSON including wall times (not reproducible)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*cluster) return run_cluster(cf, couts);
    if (*bench) return run_bench(bf, bench_flags);
    return kExitUsage;
  } catch (const sbe::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const sbe::ContractViolation& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const sbe::FormatError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
