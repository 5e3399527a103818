// Acceptance suite: one binary, one pass/fail line per criterion.
//
// Every expected value is either derived from an independent oracle computed
// here (naive distance sums, partition enumeration, finite differences) or a
// published reference band. Statistical criteria run on fixed, untuned seeds
// so the suite is deterministic.
//
// Usage: sbe_acceptance --iris PATH --cli PATH --workdir PATH [--only N]

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sbe/data_io.hpp"
#include "sbe/errors.hpp"
#include "sbe/harness.hpp"
#include "sbe/objective.hpp"
#include "sbe/solvers.hpp"

namespace fs = std::filesystem;
using namespace sbe;

namespace {

// ---------------------------------------------------------------------------
// harness plumbing

struct Options {
  fs::path iris;
  fs::path cli;
  fs::path workdir;
  int only = 0;  // 0 = all criteria
};

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void run_criterion(int id, const std::string& title,
                   const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = Clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  std::cout << (out.ok ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << title
            << " (" << std::fixed << std::setprecision(1) << secs << "s)";
  if (!out.detail.empty()) std::cout << " -- " << out.detail;
  std::cout << "\n" << std::defaultfloat;
  if (!out.ok) ++g_failures;
}

// ---------------------------------------------------------------------------
// independent oracles (no shared code with the kernels under test)

double oracle_objective(const Dataset& data, const Matrix& centers) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double* p = data.point(i);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centers.rows; ++j) {
      const double* c = centers.row(j);
      double dist = 0.0;
      for (std::size_t t = 0; t < centers.cols; ++t) {
        const double diff = c[t] - p[t];
        dist += diff * diff;
      }
      best = std::min(best, dist);
    }
    total += best;
  }
  return total / (2.0 * static_cast<double>(data.size()));
}

// smallest best-vs-second-best distance gap over all points
double oracle_margin(const Dataset& data, const Matrix& centers) {
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double* p = data.point(i);
    double best = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centers.rows; ++j) {
      const double* c = centers.row(j);
      double dist = 0.0;
      for (std::size_t t = 0; t < centers.cols; ++t) {
        const double diff = c[t] - p[t];
        dist += diff * diff;
      }
      if (dist < best) {
        second = best;
        best = dist;
      } else if (dist < second) {
        second = dist;
      }
    }
    if (centers.rows > 1) margin = std::min(margin, std::sqrt(second) - std::sqrt(best));
  }
  return margin;
}

Dataset random_instance(std::size_t n, std::size_t d, RngStream& rng, double scale) {
  Matrix m(n, d);
  for (double& v : m.values) v = scale * rng.normal();
  return Dataset(std::move(m), DataSource::Synthetic);
}

// ---------------------------------------------------------------------------
// shared fixtures

Options g_opts;

Dataset load_iris() {
  Dataset iris = load_csv(g_opts.iris, false, 4);
  if (iris.size() != 150 || iris.dim() != 4)
    throw FormatError("iris fixture must be 150 x 4 with a label column");
  return iris;
}

// ---------------------------------------------------------------------------
// criterion 1: Iris reproduction

void criterion1(Outcome& out) {
  const auto t0 = Clock::now();
  const Dataset iris = load_iris();

  // (a) EM mode structure
  SolverConfig em_cfg;
  em_cfg.k = 3;
  em_cfg.gamma0 = 3.0;
  em_cfg.batch_size = 60;
  em_cfg.omaxit = 50;
  const TrialSummary em = run_trials(iris, Algorithm::Em, em_cfg, 100, 1, 2);
  std::size_t good = 0, bad = 0, other = 0;
  for (const double f : em.final_objectives) {
    if (std::abs(f - 0.2628) <= 0.005)
      ++good;
    else if (std::abs(f - 0.4848) <= 0.010)
      ++bad;
    else
      ++other;
  }
  out.require(other == 0, "EM objectives outside both modes: " + std::to_string(other));
  out.require(bad >= 10 && bad <= 50,
              "bad-mode frequency " + std::to_string(bad) + "% not in [10%, 50%]");

  // (b) SBE always near the good minimum, parameters as published
  SolverConfig sbe_cfg;
  sbe_cfg.k = 3;
  sbe_cfg.gamma0 = 3.0;
  sbe_cfg.alpha = 0.75;
  sbe_cfg.beta = 1.0 / 1.01;
  sbe_cfg.batch_size = 60;
  sbe_cfg.imaxit = 40;
  sbe_cfg.omaxit = 10;
  const TrialSummary sbe = run_trials(iris, Algorithm::Sbe, sbe_cfg, 100, 1, 2);
  std::size_t hits = 0;
  for (const double f : sbe.final_objectives)
    if (f <= 0.27) ++hits;
  out.require(hits >= 95, "SBE <= 0.27 in only " + std::to_string(hits) + "/100 trials");

  // Diagnostic, not a gate: the same run with the iteration counts swapped
  // (imaxit=10, omaxit=40). The published text lists both orderings across
  // sections and only this one reproduces 'around 0.264 every time'.
  SolverConfig swapped = sbe_cfg;
  swapped.imaxit = 10;
  swapped.omaxit = 40;
  const TrialSummary alt = run_trials(iris, Algorithm::Sbe, swapped, 100, 1, 2);
  std::size_t alt_hits = 0;
  for (const double f : alt.final_objectives)
    if (f <= 0.27) ++alt_hits;
  std::cout << "  criterion 1 note: literal (imaxit=40,omaxit=10) " << hits
            << "/100 <= 0.27, max " << sbe.stats.max << "; swapped (imaxit=10,omaxit=40) "
            << alt_hits << "/100 <= 0.27, max " << alt.stats.max << "\n";

  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  out.require(secs < 60.0, "runtime " + std::to_string(secs) + "s >= 60s");
}

// ---------------------------------------------------------------------------
// criterion 2: synthetic 2-D escape

void criterion2(Outcome& out) {
  const auto t0 = Clock::now();
  RngStream data_rng(1, 0);
  const Dataset data = generate_gaussian(preset_gaussian_2d(), data_rng);

  const Centroids paper_init = init_explicit(Matrix::from_rows({{-5.5989, -2.7090},
                                                                {-4.4572, -4.0614},
                                                                {-0.1082, 5.2889},
                                                                {2.3485, 3.5286}}));
  const SolveTrace em = em_run(data, paper_init, 50);
  out.require(em.final_objective >= 1.19 && em.final_objective <= 1.49,
              "EM from published init ended at " + std::to_string(em.final_objective) +
                  ", expected within [1.19, 1.49]");

  SolverConfig cfg;
  cfg.k = 4;
  cfg.gamma0 = 4.0;
  cfg.alpha = 0.75;
  cfg.beta = 0.99;
  cfg.batch_size = 1000;
  cfg.imaxit = 10;
  cfg.omaxit = 100;
  cfg.seed = 1;
  const SolveTrace sbe = sbe_run(data, em.final_centroids, cfg);
  out.require(sbe.final_objective <= 1.05,
              "SBE from EM's minimum ended at " + std::to_string(sbe.final_objective) +
                  ", expected <= 1.05");

  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  out.require(secs < 30.0, "runtime " + std::to_string(secs) + "s >= 30s");
}

// ---------------------------------------------------------------------------
// criterion 3: descent inequality for the inner fixed-point iteration

void criterion3(Outcome& out) {
  std::size_t steps = 0, converged_count = 0, violations = 0, residual_fails = 0;
  for (std::uint64_t inst = 0; inst < 1000; ++inst) {
    RngStream rng(9000, inst);
    const std::size_t n = 5 + rng.uniform_below(46);   // <= 50
    const std::size_t d = 1 + rng.uniform_below(5);    // <= 5
    const std::size_t k = 1 + rng.uniform_below(std::min<std::size_t>(4, n));
    const Dataset data = random_instance(n, d, rng, 2.0);
    const Centroids x_k = init_random(data, k, rng);
    const double gamma = 0.9 / lipschitz_estimate(data, x_k);

    std::vector<Matrix> iterates;
    const FixedPointResult r = fixed_point_solve(data, x_k, gamma, 400, 1e-10, &iterates);

    const auto h = [&](const Matrix& y) {
      double dist2 = 0.0;
      for (std::size_t t = 0; t < y.values.size(); ++t) {
        const double diff = y.values[t] - x_k.centers().values[t];
        dist2 += diff * diff;
      }
      return oracle_objective(data, y) + dist2 / (2.0 * gamma);
    };

    for (std::size_t l = 0; l + 1 < iterates.size(); ++l) {
      const double region_l = lipschitz_estimate(data, Centroids(iterates[l]));
      double step2 = 0.0;
      for (std::size_t t = 0; t < iterates[l].values.size(); ++t) {
        const double diff = iterates[l + 1].values[t] - iterates[l].values[t];
        step2 += diff * diff;
      }
      const double bound = h(iterates[l]) - (0.5 / gamma - 0.5 * region_l) * step2;
      if (!(h(iterates[l + 1]) <= bound + 1e-12)) ++violations;
      ++steps;
    }

    if (r.converged) {
      ++converged_count;
      // independent recomputation of the fixed-point certificate
      const GradientBlock g = full_gradient(data, r.y_star);
      double res2 = 0.0;
      for (std::size_t t = 0; t < g.values.size(); ++t) {
        const double diff = r.y_star.centers().values[t] -
                            (x_k.centers().values[t] - gamma * g.values[t]);
        res2 += diff * diff;
      }
      if (!(std::sqrt(res2) <= 1e-10)) ++residual_fails;
    }
  }
  out.require(violations == 0,
              std::to_string(violations) + " descent violations over " +
                  std::to_string(steps) + " inner steps");
  out.require(residual_fails == 0,
              std::to_string(residual_fails) + " converged results with residual > 1e-10");
  out.require(steps >= 1000, "too few inner steps exercised");
  out.detail = std::to_string(steps) + " steps, " + std::to_string(converged_count) +
               "/1000 converged" + (out.detail.empty() ? "" : "; " + out.detail);
}

// ---------------------------------------------------------------------------
// criterion 4: PPA monotone descent

void criterion4(Outcome& out) {
  std::size_t calls = 0, increases = 0;
  for (std::uint64_t inst = 0; inst < 20; ++inst) {
    RngStream rng(9500, inst);
    const std::size_t n = 10 + rng.uniform_below(31);
    const std::size_t d = 1 + rng.uniform_below(4);
    const std::size_t k = 2 + rng.uniform_below(3);
    const Dataset data = random_instance(n, d, rng, 3.0);
    Centroids x = init_random(data, k, rng);
    double prev = objective(data, x);
    for (int step = 0; step < 10; ++step) {
      const double gamma = 0.9 / lipschitz_estimate(data, x);
      const FixedPointResult r = be_prox_step(data, x, gamma);
      const double now = objective(data, r.y_star);
      ++calls;
      if (!(now <= prev + 1e-12)) ++increases;
      x = r.y_star;
      prev = now;
    }
  }
  out.require(calls == 200, "expected 200 prox steps, ran " + std::to_string(calls));
  out.require(increases == 0, std::to_string(increases) + " objective increases");
}

// ---------------------------------------------------------------------------
// criterion 5: gradient correctness

void criterion5(Outcome& out) {
  // (a) central finite differences at off-boundary points
  const double h = 1e-6;
  std::size_t accepted = 0, fd_failures = 0;
  for (std::uint64_t trial = 0; accepted < 500 && trial < 5000; ++trial) {
    RngStream rng(7000, trial);
    const std::size_t n = 5 + rng.uniform_below(26);
    const std::size_t d = 1 + rng.uniform_below(4);
    const std::size_t k = 2 + rng.uniform_below(3);
    if (k > n) continue;
    const Dataset data = random_instance(n, d, rng, 2.0);
    const Centroids c = init_random(data, k, rng);
    if (oracle_margin(data, c.centers()) <= 1e-3) continue;

    const GradientBlock g = full_gradient(data, c);
    const double gnorm = frobenius_norm(g);
    if (gnorm < 1e-2) continue;  // relative error needs a scale
    ++accepted;

    Matrix probe = c.centers();
    double err2 = 0.0;
    for (std::size_t t = 0; t < probe.values.size(); ++t) {
      const double saved = probe.values[t];
      probe.values[t] = saved + h;
      const double up = oracle_objective(data, probe);
      probe.values[t] = saved - h;
      const double down = oracle_objective(data, probe);
      probe.values[t] = saved;
      const double diff = (up - down) / (2.0 * h) - g.values[t];
      err2 += diff * diff;
    }
    if (!(std::sqrt(err2) / gnorm < 1e-5)) ++fd_failures;
  }
  out.require(accepted == 500, "only " + std::to_string(accepted) + " points accepted");
  out.require(fd_failures == 0,
              std::to_string(fd_failures) + "/500 finite-difference mismatches");

  // (b) enumeration: the batch average equals the full gradient exactly on
  // integer-valued instances whose batch sizes divide without rounding
  const auto enumerate_equal = [](const Dataset& data, const Centroids& c,
                                  std::size_t m) {
    const std::size_t n = data.size();
    std::vector<std::size_t> pick(m);
    std::iota(pick.begin(), pick.end(), 0);
    Matrix sum(c.count(), c.dim(), 0.0);
    std::size_t batches = 0;
    for (;;) {
      const GradientBlock g = minibatch_gradient(data, c, MiniBatch{pick});
      for (std::size_t t = 0; t < sum.values.size(); ++t) sum.values[t] += g.values[t];
      ++batches;
      std::size_t i = m;
      while (i > 0 && pick[i - 1] == n - m + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < m; ++j) pick[j] = pick[j - 1] + 1;
    }
    for (double& v : sum.values) v /= static_cast<double>(batches);
    return sum == full_gradient(data, c);
  };

  Matrix pts(8, 1);
  for (std::size_t i = 0; i < 8; ++i)
    pts.at(i, 0) = static_cast<double>(std::array<int, 8>{0, 2, 3, 7, 10, 12, 13, 21}[i]);
  const Dataset d8(std::move(pts), DataSource::Synthetic);
  const Centroids c8 = init_explicit(Matrix::from_rows({{1}, {12}, {20}}));
  for (const std::size_t m : {1ul, 2ul, 4ul})
    out.require(enumerate_equal(d8, c8, m),
                "batch-average mismatch at M=" + std::to_string(m));
}

// ---------------------------------------------------------------------------
// criterion 6: brute-force global optimum vs multi-restart EM

void criterion6(Outcome& out) {
  std::size_t mismatches = 0;
  for (std::uint64_t inst = 0; inst < 50; ++inst) {
    RngStream rng(6000, inst);
    const std::size_t n = 4 + rng.uniform_below(7);  // <= 10
    const std::size_t d = 1 + rng.uniform_below(2);  // <= 2
    const Dataset data = random_instance(n, d, rng, 2.0);

    // enumerate every 2-partition; evaluate phi at the partition means
    double best = std::numeric_limits<double>::infinity();
    const std::size_t masks = static_cast<std::size_t>(1) << (n - 1);
    std::vector<double> mean_a(d), mean_b(d);
    for (std::size_t mask = 0; mask + 1 < masks; ++mask) {
      // point 0 always in side A; mask bits place points 1..n-1
      std::fill(mean_a.begin(), mean_a.end(), 0.0);
      std::fill(mean_b.begin(), mean_b.end(), 0.0);
      std::size_t na = 0, nb = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const bool in_a = (i == 0) || !((mask >> (i - 1)) & 1);
        double* acc = in_a ? mean_a.data() : mean_b.data();
        (in_a ? na : nb) += 1;
        for (std::size_t t = 0; t < d; ++t) acc[t] += data.point(i)[t];
      }
      if (nb == 0) continue;
      Matrix centers(2, d);
      for (std::size_t t = 0; t < d; ++t) {
        centers.at(0, t) = mean_a[t] / static_cast<double>(na);
        centers.at(1, t) = mean_b[t] / static_cast<double>(nb);
      }
      best = std::min(best, oracle_objective(data, centers));
    }

    double best_em = std::numeric_limits<double>::infinity();
    for (std::uint64_t restart = 0; restart < 50; ++restart) {
      RngStream r2(6000 + inst, 1000 + restart);
      const Centroids init = init_random(data, 2, r2);
      best_em = std::min(best_em, em_run(data, init, 100).final_objective);
    }
    if (!(std::abs(best_em - best) <= 1e-9)) ++mismatches;
  }
  out.require(mismatches == 0,
              std::to_string(mismatches) + "/50 instances where EM missed the optimum");

  // the 4-point instance has global optimum exactly 0.5
  Matrix four(4, 1);
  four.at(0, 0) = 0;
  four.at(1, 0) = 2;
  four.at(2, 0) = 10;
  four.at(3, 0) = 12;
  const Dataset data4(std::move(four), DataSource::Synthetic);
  double best4 = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 0; mask < 7; ++mask) {
    double ma = 0, mb = 0;
    std::size_t na = 0, nb = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      const bool in_a = (i == 0) || !((mask >> (i - 1)) & 1);
      (in_a ? ma : mb) += data4.point(i)[0];
      (in_a ? na : nb) += 1;
    }
    if (nb == 0) continue;
    Matrix centers(2, 1);
    centers.at(0, 0) = ma / static_cast<double>(na);
    centers.at(1, 0) = mb / static_cast<double>(nb);
    best4 = std::min(best4, oracle_objective(data4, centers));
  }
  out.require(best4 == 0.5, "4-point enumeration gave " + std::to_string(best4));
}

// ---------------------------------------------------------------------------
// criterion 7: variance ordering on the desk-scale stand-in

void criterion7(Outcome& out) {
  const auto t0 = Clock::now();
  std::size_t wins = 0;
  std::ostringstream log;
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    RngStream rng(100 + rep, 0);
    const NoisyCentroidSpec spec = preset_noisy_mnist(rng, 750, 0.25);
    const Dataset data = generate_noisy_centroids(spec, rng);

    SolverConfig cfg;
    cfg.k = 8;
    cfg.gamma0 = 8.0;
    cfg.alpha = 0.75;
    cfg.beta = 1.0 / 1.01;
    cfg.batch_size = 500;
    cfg.imaxit = 5;
    cfg.omaxit = 100;

    const TrialSummary sbe = run_trials(data, Algorithm::Sbe, cfg, 10, 10000 + rep, 2);
    const TrialSummary mbem = run_trials(data, Algorithm::MbEm, cfg, 10, 20000 + rep, 2);
    const bool win = sbe.stats.variance < mbem.stats.variance &&
                     sbe.stats.mean <= mbem.stats.mean;
    wins += win;
    log << (win ? "" : " rep") << (win ? "" : std::to_string(rep));
  }
  out.require(wins >= 9, "ordering held in only " + std::to_string(wins) +
                             "/10 repetitions" + log.str());
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  out.require(secs < 600.0, "runtime " + std::to_string(secs) + "s >= 600s");
  if (out.ok) out.detail = std::to_string(wins) + "/10 repetitions";
}

// ---------------------------------------------------------------------------
// criterion 8: cost accounting at the 60000 x 784 scale

void criterion8(Outcome& out) {
  RngStream rng(1, 0);
  const Matrix bases = synthetic_digit_bases(10, 784, rng);
  const Dataset data = generate_noisy_centroids({bases, 6000, 0.25}, rng);

  const TraceOptions quiet{/*record_objective=*/false};
  RngStream init_rng(2, 0);
  const Centroids init = init_random(data, 10, init_rng);

  const SolveTrace em = em_run(data, init, 3, -1.0, quiet);  // exactly 3 iterations

  SolverConfig cfg;
  cfg.k = 10;
  cfg.gamma0 = 10.0;
  cfg.batch_size = 500;
  cfg.imaxit = 5;
  cfg.omaxit = 3;
  cfg.seed = 3;
  RngStream sbe_rng(3, 0);
  const SolveTrace sbe = sbe_run(data, init, cfg, sbe_rng, quiet);

  SolverConfig mcfg = cfg;
  mcfg.omaxit = 3;
  RngStream mbem_rng(4, 0);
  const SolveTrace mbem = mbem_run(data, init, mcfg, mbem_rng, quiet);

  const CostReport report = compare_cost({em, sbe, mbem});
  const double em_per = report.rows[0].distance_evaluations_per_iter;
  const double sbe_per = report.rows[1].distance_evaluations_per_iter;
  const double mbem_per = report.rows[2].distance_evaluations_per_iter;

  // N*K / (imaxit*M*K) = 600000 / 25000: exactly 24
  out.require(em_per == 600000.0, "EM per-iter evals " + std::to_string(em_per));
  out.require(sbe_per == 25000.0, "SBE per-iter evals " + std::to_string(sbe_per));
  out.require(em_per / sbe_per == 24.0, "EM:SBE ratio not exactly 24");
  out.require(sbe_per / mbem_per == 5.0, "SBE:mb-EM ratio not exactly imaxit");

  const double wall_ratio =
      report.rows[0].mean_seconds_per_iter / report.rows[1].mean_seconds_per_iter;
  out.require(wall_ratio > 5.0,
              "wall-time ratio " + std::to_string(wall_ratio) + " not > 5");
  if (out.ok) {
    std::ostringstream d;
    d << "distance ratio 24:1 exact, wall ratio " << std::setprecision(3) << wall_ratio
      << ":1";
    out.detail = d.str();
  }
}

// ---------------------------------------------------------------------------
// criterion 9: CLI determinism, including across thread counts

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const std::string cmd = g_opts.cli.string() + " " + args + " >/dev/null 2>&1";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

void criterion9(Outcome& out) {
  const fs::path w = g_opts.workdir;
  fs::remove_all(w);
  fs::create_directories(w);
  const std::string iris = g_opts.iris.string();

  // generate twice: dataset and manifest byte-identical
  out.require(cli("generate --preset paper-sec3.1-gaussian --seed 7 --out " +
                  (w / "gen_a.csv").string()) == 0,
              "generate run 1 failed");
  out.require(cli("generate --preset paper-sec3.1-gaussian --seed 7 --out " +
                  (w / "gen_b.csv").string()) == 0,
              "generate run 2 failed");
  out.require(slurp(w / "gen_a.csv") == slurp(w / "gen_b.csv"),
              "generated datasets differ");
  const std::string man_a = slurp(w / "gen_a.csv.manifest.json");
  std::string man_b = slurp(w / "gen_b.csv.manifest.json");
  // manifests differ only in the output path they record
  const auto fix = [](std::string s, const std::string& from, const std::string& to) {
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos;
         pos += to.size())
      s.replace(pos, from.size(), to);
    return s;
  };
  out.require(man_a == fix(man_b, "gen_b.csv", "gen_a.csv"),
              "generate manifests differ beyond the output name");

  // cluster twice with identical flags
  const std::string cluster_cmd =
      "cluster --data " + iris +
      " --label-column 4 --algo sbe --k 3 --gamma0 3 --batch-size 60 --imaxit 10 "
      "--omaxit 40 --seed 11";
  out.require(cli(cluster_cmd + " --centroids-out " + (w / "c_a.csv").string() +
                  " --trace-out " + (w / "t_a.csv").string()) == 0,
              "cluster run 1 failed");
  out.require(cli(cluster_cmd + " --centroids-out " + (w / "c_b.csv").string() +
                  " --trace-out " + (w / "t_b.csv").string()) == 0,
              "cluster run 2 failed");
  out.require(slurp(w / "c_a.csv") == slurp(w / "c_b.csv"), "centroids differ");
  out.require(slurp(w / "t_a.csv") == slurp(w / "t_b.csv"), "traces differ");

  // bench under different thread counts
  const std::string bench_cmd =
      "bench --data " + iris +
      " --label-column 4 --algo sbe --k 3 --gamma0 3 --batch-size 60 --imaxit 10 "
      "--omaxit 40 --seed 2 --trials 20 --bins 12";
  out.require(cli(bench_cmd + " --threads 1 --summary-out " + (w / "s1.json").string() +
                  " --hist-out " + (w / "h1.csv").string()) == 0,
              "bench run 1 failed");
  out.require(cli(bench_cmd + " --threads 3 --summary-out " + (w / "s2.json").string() +
                  " --hist-out " + (w / "h2.csv").string()) == 0,
              "bench run 2 failed");
  out.require(slurp(w / "s1.json") == slurp(w / "s2.json"),
              "bench summaries differ across thread counts");
  out.require(slurp(w / "h1.csv") == slurp(w / "h2.csv"),
              "bench histograms differ across thread counts");

  // environment variable override behaves like --threads
  const std::string env_cmd = "SBE_THREADS=2 " + g_opts.cli.string() + " " + bench_cmd +
                              " --summary-out " + (w / "s3.json").string() +
                              " >/dev/null 2>&1";
  out.require(WEXITSTATUS(std::system(env_cmd.c_str())) == 0, "SBE_THREADS run failed");
  out.require(slurp(w / "s3.json") == slurp(w / "s1.json"),
              "SBE_THREADS run differs from --threads run");
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--iris")
      g_opts.iris = argv[i + 1];
    else if (flag == "--cli")
      g_opts.cli = argv[i + 1];
    else if (flag == "--workdir")
      g_opts.workdir = argv[i + 1];
    else if (flag == "--only")
      g_opts.only = std::atoi(argv[i + 1]);
    else {
      std::cerr << "unknown flag " << flag << "\n";
      return 2;
    }
  }
  if (g_opts.iris.empty() || g_opts.cli.empty() || g_opts.workdir.empty()) {
    std::cerr << "usage: sbe_acceptance --iris PATH --cli PATH --workdir PATH [--only N]\n";
    return 2;
  }

  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"Iris reproduction: EM modes and SBE reliability", criterion1},
      {"synthetic 2-D local-minimum escape", criterion2},
      {"fixed-point descent inequality on 1000 random instances", criterion3},
      {"proximal-point monotone descent over 200 steps", criterion4},
      {"gradient vs finite differences and batch enumeration", criterion5},
      {"brute-force global optimum matches multi-restart EM", criterion6},
      {"variance ordering: SBE vs mini-batch EM at equal budget", criterion7},
      {"distance-evaluation and wall-time cost accounting", criterion8},
      {"CLI reproducibility across reruns and thread counts", criterion9},
  };

  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (g_opts.only != 0 && g_opts.only != id) continue;
    run_criterion(id, criteria[i].first, criteria[i].second);
  }

  if (g_failures == 0) {
    std::cout << "acceptance: all criteria passed\n";
  } else {
    std::cout << "acceptance: " << g_failures << " criterion(s) failed\n";
  }
  return g_failures == 0 ? 0 : 1;
}
