// Acceptance suite: one check per release criterion, each printed as a
// single pass/fail line with its runtime. Run all criteria (default) or a
// subset: sbk_acceptance --cli <sbk-binary> [1 2 5 ...]
//
// Every tolerance and threshold is pinned here; nothing is calibrated at
// run time.

#include <unistd.h>
#include <sys/wait.h>

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "sbk/harness.hpp"
#include "sbk/io.hpp"
#include "sbk/potential.hpp"
#include "sbk/problem.hpp"
#include "sbk/rng.hpp"
#include "sbk/solvers.hpp"
#include "sbk/theory.hpp"

namespace fs = std::filesystem;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace sbk;

namespace {

std::string g_cli;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---- 1: duality suite ------------------------------------------------------

Outcome criterion1() {
  Outcome out;
  Rng rng(0xC1);
  const double h = 1e-6;
  int fd_checked = 0, fy_checked = 0;
  double worst_fd = 0.0, worst_fy = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const double lambda = (s % 3 == 0) ? 0.0 : (s % 3 == 1 ? 0.5 : 2.0);
    const SparsityPotential pot(lambda);
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform_below(8));
    VectorXd y(n);
    bool near_kink = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      y[i] = 6.0 * rng.normal();
      if (std::abs(std::abs(y[i]) - lambda) < 10 * h) near_kink = true;
    }

    const VectorXd st = soft_threshold(y, lambda);
    const double fy =
        std::abs(phi_value(st, pot) + conjugate_value(y, pot) - y.dot(st));
    worst_fy = std::max(worst_fy, fy);
    ++fy_checked;

    if (near_kink) continue;
    for (Eigen::Index i = 0; i < n; ++i) {
      VectorXd yp = y, ym = y;
      yp[i] += h;
      ym[i] -= h;
      const double fd = (conjugate_value(yp, pot) - conjugate_value(ym, pot)) / (2 * h);
      worst_fd = std::max(worst_fd, std::abs(fd - st[i]));
    }
    ++fd_checked;
  }
  out.require(worst_fd <= 1e-5, "finite-difference gradient mismatch " + std::to_string(worst_fd));
  out.require(worst_fy <= 1e-10, "Fenchel-Young gap " + std::to_string(worst_fy));
  out.require(fd_checked >= 900, "too few non-kink samples");
  out.detail = "fd points " + std::to_string(fd_checked) + ", fy points " +
               std::to_string(fy_checked);
  return out;
}

// ---- 2: inequality fuzzing ------------------------------------------------------

Outcome criterion2() {
  Outcome out;
  for (double lambda : {0.0, 0.5, 2.0}) {
    const InequalityReport rep = verify_inequality_chain(10000, lambda, 0xC2);
    out.require(rep.descent_slack <= 1e-9,
                "descent-inequality violation at lambda " + std::to_string(lambda));
    out.require(rep.convexity_chain_slack <= 1e-9,
                "convexity-chain violation at lambda " + std::to_string(lambda));
    out.require(rep.block_cone_slack <= 1e-9, "block-cone violation");
    if (lambda == 0.0)
      out.require(rep.smoothness_slack <= 1e-9, "smooth identities not tight at lambda 0");
  }
  return out;
}

// ---- 3: exact-step oracle --------------------------------------------------

Outcome criterion3() {
  Outcome out;
  Rng rng(0xC3);
  double worst_gap = 0.0;
  int checked = 0;
  for (int s = 0; s < 1000; ++s) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform_below(5));
    const double lambda = (s % 4 == 0) ? 0.0 : (s % 4 == 1 ? 0.5 : (s % 4 == 2 ? 2.0 : 5.0));
    VectorXd xs(n), a(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      xs[i] = 4.0 * rng.normal();
      a[i] = rng.normal();
    }
    if (a.norm() < 1e-3) continue;
    const double beta = 2.0 * rng.normal();
    const auto t = exact_dual_step(xs, a, beta, lambda);
    if (!t) {
      out.require(false, "no finite minimizer on a dense-domain potential");
      continue;
    }
    auto g = [&](double tt) {
      double sq = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double u = xs[i] - tt * a[i];
        const double sv = u > lambda ? u - lambda : (u < -lambda ? u + lambda : 0.0);
        sq += sv * sv;
      }
      return 0.5 * sq + tt * beta;
    };
    const double got = g(*t);
    double grid_min = got;
    for (int k = 0; k < 1000; ++k)
      grid_min = std::min(grid_min, g(*t - 10.0 + 20.0 * k / 999.0));
    worst_gap = std::max(worst_gap, got - grid_min);
    ++checked;
  }
  out.require(worst_gap <= 1e-6, "objective above grid minimum by " + std::to_string(worst_gap));

  double worst_kaczmarz = 0.0;
  for (int s = 0; s < 200; ++s) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_below(5));
    VectorXd xs(n), a(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      xs[i] = 3.0 * rng.normal();
      a[i] = rng.normal();
    }
    if (a.norm() < 0.3) continue;
    const double beta = rng.normal();
    const auto t = exact_dual_step(xs, a, beta, 0.0);
    if (!t) {
      out.require(false, "lambda-0 step missing");
      continue;
    }
    worst_kaczmarz = std::max(worst_kaczmarz, std::abs(*t - (a.dot(xs) - beta) / a.squaredNorm()));
  }
  out.require(worst_kaczmarz <= 1e-10,
              "lambda-0 deviation from classical Kaczmarz " + std::to_string(worst_kaczmarz));
  out.detail = "samples " + std::to_string(checked);
  return out;
}

// ---- 4: jacobian checks ----------------------------------------------------

Outcome criterion4() {
  Outcome out;
  Rng rng(0xC4);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index m = 3 + static_cast<Eigen::Index>(rng.uniform_below(5));
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_below(5));
    const MatrixKind kind = trial % 2 == 0 ? MatrixKind::gaussian : MatrixKind::dct;
    const auto sys = generate_quadratic_system(m, n, 0.5, kind, 0xC400 + trial);
    VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.normal();

    const MatrixXd an = sys.jacobian(x);
    const double h = 1e-6;
    VectorXd xp = x, xm = x;
    for (Eigen::Index j = 0; j < n; ++j) {
      xp[j] = x[j] + h;
      xm[j] = x[j] - h;
      const VectorXd fd = (sys.residual(xp) - sys.residual(xm)) / (2 * h);
      for (Eigen::Index i = 0; i < m; ++i)
        worst = std::max(worst, std::abs(an(i, j) - fd[i]) / (1.0 + std::abs(an(i, j))));
      xp[j] = x[j];
      xm[j] = x[j];
    }

    // a random column block through the block path as well
    std::vector<Eigen::Index> block;
    for (Eigen::Index j = 0; j < n; ++j)
      if (rng.uniform01() < 0.5) block.push_back(j);
    if (block.empty()) block.push_back(0);
    const MatrixXd b = sys.jacobian_columns(block, x);
    for (std::size_t k = 0; k < block.size(); ++k)
      for (Eigen::Index i = 0; i < m; ++i)
        worst = std::max(worst, std::abs(b(i, static_cast<Eigen::Index>(k)) - an(i, block[k])) /
                                    (1.0 + std::abs(an(i, block[k]))));
  }
  out.require(worst <= 1e-5, "gradient mismatch " + std::to_string(worst));
  out.detail = "worst relative error " + std::to_string(worst);
  return out;
}

// ---- 5: method-comparison band at (200, 100) -------------------------------

Outcome criterion5() {
  Outcome out;
  const int trials = 20;
  std::vector<double> scbnb_it, nbk_it;
  int scbnb_wins = 0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = derive_seed(0xC5, {static_cast<std::uint64_t>(t)});
    const auto sys = generate_quadratic_system(200, 100, 0.1, MatrixKind::gaussian, seed);

    SolverConfig nbk;
    nbk.method = Method::nbk;
    nbk.lambda = 2.0;
    nbk.tol = 1e-6;
    nbk.max_iters = 1000;
    nbk.seed = mix_seed(seed, 1);
    const SolveReport rep_nbk = run_solver(sys, nbk);

    SolverConfig scbnb = nbk;
    scbnb.method = Method::scbnb;
    scbnb.delta = 1.4;  // tuned relaxation; q = 25 per the protocol
    scbnb.block_size = 25;
    scbnb.seed = mix_seed(seed, 2);
    const SolveReport rep_scbnb = run_solver(sys, scbnb);

    nbk_it.push_back(rep_nbk.iterations);
    scbnb_it.push_back(rep_scbnb.iterations);
    if (rep_scbnb.iterations < rep_nbk.iterations) ++scbnb_wins;
  }
  const double med = median_of(scbnb_it);
  out.require(med >= 40.0 && med <= 500.0,
              "scbnb median " + std::to_string(med) + " outside [40,500]");
  out.require(scbnb_wins >= 16,
              "scbnb beat nbk in only " + std::to_string(scbnb_wins) + "/20 paired trials");
  out.detail = "scbnb median " + std::to_string(med) + ", nbk median " +
               std::to_string(median_of(nbk_it)) + ", wins " + std::to_string(scbnb_wins) + "/20";
  return out;
}

// ---- 6: scaling behavior at (500, 250) -------------------------------------

Outcome criterion6() {
  Outcome out;
  const int trials = 10;
  const std::vector<Method> row_methods{Method::nbk, Method::rnbk, Method::mrnbk, Method::rmrnbk};
  int converged[5] = {0, 0, 0, 0, 0};
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = derive_seed(0xC6, {static_cast<std::uint64_t>(t)});
    // uniform linear terms reproduce the rand-generated systems behind the
    // anchor table; the scbnb relaxation and block size are tuned for them
    const auto sys = generate_quadratic_system(500, 250, 0.1, MatrixKind::gaussian, seed,
                                               LinTermDist::uniform);
    for (int mi = 0; mi < 5; ++mi) {
      SolverConfig cfg;
      cfg.method = mi < 4 ? row_methods[static_cast<std::size_t>(mi)] : Method::scbnb;
      cfg.lambda = 2.0;
      cfg.tol = 1e-6;
      cfg.max_iters = 1000;
      cfg.delta = 1.9;
      cfg.block_size = 125;
      cfg.seed = derive_seed(seed, {static_cast<std::uint64_t>(mi)});
      const SolveReport rep = run_solver(sys, cfg);
      if (rep.converged) ++converged[mi];
    }
  }
  const char* names[5] = {"nbk", "rnbk", "mrnbk", "rmrnbk", "scbnb"};
  for (int mi = 0; mi < 4; ++mi)
    out.require(trials - converged[mi] >= 7, std::string(names[mi]) + " capped only " +
                                                 std::to_string(trials - converged[mi]) + "/10");
  out.require(converged[4] >= 7, "scbnb converged only " + std::to_string(converged[4]) + "/10");
  std::ostringstream d;
  d << "converged/10:";
  for (int mi = 0; mi < 5; ++mi) d << " " << names[mi] << "=" << converged[mi];
  out.detail = d.str();
  return out;
}

// ---- 7: success-grid monotonicity ------------------------------------------

Outcome criterion7() {
  Outcome out;
  const int m = 100, trials = 25, cap = 3000;
  const std::vector<int> n_values{50, 70, 90, 110, 130, 150};
  const std::vector<double> sp_values{0.05, 0.10, 0.15};
  const std::vector<Method> methods = all_methods();

  // all five methods are scored on the same random instances, one fresh
  // system per (n, sp, trial), from the all-zero start
  std::vector<std::vector<double>> mean(methods.size(), std::vector<double>(3, 0.0));
  for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
    for (std::size_t si = 0; si < sp_values.size(); ++si) {
      for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t seed =
            derive_seed(0xC7, {static_cast<std::uint64_t>(n_values[ni]), seed_bits(sp_values[si]),
                               static_cast<std::uint64_t>(trial)});
        const auto sys = generate_quadratic_system(m, n_values[ni], sp_values[si],
                                                   MatrixKind::gaussian, mix_seed(seed, 11));
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
          SolverConfig cfg;
          cfg.method = methods[mi];
          cfg.lambda = 2.0;
          cfg.tol = 1e-6;
          cfg.max_iters = cap;
          cfg.seed = derive_seed(seed, {13, static_cast<std::uint64_t>(mi)});
          cfg.init = SolverConfig::Init::zero;
          const SolveReport rep = run_solver(sys, cfg);
          if (rep.converged)
            mean[mi][si] += 1.0 / static_cast<double>(trials * n_values.size());
        }
      }
    }
  }

  std::ostringstream d;
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    out.require(mean[mi][0] >= mean[mi][1] - 0.05,
                std::string(method_name(methods[mi])) + " rate rises 0.05->0.10");
    out.require(mean[mi][1] >= mean[mi][2] - 0.05,
                std::string(method_name(methods[mi])) + " rate rises 0.10->0.15");
    d << " " << method_name(methods[mi]) << "=(" << mean[mi][0] << "," << mean[mi][1] << ","
      << mean[mi][2] << ")";
  }
  out.detail = "mean rates by sp:" + d.str();
  return out;
}

// ---- 8: theory constants and the rate certificate ---------------------------

Outcome criterion8() {
  Outcome out;

  TheoryConstants unit;  // sigma_min = sigma_max = 1, eta = 0, tau = M = gamma = delta = 1
  out.require(std::abs(contraction_factor(unit) - 0.5) <= 1e-12, "c(unit) != 0.5");

  out.require(!admissible_eta_interval(1.0, std::sqrt(2.0)).has_value(),
              "eta interval should be empty for sigma^2 ratio 2");
  const auto full = admissible_eta_interval(1.0, 1.0);
  out.require(full.has_value() && *full == 1.0, "equal bounds should give (0,1)");

  // rate certificate: orthonormal sensing (sigma = 1), smooth potential
  // (lambda = 0, M = 1), two column blocks, delta = 1 -> c = 0.25
  const Eigen::Index m = 30, n = 12;
  Rng rng(0xC8);
  MatrixXd g(m, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < m; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<MatrixXd> qr(g);
  const MatrixXd q = qr.householderQ() * MatrixXd::Identity(m, n);
  VectorXd truth(n);
  for (Eigen::Index i = 0; i < n; ++i) truth[i] = rng.normal();
  const LinearSystem sys(q, q * truth, truth, 0.0, 0);

  TheoryConstants consts;
  consts.tau = 2;
  const double c = contraction_factor(consts);
  out.require(std::abs(c - 0.25) <= 1e-12, "c(tau=2) != 0.25");

  const int runs = 50, iters = 25;
  std::vector<double> mean(static_cast<std::size_t>(iters) + 1, 0.0);
  for (int run = 0; run < runs; ++run) {
    SolverConfig cfg;
    cfg.method = Method::scbnb;
    cfg.lambda = 0.0;
    cfg.delta = 1.0;
    cfg.block_size = 6;  // tau = 2
    cfg.tol = 0.0;
    cfg.max_iters = iters;
    cfg.seed = derive_seed(0xC8, {static_cast<std::uint64_t>(run)});
    const SolveReport rep = run_solver(sys, cfg, &truth);
    for (int k = 0; k <= iters; ++k)
      mean[static_cast<std::size_t>(k)] +=
          (*rep.bregman_history)[static_cast<std::size_t>(k)] / runs;
  }
  for (int k = 0; k <= iters; ++k) {
    const double bound = std::pow(1.0 - c, k) * mean[0] * 1.05;
    out.require(mean[static_cast<std::size_t>(k)] <= bound,
                "rate certificate broken at step " + std::to_string(k));
  }
  out.detail =
      "certified c=0.25; D_25/D_0 = " + std::to_string(mean[static_cast<std::size_t>(iters)] / mean[0]);
  return out;
}

// ---- 9: sparse image recovery ----------------------------------------------

Outcome criterion9() {
  Outcome out;
  const int trials = 10;
  int gained_10db = 0, beat_rmrnbk = 0;
  double last_psnr = 0.0, last_initial = 0.0;
  for (int t = 0; t < trials; ++t) {
    RecoverySpec spec;
    spec.image_side = 16;
    spec.m = 400;
    spec.noise_level = 0.01;
    spec.lambda = 1.0;
    spec.iter_budget = 1000;
    spec.methods = {Method::rmrnbk, Method::scbnb};
    spec.params.block_size = 64;  // tuned for the sensing dimensions
    spec.seed = derive_seed(0xC9, {static_cast<std::uint64_t>(t)});
    const RecoveryResult res = run_recovery(spec);
    const double p_rmrnbk = res.per_method[0].psnr;
    const double p_scbnb = res.per_method[1].psnr;
    if (p_scbnb >= res.psnr_initial + 10.0) ++gained_10db;
    if (p_scbnb >= p_rmrnbk) ++beat_rmrnbk;
    last_psnr = p_scbnb;
    last_initial = res.psnr_initial;
  }
  out.require(gained_10db >= 7,
              "scbnb gained 10 dB in only " + std::to_string(gained_10db) + "/10");
  out.require(beat_rmrnbk >= 7,
              "scbnb matched rmrnbk in only " + std::to_string(beat_rmrnbk) + "/10");
  out.detail = "10dB gains " + std::to_string(gained_10db) + "/10, wins vs rmrnbk " +
               std::to_string(beat_rmrnbk) + "/10 (last run: " + std::to_string(last_initial) +
               " -> " + std::to_string(last_psnr) + " dB)";
  return out;
}

// ---- 10: CLI determinism ----------------------------------------------------

int run_cmd(const std::string& cmd) {
  const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string strip_cpu_lines(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream kept;
  std::string line;
  while (std::getline(in, line))
    if (line.find("cpu") == std::string::npos) kept << line << "\n";
  return kept.str();
}

std::string strip_cpu_column(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream kept;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string cell;
    int idx = 0;
    while (std::getline(cells, cell, ',')) {
      if (idx != 5) kept << cell << ",";  // median_cpu is column 5
      ++idx;
    }
    kept << "\n";
  }
  return kept.str();
}

Outcome criterion10() {
  Outcome out;
  if (g_cli.empty()) {
    out.require(false, "no --cli path given");
    return out;
  }
  const fs::path dir = fs::temp_directory_path() / ("sbk_acc10_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto sub = [&](const std::string& s) {
    fs::create_directories(dir / s);
    return (dir / s).string();
  };

  const std::string solve_flags =
      " solve --method scbnb --kind gaussian --m 60 --n 30 --sp 0.1 --q 10 --lambda 2"
      " --delta 1 --tol 1e-6 --max-iters 500 --seed 7 --out ";
  out.require(run_cmd(g_cli + solve_flags + sub("s1")) == 0, "solve run 1 failed");
  out.require(run_cmd(g_cli + solve_flags + sub("s2")) == 0, "solve run 2 failed");
  out.require(read_text_file(dir / "s1" / "report.csv") == read_text_file(dir / "s2" / "report.csv"),
              "report.csv differs");
  out.require(strip_cpu_lines(read_text_file(dir / "s1" / "report.json")) ==
                  strip_cpu_lines(read_text_file(dir / "s2" / "report.json")),
              "report.json differs beyond timing");
  out.require(read_text_file(dir / "s1" / "manifest.json") ==
                  read_text_file(dir / "s2" / "manifest.json"),
              "solve manifest differs");

  const std::string table_flags =
      " table --sizes 30x15,40x20 --sp 0.1,0.2 --trials 2 --max-iters 300 --lambda 2"
      " --methods scbnb,nbk --seed 11 --out ";
  out.require(run_cmd(g_cli + table_flags + sub("t1")) == 0, "table run 1 failed");
  out.require(run_cmd(g_cli + table_flags + sub("t2")) == 0, "table run 2 failed");
  out.require(strip_cpu_column(read_text_file(dir / "t1" / "table.csv")) ==
                  strip_cpu_column(read_text_file(dir / "t2" / "table.csv")),
              "table.csv differs beyond the cpu column");

  const std::string success_flags =
      " success --m 20 --n 10,12 --sp 0.2 --methods scbnb --trials 3 --cap 200 --seed 13 --out ";
  out.require(run_cmd(g_cli + success_flags + sub("u1")) == 0, "success run 1 failed");
  out.require(run_cmd(g_cli + success_flags + sub("u2")) == 0, "success run 2 failed");
  out.require(read_text_file(dir / "u1" / "success.csv") ==
                  read_text_file(dir / "u2" / "success.csv"),
              "success.csv differs");

  const std::string recover_flags =
      " recover --side 8 --m 100 --iters 150 --methods scbnb --seed 5 --out ";
  out.require(run_cmd(g_cli + recover_flags + sub("r1")) == 0, "recover run 1 failed");
  out.require(run_cmd(g_cli + recover_flags + sub("r2")) == 0, "recover run 2 failed");
  out.require(read_text_file(dir / "r1" / "psnr.csv") == read_text_file(dir / "r2" / "psnr.csv"),
              "psnr.csv differs");
  out.require(read_text_file(dir / "r1" / "recovered_scbnb.pgm") ==
                  read_text_file(dir / "r2" / "recovered_scbnb.pgm"),
              "recovered image differs");

  const std::string theory_flags =
      " theory --sigma-min 1 --sigma-max 1 --eta 0 --tau 1 --M 1 --gamma 1 --delta 1"
      " --lambda 2 --fuzz-samples 500 --seed 3 --out ";
  out.require(run_cmd(g_cli + theory_flags + sub("th1")) == 0, "theory run 1 failed");
  out.require(run_cmd(g_cli + theory_flags + sub("th2")) == 0, "theory run 2 failed");
  out.require(read_text_file(dir / "th1" / "theory.json") ==
                  read_text_file(dir / "th2" / "theory.json"),
              "theory.json differs");

  std::error_code ec;
  fs::remove_all(dir, ec);
  return out;
}

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;  // 0: no stated budget
  Outcome (*fn)();
};

const Criterion kCriteria[] = {
    {1, "duality suite", 5.0, criterion1},
    {2, "inequality fuzzing", 10.0, criterion2},
    {3, "exact-step oracle", 0.0, criterion3},
    {4, "jacobian finite-difference checks", 0.0, criterion4},
    {5, "comparison band at 200x100", 120.0, criterion5},
    {6, "scaling behavior at 500x250", 600.0, criterion6},
    {7, "success-grid monotonicity", 900.0, criterion7},
    {8, "theory constants and rate certificate", 0.0, criterion8},
    {9, "sparse image recovery", 300.0, criterion9},
    {10, "cli determinism", 0.0, criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      g_cli = argv[++i];
    } else {
      wanted.push_back(std::atoi(arg.c_str()));
    }
  }

  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.number) == wanted.end())
      continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0.0 && secs >= c.budget_seconds) {
      out.pass = false;
      if (!out.detail.empty()) out.detail += "; ";
      out.detail += "over the " + std::to_string(static_cast<int>(c.budget_seconds)) + " s budget";
    }
    std::printf("[%s] %2d. %s (%.1f s)%s%s\n", out.pass ? "PASS" : "FAIL", c.number, c.name, secs,
                out.detail.empty() ? "" : " -- ", out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
