// sbk: command-line front end for the sparse Bregman-Kaczmarz solver library.
//
// Subcommands: solve, table, success, recover, theory, rerun. Every run
// writes a manifest.json next to its outputs; `sbk rerun manifest.json`
// reproduces the outputs exactly (timing fields aside). Exit codes: 0 on
// success (solve: converged), 1 on usage or input errors, 2 when solve
// stopped at the iteration cap.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
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
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  const auto add_range = [&](const std::string& token) {
    const auto c1 = token.find(':');
    if (c1 == std::string::npos) {
      out.push_back(std::stod(token));
      return;
    }
    const auto c2 = token.find(':', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument("range must be first:step:last");
    const double first = std::stod(token.substr(0, c1));
    const double step = std::stod(token.substr(c1 + 1, c2 - c1 - 1));
    const double last = std::stod(token.substr(c2 + 1));
    if (step <= 0.0 || last < first) throw std::invalid_argument("bad range: " + token);
    const auto count = static_cast<long>(std::floor((last - first) / step + 1e-9)) + 1;
    for (long k = 0; k < count; ++k) {
      double v = first + static_cast<double>(k) * step;
      if (std::abs(v - last) <= 1e-12 * std::max(1.0, std::abs(last))) v = last;
      out.push_back(v);
    }
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!token.empty()) add_range(token);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + text);
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  const auto add_range = [&](const std::string& token) {
    const auto c1 = token.find(':');
    if (c1 == std::string::npos) {
      out.push_back(std::stoi(token));
      return;
    }
    const auto c2 = token.find(':', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument("range must be first:step:last");
    const int first = std::stoi(token.substr(0, c1));
    const int step = std::stoi(token.substr(c1 + 1, c2 - c1 - 1));
    const int last = std::stoi(token.substr(c2 + 1));
    if (step <= 0 || last < first) throw std::invalid_argument("bad range: " + token);
    for (int v = first; v <= last; v += step) out.push_back(v);
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!token.empty()) add_range(token);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + text);
  return out;
}

std::vector<std::pair<int, int>> parse_sizes(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!token.empty()) {
      const auto x = token.find('x');
      if (x == std::string::npos) throw std::invalid_argument("sizes must look like 200x100");
      out.emplace_back(std::stoi(token.substr(0, x)), std::stoi(token.substr(x + 1)));
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty size list");
  return out;
}

std::vector<sbk::Method> parse_methods(const std::string& text) {
  std::vector<sbk::Method> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!token.empty()) {
      const auto m = sbk::parse_method(token);
      if (!m) throw std::invalid_argument("unknown method: " + token);
      out.push_back(*m);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty method list");
  return out;
}

sbk::MatrixKind parse_kind(const std::string& text) {
  if (text == "gaussian") return sbk::MatrixKind::gaussian;
  if (text == "dct") return sbk::MatrixKind::dct;
  throw std::invalid_argument("unknown matrix kind: " + text);
}

fs::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("SBK_OUT_DIR"); env && *env) return env;
  return ".";
}

void write_manifest(const fs::path& out_dir, const std::string& subcommand,
                    const ordered_json& params, const std::vector<std::string>& outputs) {
  ordered_json manifest;
  manifest["tool"] = "sbk";
  manifest["version"] = kVersion;
  manifest["subcommand"] = subcommand;
  manifest["params"] = params;
  manifest["outputs"] = outputs;
  sbk::write_text_file((out_dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

// ---- solve ----------------------------------------------------------------

int run_solve(const ordered_json& p, const fs::path& out_dir) {
  std::optional<sbk::StoredProblem> problem;
  if (p.contains("load_problem")) {
    problem = sbk::load_problem(p["load_problem"].get<std::string>());
  } else {
    problem = sbk::generate_quadratic_system(
        p["m"].get<int>(), p["n"].get<int>(), p["sp"].get<double>(),
        parse_kind(p["kind"].get<std::string>()), p["seed"].get<std::uint64_t>(),
        p["lin_dist"].get<std::string>() == "uniform" ? sbk::LinTermDist::uniform
                                                      : sbk::LinTermDist::normal);
  }
  const sbk::SystemView& view = sbk::problem_view(*problem);

  sbk::SolverConfig cfg;
  const auto method = sbk::parse_method(p["method"].get<std::string>());
  if (!method) throw std::invalid_argument("unknown method");
  cfg.method = *method;
  cfg.delta = p["delta"].get<double>();
  cfg.gamma = p["gamma"].get<double>();
  cfg.block_size = p["q"].get<Eigen::Index>();
  cfg.lambda = p["lambda"].get<double>();
  cfg.tol = p["tol"].get<double>();
  cfg.max_iters = p["max_iters"].get<int>();
  cfg.seed = sbk::mix_seed(p["seed"].get<std::uint64_t>(), 0x501fe);
  cfg.init = p["init"].get<std::string>() == "zero" ? sbk::SolverConfig::Init::zero
                                                    : sbk::SolverConfig::Init::standard_normal;

  const Eigen::VectorXd* truth =
      p["bregman"].get<bool>() ? &sbk::problem_ground_truth(*problem) : nullptr;
  const sbk::SolveReport report = sbk::run_solver(view, cfg, truth);

  if (p.contains("save_problem"))
    sbk::save_problem(p["save_problem"].get<std::string>(), *problem);

  sbk::write_report_csv((out_dir / "report.csv").string(), report);
  sbk::write_text_file((out_dir / "report.json").string(),
                       sbk::report_json(report, cfg, view.rows(), view.cols()).dump(2) + "\n");
  write_manifest(out_dir, "solve", p, {"report.csv", "report.json"});
  return report.converged ? 0 : 2;
}

// ---- table ----------------------------------------------------------------

int run_table(const ordered_json& p, const fs::path& out_dir) {
  sbk::ComparisonSpec spec;
  spec.sizes = parse_sizes(p["sizes"].get<std::string>());
  spec.sparsities = parse_double_list(p["sp"].get<std::string>());
  spec.kind = parse_kind(p["kind"].get<std::string>());
  spec.methods = parse_methods(p["methods"].get<std::string>());
  spec.params.delta = p["delta"].get<double>();
  spec.params.gamma = p["gamma"].get<double>();
  spec.params.block_size = p["q"].get<Eigen::Index>();
  spec.params.lambda = p["lambda"].get<double>();
  spec.tol = p["tol"].get<double>();
  spec.max_iters = p["max_iters"].get<int>();
  spec.trials = p["trials"].get<int>();
  spec.base_seed = p["seed"].get<std::uint64_t>();
  spec.jobs = p["jobs"].get<int>();

  const auto rows = sbk::run_comparison(spec);
  std::vector<std::string> outputs;
  if (p["format"].get<std::string>() == "json") {
    sbk::write_text_file((out_dir / "table.json").string(),
                         sbk::comparison_json(rows).dump(2) + "\n");
    outputs = {"table.json"};
  } else {
    sbk::write_comparison_csv((out_dir / "table.csv").string(), rows);
    outputs = {"table.csv"};
  }
  write_manifest(out_dir, "table", p, outputs);
  return 0;
}

// ---- success ----------------------------------------------------------------

int run_success(const ordered_json& p, const fs::path& out_dir) {
  sbk::SuccessRateSpec spec;
  spec.m = p["m"].get<int>();
  spec.n_values = parse_int_list(p["n"].get<std::string>());
  spec.sp_values = parse_double_list(p["sp"].get<std::string>());
  spec.kind = parse_kind(p["kind"].get<std::string>());
  spec.methods = parse_methods(p["methods"].get<std::string>());
  spec.params.delta = p["delta"].get<double>();
  spec.params.gamma = p["gamma"].get<double>();
  spec.params.block_size = p["q"].get<Eigen::Index>();
  spec.params.lambda = p["lambda"].get<double>();
  spec.trials = p["trials"].get<int>();
  spec.iter_cap = p["cap"].get<int>();
  spec.tol = p["tol"].get<double>();
  spec.base_seed = p["seed"].get<std::uint64_t>();
  spec.jobs = p["jobs"].get<int>();

  const auto cells = sbk::run_success_grid(spec);
  std::vector<std::string> outputs;
  if (p["format"].get<std::string>() == "json") {
    sbk::write_text_file((out_dir / "success.json").string(),
                         sbk::success_json(cells).dump(2) + "\n");
    outputs = {"success.json"};
  } else {
    sbk::write_success_csv((out_dir / "success.csv").string(), cells);
    outputs = {"success.csv"};
  }
  write_manifest(out_dir, "success", p, outputs);
  return 0;
}

// ---- recover ----------------------------------------------------------------

int run_recover(const ordered_json& p, const fs::path& out_dir) {
  sbk::RecoverySpec spec;
  if (p.contains("image")) {
    spec.source = sbk::RecoverySpec::Source::file;
    spec.image_path = p["image"].get<std::string>();
  } else {
    spec.source = sbk::RecoverySpec::Source::synthetic;
    spec.image_side = p["side"].get<int>();
  }
  spec.m = p["m"].get<int>();
  spec.noise_level = p["noise"].get<double>();
  spec.lambda = p["lambda"].get<double>();
  spec.iter_budget = p["iters"].get<int>();
  spec.methods = parse_methods(p["methods"].get<std::string>());
  spec.params.delta = p["delta"].get<double>();
  spec.params.gamma = p["gamma"].get<double>();
  spec.params.block_size = p["q"].get<Eigen::Index>();
  spec.seed = p["seed"].get<std::uint64_t>();

  const sbk::RecoveryResult result = sbk::run_recovery(spec);

  std::vector<std::string> outputs;
  sbk::write_pgm((out_dir / "truth.pgm").string(), result.truth);
  outputs.push_back("truth.pgm");

  std::ostringstream psnr_csv;
  psnr_csv << "method,psnr_db,psnr_initial_db\n";
  for (const auto& per : result.per_method) {
    const std::string name = sbk::method_name(per.method);
    sbk::write_pgm((out_dir / ("recovered_" + name + ".pgm")).string(), per.recovered);
    outputs.push_back("recovered_" + name + ".pgm");
    std::ostringstream curve;
    curve << "iteration,relative_residual\n";
    for (std::size_t k = 0; k < per.residual_curve.size(); ++k)
      curve << k << "," << sbk::format_double(per.residual_curve[k]) << "\n";
    sbk::write_text_file((out_dir / ("curve_" + name + ".csv")).string(), curve.str());
    outputs.push_back("curve_" + name + ".csv");
    psnr_csv << name << "," << sbk::format_double(per.psnr) << ","
             << sbk::format_double(result.psnr_initial) << "\n";
  }
  sbk::write_text_file((out_dir / "psnr.csv").string(), psnr_csv.str());
  outputs.push_back("psnr.csv");
  write_manifest(out_dir, "recover", p, outputs);
  return 0;
}

// ---- theory ----------------------------------------------------------------

int run_theory(const ordered_json& p, const fs::path& out_dir) {
  ordered_json out;
  out["inputs"] = p;

  double sigma_min, sigma_max;
  if (p.contains("sigma_min") && p.contains("sigma_max")) {
    sigma_min = p["sigma_min"].get<double>();
    sigma_max = p["sigma_max"].get<double>();
  } else if (p.contains("m") && p.contains("n")) {
    const auto sys = sbk::generate_quadratic_system(
        p["m"].get<int>(), p["n"].get<int>(), p["sp"].get<double>(),
        parse_kind(p["kind"].get<std::string>()), p["seed"].get<std::uint64_t>());
    const int probes = p["probes"].get<int>();
    const double radius = p["probe_radius"].get<double>();
    sbk::Rng rng(sbk::mix_seed(p["seed"].get<std::uint64_t>(), 0x9e0));
    std::vector<Eigen::VectorXd> points;
    for (int k = 0; k < probes; ++k) {
      Eigen::VectorXd x = sys.ground_truth();
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += radius * rng.normal();
      points.push_back(std::move(x));
    }
    std::tie(sigma_min, sigma_max) = sbk::estimate_spectral_bounds(sys, points);
    out["spectral_estimate"] = {{"sigma_min", sigma_min}, {"sigma_max", sigma_max},
                                {"probes", probes}, {"probe_radius", radius}};
  } else {
    throw std::invalid_argument("theory: give --sigma-min/--sigma-max or a problem (--m --n)");
  }

  sbk::TheoryConstants consts;
  consts.sigma_min = sigma_min;
  consts.sigma_max = sigma_max;
  consts.eta = p["eta"].get<double>();
  consts.tau = p["tau"].get<int>();
  consts.m_smooth = p["M"].get<double>();
  consts.gamma = p["gamma"].get<double>();
  consts.delta = p["delta"].get<double>();

  const auto eta_upper = sbk::admissible_eta_interval(sigma_min, sigma_max);
  const double q_cap = sbk::step_upper_bound_Q(consts);
  const double c = sbk::contraction_factor(consts);
  const double lambda = p["lambda"].get<double>();

  ordered_json derived;
  derived["a"] = consts.a();
  derived["b"] = consts.b();
  derived["eta_admissible"] = eta_upper.has_value() && consts.eta < *eta_upper;
  derived["eta_upper"] = eta_upper ? ordered_json(*eta_upper) : ordered_json(nullptr);
  derived["Q"] = q_cap;
  derived["delta_cap"] = std::min(2.0, q_cap);
  derived["c"] = c;
  derived["c_in_range"] = c > 0.0 && c < 1.0;
  // M is a formal stand-in when the potential is nonsmooth (lambda > 0)
  derived["c_formal"] = lambda > 0.0;
  out["derived"] = derived;

  const auto fuzz =
      sbk::verify_inequality_chain(p["fuzz_samples"].get<int>(), lambda,
                              sbk::mix_seed(p["seed"].get<std::uint64_t>(), 0xf22));
  out["inequality_fuzz"] = {{"samples", fuzz.samples},
                       {"lambda", lambda},
                       {"descent_slack", fuzz.descent_slack},
                       {"block_cone_slack", fuzz.block_cone_slack},
                       {"convexity_chain_slack", fuzz.convexity_chain_slack},
                       {"smoothness_slack", fuzz.smoothness_slack},
                       {"pass", fuzz.pass}};

  sbk::write_text_file((out_dir / "theory.json").string(), out.dump(2) + "\n");
  write_manifest(out_dir, "theory", p, {"theory.json"});
  return 0;
}

int dispatch(const std::string& subcommand, const ordered_json& params, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  if (subcommand == "solve") return run_solve(params, out_dir);
  if (subcommand == "table") return run_table(params, out_dir);
  if (subcommand == "success") return run_success(params, out_dir);
  if (subcommand == "recover") return run_recover(params, out_dir);
  if (subcommand == "theory") return run_theory(params, out_dir);
  throw std::invalid_argument("unknown subcommand in manifest: " + subcommand);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse Bregman-Kaczmarz solvers for nonlinear systems of equations"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();  // lets --out appear after the subcommand

  std::string out_flag;
  app.add_option("--out", out_flag, "output directory (default: $SBK_OUT_DIR or .)");

  // solve
  auto* solve = app.add_subcommand("solve", "run one method on one system");
  struct {
    std::string method, kind = "gaussian", init = "normal", lin_dist = "normal";
    std::string load_problem, save_problem;
    int m = 0, n = 0, max_iters = 1000;
    double sp = 0.1, lambda = 2.0, delta = 1.0, gamma = 1.0, tol = 1e-6;
    Eigen::Index q = 0;
    std::uint64_t seed = 0;
    bool no_bregman = false;
  } s;
  solve->add_option("--method", s.method, "nbk|rnbk|mrnbk|rmrnbk|scbnb")->required();
  solve->add_option("--kind", s.kind, "gaussian|dct");
  solve->add_option("--m", s.m, "number of equations");
  solve->add_option("--n", s.n, "number of unknowns");
  solve->add_option("--sp", s.sp, "sparsity of the ground truth");
  solve->add_option("--lambda", s.lambda, "l1 weight of the potential");
  solve->add_option("--delta", s.delta, "scbnb relaxation in (0,2)");
  solve->add_option("--gamma", s.gamma, "relaxed/scbnb step parameter");
  solve->add_option("--q", s.q, "scbnb block size (0: default)");
  solve->add_option("--tol", s.tol, "relative residual threshold");
  solve->add_option("--max-iters", s.max_iters, "iteration cap");
  solve->add_option("--seed", s.seed, "base seed");
  solve->add_option("--init", s.init, "normal|zero starting subgradient");
  solve->add_option("--lin-dist", s.lin_dist, "distribution of b terms: normal|uniform");
  solve->add_option("--load-problem", s.load_problem, "read the system from a problem file");
  solve->add_option("--save-problem", s.save_problem, "write the system to a problem file");
  solve->add_flag("--no-bregman", s.no_bregman, "skip the Bregman-distance column");

  // table
  auto* table = app.add_subcommand("table", "method-comparison table over sizes and sparsities");
  struct {
    std::string sizes, sp = "0.1", kind = "gaussian", methods = "nbk,rnbk,mrnbk,rmrnbk,scbnb";
    std::string format = "csv";
    int trials = 1, max_iters = 1000, jobs = 1;
    double tol = 1e-6, lambda = 2.0, delta = 1.0, gamma = 1.0;
    Eigen::Index q = 0;
    std::uint64_t seed = 0;
    bool single_run = false;
  } t;
  table->add_option("--sizes", t.sizes, "comma list of MxN sizes")->required();
  table->add_option("--sp", t.sp, "sparsities (list or first:step:last)");
  table->add_option("--kind", t.kind, "gaussian|dct");
  table->add_option("--methods", t.methods, "comma list of methods");
  table->add_option("--trials", t.trials, "seeded trials per cell");
  table->add_flag("--single-run", t.single_run, "one trial per cell (paper protocol)");
  table->add_option("--tol", t.tol, "relative residual threshold");
  table->add_option("--max-iters", t.max_iters, "iteration cap");
  table->add_option("--lambda", t.lambda, "l1 weight");
  table->add_option("--delta", t.delta, "scbnb relaxation");
  table->add_option("--gamma", t.gamma, "step parameter");
  table->add_option("--q", t.q, "scbnb block size (0: default)");
  table->add_option("--seed", t.seed, "base seed");
  table->add_option("--jobs", t.jobs, "parallel workers over cells");
  table->add_option("--format", t.format, "csv|json");

  // success
  auto* success = app.add_subcommand("success", "success-rate grid from the zero start");
  struct {
    std::string n = "50:20:150", sp = "0.05:0.05:0.15", kind = "gaussian";
    std::string methods = "nbk,rnbk,mrnbk,rmrnbk,scbnb", format = "csv";
    int m = 100, trials = 100, cap = 3000, jobs = 1;
    double tol = 1e-6, lambda = 2.0, delta = 1.0, gamma = 1.0;
    Eigen::Index q = 0;
    std::uint64_t seed = 0;
  } u;
  success->add_option("--m", u.m, "number of equations");
  success->add_option("--n", u.n, "unknown counts (list or first:step:last)");
  success->add_option("--sp", u.sp, "sparsities (list or first:step:last)");
  success->add_option("--kind", u.kind, "gaussian|dct");
  success->add_option("--methods", u.methods, "comma list of methods");
  success->add_option("--trials", u.trials, "trials per cell");
  success->add_option("--cap", u.cap, "iteration cap that defines success");
  success->add_option("--tol", u.tol, "relative residual threshold");
  success->add_option("--lambda", u.lambda, "l1 weight");
  success->add_option("--delta", u.delta, "scbnb relaxation");
  success->add_option("--gamma", u.gamma, "step parameter");
  success->add_option("--q", u.q, "scbnb block size (0: default)");
  success->add_option("--seed", u.seed, "base seed");
  success->add_option("--jobs", u.jobs, "parallel workers over cells");
  success->add_option("--format", u.format, "csv|json");

  // recover
  auto* recover = app.add_subcommand("recover", "sparse image recovery study");
  struct {
    std::string image, methods = "mrnbk,rmrnbk,scbnb";
    int side = 16, m = 400, iters = 1000;
    double noise = 0.01, lambda = 1.0, delta = 1.0, gamma = 1.0;
    Eigen::Index q = 0;
    std::uint64_t seed = 0;
  } r;
  recover->add_option("--image", r.image, "grey-map file with the original image");
  recover->add_option("--side", r.side, "synthetic image side length");
  recover->add_option("--m", r.m, "number of noisy measurements");
  recover->add_option("--noise", r.noise, "relative noise level");
  recover->add_option("--lambda", r.lambda, "l1 weight");
  recover->add_option("--iters", r.iters, "iteration budget (no tolerance stop)");
  recover->add_option("--methods", r.methods, "comma list of methods");
  recover->add_option("--delta", r.delta, "scbnb relaxation");
  recover->add_option("--gamma", r.gamma, "step parameter");
  recover->add_option("--q", r.q, "scbnb block size (0: default)");
  recover->add_option("--seed", r.seed, "base seed");

  // theory
  auto* theory = app.add_subcommand("theory", "rate constants and inequality fuzzing");
  struct {
    double sigma_min = -1.0, sigma_max = -1.0, eta = 0.0, M = 1.0, gamma = 1.0, delta = 1.0;
    double sp = 0.1, probe_radius = 0.1, lambda = 2.0;
    int tau = 1, m = 0, n = 0, probes = 50, fuzz_samples = 1000;
    std::string kind = "gaussian";
    std::uint64_t seed = 0;
  } th;
  theory->add_option("--sigma-min", th.sigma_min, "lower spectral bound");
  theory->add_option("--sigma-max", th.sigma_max, "upper spectral bound");
  theory->add_option("--eta", th.eta, "tangential cone constant");
  theory->add_option("--tau", th.tau, "number of column blocks");
  theory->add_option("--M", th.M, "smoothness modulus of the potential");
  theory->add_option("--gamma", th.gamma, "strong-convexity / step parameter");
  theory->add_option("--delta", th.delta, "scbnb relaxation");
  theory->add_option("--m", th.m, "probe problem: equations");
  theory->add_option("--n", th.n, "probe problem: unknowns");
  theory->add_option("--sp", th.sp, "probe problem: sparsity");
  theory->add_option("--kind", th.kind, "probe problem: gaussian|dct");
  theory->add_option("--probes", th.probes, "number of spectral probe points");
  theory->add_option("--probe-radius", th.probe_radius, "probe radius around the solution");
  theory->add_option("--lambda", th.lambda, "potential weight for inequality fuzzing");
  theory->add_option("--fuzz-samples", th.fuzz_samples, "inequality fuzz sample count");
  theory->add_option("--seed", th.seed, "base seed");

  // rerun
  auto* rerun = app.add_subcommand("rerun", "re-execute a run from its manifest");
  std::string manifest_path;
  rerun->add_option("manifest", manifest_path, "manifest.json of a previous run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    const fs::path out_dir = resolve_out_dir(out_flag);

    if (solve->parsed()) {
      if (s.load_problem.empty() && (s.m <= 0 || s.n <= 0))
        throw std::invalid_argument("solve: --m and --n must be positive (or use --load-problem)");
      ordered_json p;
      p["method"] = s.method;
      if (!s.load_problem.empty()) {
        p["load_problem"] = s.load_problem;
      } else {
        p["kind"] = s.kind;
        p["m"] = s.m;
        p["n"] = s.n;
        p["sp"] = s.sp;
        p["lin_dist"] = s.lin_dist;
      }
      p["lambda"] = s.lambda;
      p["delta"] = s.delta;
      p["gamma"] = s.gamma;
      p["q"] = s.q;
      p["tol"] = s.tol;
      p["max_iters"] = s.max_iters;
      p["seed"] = s.seed;
      p["init"] = s.init;
      p["bregman"] = !s.no_bregman;
      if (!s.save_problem.empty()) p["save_problem"] = s.save_problem;
      return dispatch("solve", p, out_dir);
    }
    if (table->parsed()) {
      ordered_json p;
      p["sizes"] = t.sizes;
      p["sp"] = t.sp;
      p["kind"] = t.kind;
      p["methods"] = t.methods;
      p["trials"] = t.single_run ? 1 : t.trials;
      p["tol"] = t.tol;
      p["max_iters"] = t.max_iters;
      p["lambda"] = t.lambda;
      p["delta"] = t.delta;
      p["gamma"] = t.gamma;
      p["q"] = t.q;
      p["seed"] = t.seed;
      p["jobs"] = t.jobs;
      p["format"] = t.format;
      return dispatch("table", p, out_dir);
    }
    if (success->parsed()) {
      ordered_json p;
      p["m"] = u.m;
      p["n"] = u.n;
      p["sp"] = u.sp;
      p["kind"] = u.kind;
      p["methods"] = u.methods;
      p["trials"] = u.trials;
      p["cap"] = u.cap;
      p["tol"] = u.tol;
      p["lambda"] = u.lambda;
      p["delta"] = u.delta;
      p["gamma"] = u.gamma;
      p["q"] = u.q;
      p["seed"] = u.seed;
      p["jobs"] = u.jobs;
      p["format"] = u.format;
      return dispatch("success", p, out_dir);
    }
    if (recover->parsed()) {
      ordered_json p;
      if (!r.image.empty()) p["image"] = r.image;
      else p["side"] = r.side;
      p["m"] = r.m;
      p["noise"] = r.noise;
      p["lambda"] = r.lambda;
      p["iters"] = r.iters;
      p["methods"] = r.methods;
      p["delta"] = r.delta;
      p["gamma"] = r.gamma;
      p["q"] = r.q;
      p["seed"] = r.seed;
      return dispatch("recover", p, out_dir);
    }
    if (theory->parsed()) {
      ordered_json p;
      const bool has_sigma = th.sigma_min > 0.0 && th.sigma_max > 0.0;
      if (has_sigma) {
        p["sigma_min"] = th.sigma_min;
        p["sigma_max"] = th.sigma_max;
      } else if (th.m > 0 && th.n > 0) {
        p["m"] = th.m;
        p["n"] = th.n;
        p["sp"] = th.sp;
        p["kind"] = th.kind;
        p["probes"] = th.probes;
        p["probe_radius"] = th.probe_radius;
      } else {
        throw std::invalid_argument("theory: give --sigma-min/--sigma-max or --m/--n");
      }
      p["eta"] = th.eta;
      p["tau"] = th.tau;
      p["M"] = th.M;
      p["gamma"] = th.gamma;
      p["delta"] = th.delta;
      p["lambda"] = th.lambda;
      p["fuzz_samples"] = th.fuzz_samples;
      p["seed"] = th.seed;
      return dispatch("theory", p, out_dir);
    }
    if (rerun->parsed()) {
      const ordered_json manifest = ordered_json::parse(sbk::read_text_file(manifest_path));
      return dispatch(manifest.at("subcommand").get<std::string>(), manifest.at("params"),
                      out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "sbk: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
