#include <doctest.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "sbk/io.hpp"
#include "sbk/rng.hpp"

using namespace sbk;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("sbk_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int counter;
};
int TempDir::counter = 0;

}  // namespace

TEST_CASE("problem files round-trip bit-exactly") {
  TempDir dir;

  const auto quad = generate_quadratic_system(6, 5, 0.4, MatrixKind::dct, 31);
  save_problem(dir.file("quad.sbkp"), quad);
  const auto loaded = load_problem(dir.file("quad.sbkp"));
  const auto* q = std::get_if<QuadraticSystem>(&loaded);
  REQUIRE(q != nullptr);
  CHECK(q->raw_stack() == quad.raw_stack());
  CHECK(q->lin_terms() == quad.lin_terms());
  CHECK(q->const_terms() == quad.const_terms());
  CHECK(q->ground_truth() == quad.ground_truth());
  CHECK(q->kind() == MatrixKind::dct);
  CHECK(q->seed() == quad.seed());
  CHECK(q->sparsity() == quad.sparsity());
  REQUIRE(q->omegas().size() == quad.omegas().size());
  for (std::size_t i = 0; i < quad.omegas().size(); ++i)
    CHECK(q->omegas()[i] == quad.omegas()[i]);
  // behavioral identity
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(5, -1.0, 1.0);
  CHECK(q->residual(x) == quad.residual(x));

  const Eigen::VectorXd sig = generate_sparse_signal(9, 0.5, std::uint64_t{3});
  const auto lin = generate_linear_sensing(7, 9, sig, 0.05, 17);
  save_problem(dir.file("lin.sbkp"), lin);
  const auto loaded2 = load_problem(dir.file("lin.sbkp"));
  const auto* l = std::get_if<LinearSystem>(&loaded2);
  REQUIRE(l != nullptr);
  CHECK(l->sensing() == lin.sensing());
  CHECK(l->rhs() == lin.rhs());
  CHECK(l->ground_truth() == lin.ground_truth());
  CHECK(l->noise_level() == lin.noise_level());

  CHECK_THROWS(load_problem(dir.file("missing.sbkp")));
  write_text_file(dir.file("junk.sbkp"), "not a problem");
  CHECK_THROWS(load_problem(dir.file("junk.sbkp")));
}

TEST_CASE("grey-map io") {
  TempDir dir;

  // P5 write + read round trip on 8-bit data
  Eigen::MatrixXd img(2, 3);
  img << 0.0, 0.5, 1.0, 0.25, 0.75, 1.0;
  write_pgm(dir.file("img.pgm"), img);
  const Eigen::MatrixXd back = read_greymap(dir.file("img.pgm"));
  REQUIRE(back.rows() == 2);
  REQUIRE(back.cols() == 3);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 3; ++c)
      CHECK(back(r, c) == doctest::Approx(std::lround(img(r, c) * 255.0)));

  // P2 ascii with a comment line
  write_text_file(dir.file("ascii.pgm"), "P2\n# test image\n3 2\n255\n0 10 20\n30 40 50\n");
  const Eigen::MatrixXd ascii = read_greymap(dir.file("ascii.pgm"));
  REQUIRE(ascii.rows() == 2);
  CHECK(ascii(0, 1) == 10.0);
  CHECK(ascii(1, 2) == 50.0);

  // 16-bit binary is big-endian
  std::string p5 = "P5\n2 1\n65535\n";
  p5.push_back(static_cast<char>(0x01));
  p5.push_back(static_cast<char>(0x00));  // 256
  p5.push_back(static_cast<char>(0x00));
  p5.push_back(static_cast<char>(0xff));  // 255
  write_text_file(dir.file("wide.pgm"), p5);
  const Eigen::MatrixXd wide = read_greymap(dir.file("wide.pgm"));
  CHECK(wide(0, 0) == 256.0);
  CHECK(wide(0, 1) == 255.0);

  // float PFM, little-endian, bottom-up rows
  std::string pfm = "Pf\n2 2\n-1.0\n";
  const float vals[4] = {0.f, 1.f, 2.f, 3.f};  // bottom row first
  pfm.append(reinterpret_cast<const char*>(vals), 16);
  write_text_file(dir.file("img.pfm"), pfm);
  const Eigen::MatrixXd pf = read_greymap(dir.file("img.pfm"));
  CHECK(pf(0, 0) == 2.0);  // top row
  CHECK(pf(0, 1) == 3.0);
  CHECK(pf(1, 0) == 0.0);
  CHECK(pf(1, 1) == 1.0);

  write_text_file(dir.file("bad.pgm"), "P9\n1 1\n255\n");
  CHECK_THROWS(read_greymap(dir.file("bad.pgm")));
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.0, 1.0, -1.0, 0.1, 1e-300, 1234.5678, 3.141592653589793, 1e17}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1e-6) == "1e-06");
}

TEST_CASE("report csv shape") {
  TempDir dir;
  SolveReport rep;
  rep.method = Method::scbnb;
  rep.iterations = 2;
  rep.residual_history = {1.0, 0.25, 1e-7};
  rep.bregman_history = std::vector<double>{3.0, 1.0, 0.5};
  rep.final_primal = Eigen::VectorXd::Zero(2);
  rep.converged = true;
  rep.final_relative_residual = 1e-7;
  write_report_csv(dir.file("r.csv"), rep);
  CHECK(read_text_file(dir.file("r.csv")) ==
        "iteration,relative_residual,bregman_distance\n"
        "0,1,3\n"
        "1,0.25,1\n"
        "2,1e-07,0.5\n");

  rep.bregman_history.reset();
  write_report_csv(dir.file("r2.csv"), rep);
  CHECK(read_text_file(dir.file("r2.csv")) ==
        "iteration,relative_residual\n0,1\n1,0.25\n2,1e-07\n");
}

TEST_CASE("comparison and success csv") {
  TempDir dir;
  ComparisonRow ok{Method::scbnb, 20, 10, 0.1, 42.0, 0.0125, false, 3, 3};
  ComparisonRow bad{Method::rnbk, 20, 10, 0.1, 0.0, 0.0, true, 0, 3};
  write_comparison_csv(dir.file("t.csv"), {ok, bad});
  CHECK(read_text_file(dir.file("t.csv")) ==
        "method,m,n,sp,median_it,median_cpu,failed,converged_trials,trials\n"
        "scbnb,20,10,0.1,42,0.0125,0,3,3\n"
        "rnbk,20,10,0.1,--,--,1,0,3\n");

  SuccessCell cell{Method::nbk, 50, 0.05, 17, 25, 17.0 / 25.0};
  write_success_csv(dir.file("s.csv"), {cell});
  CHECK(read_text_file(dir.file("s.csv")) ==
        "method,n,sp,successes,trials,success_rate\n"
        "nbk,50,0.05,17,25,0.68\n");
}

TEST_CASE("report json carries the config and excludes nothing but timing") {
  SolverConfig cfg;
  cfg.method = Method::scbnb;
  cfg.block_size = 0;
  cfg.lambda = 2.0;
  cfg.seed = 7;
  SolveReport rep;
  rep.method = Method::scbnb;
  rep.iterations = 5;
  rep.converged = true;
  rep.final_relative_residual = 5e-7;
  rep.wall_time = 0.123;
  const auto j = report_json(rep, cfg, 200, 100);
  CHECK(j["method"] == "scbnb");
  CHECK(j["m"] == 200);
  CHECK(j["params"]["block_size"] == 25);  // resolved default for n = 100
  CHECK(j["params"]["seed"] == 7);
  CHECK(j["iterations"] == 5);
  CHECK(j["converged"] == true);
  CHECK(j.contains("cpu_seconds"));
}
