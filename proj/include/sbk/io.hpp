#pragma once

#include <Eigen/Core>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sbk/harness.hpp"
#include "sbk/problem.hpp"
#include "sbk/solvers.hpp"

namespace sbk {

using StoredProblem = std::variant<QuadraticSystem, LinearSystem>;

/// Flat binary container (magic, kind, dimensions, seed, raw arrays). The
/// round trip is bit-exact: doubles are stored verbatim.
void save_problem(const std::string& path, const QuadraticSystem& sys);
void save_problem(const std::string& path, const LinearSystem& sys);
void save_problem(const std::string& path, const StoredProblem& problem);
StoredProblem load_problem(const std::string& path);

const SystemView& problem_view(const StoredProblem& problem);
const Eigen::VectorXd& problem_ground_truth(const StoredProblem& problem);

/// Reads a portable grey-map: P2/P5 (8- or 16-bit) or Pf (float32 grayscale).
/// Returns raw sample values; normalization is the caller's business.
Eigen::MatrixXd read_greymap(const std::string& path);

/// Writes binary 8-bit P5; values are clamped to [0,1] and scaled to 255.
void write_pgm(const std::string& path, const Eigen::MatrixXd& img);

/// Shortest-width decimal that round-trips the double exactly.
std::string format_double(double v);

/// Per-iteration trace: "iteration,relative_residual[,bregman_distance]".
void write_report_csv(const std::string& path, const SolveReport& report);

/// JSON summary of a run; cpu_seconds is the only non-reproducible field.
nlohmann::ordered_json report_json(const SolveReport& report, const SolverConfig& config,
                                   Eigen::Index m, Eigen::Index n);

/// "method,m,n,sp,median_it,median_cpu,failed,converged_trials,trials";
/// medians print as "--" in failed cells.
void write_comparison_csv(const std::string& path, const std::vector<ComparisonRow>& rows);
nlohmann::ordered_json comparison_json(const std::vector<ComparisonRow>& rows);

/// "method,n,sp,successes,trials,success_rate".
void write_success_csv(const std::string& path, const std::vector<SuccessCell>& cells);
nlohmann::ordered_json success_json(const std::vector<SuccessCell>& cells);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace sbk
