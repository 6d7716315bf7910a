#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liftbound/graph.hpp"
#include "liftbound/lifting.hpp"

namespace liftbound {

struct SolverParams {
  double tol = 1e-6;                 // relative residual tolerance
  int max_iter = 50000;
  double penalty = 1.0;              // initial sigma
  double penalty_min = 1e-4;
  double penalty_max = 1e4;
  bool adaptive_penalty = true;
  double over_relaxation = 1.6;      // multiplier step factor, in [1, 2)
  int bound_every = 100;             // safeguard cadence
  double time_limit = std::numeric_limits<double>::infinity();
  /// Stop as soon as the safeguarded bound drops below this value.
  double target_bound = -std::numeric_limits<double>::infinity();
  /// Trace bound for the safeguard; <= 0 derives it with trace_bound_for.
  double trace_bound = 0.0;

  void validate() const;
};

enum class SolveStatus { converged, max_iter, time_limit };
std::string_view to_string(SolveStatus s);

struct SdpSolution {
  Eigen::MatrixXd Y;
  std::vector<double> x;               // Y(0, 1..n)
  double primal_value = 0.0;           // <C, Y>
  std::vector<int> enforced;           // pool rows that were enforced, in solve order
  std::vector<double> duals;           // fixed rows, then `enforced`
  Eigen::MatrixXd elementwise_dual;    // nonnegativity multipliers (>= 0)
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double valid_upper_bound = std::numeric_limits<double>::infinity();
  std::vector<double> bound_history;   // best-so-far at each safeguard check
  SolveStatus status = SolveStatus::max_iter;
  bool target_reached = false;
  bool diverged = false;
  int iterations = 0;
  double penalty = 1.0;
  double seconds = 0.0;

  /// Multiplier of pool row `k`, 0 when it was not enforced.
  double pool_dual(int k) const;
};

/// Frobenius-nearest PSD matrix. Throws std::domain_error on non-finite input.
Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m);
double min_eigenvalue(const Eigen::MatrixXd& m);

/// n+1 for relaxations with Y00 = 1 and all diagonal links; throws
/// std::invalid_argument otherwise.
double trace_bound_for(const SdpRelaxation& sdp);

/// b^T y + trace_bound * max(0, -lambda_min(A^T y - S - C)) with the duals of
/// <=-rows and S clamped at 0 first. `duals` lists the fixed rows then the
/// `enforced` pool rows.
double valid_upper_bound(const SdpRelaxation& sdp, std::span<const int> enforced, std::span<const double> duals,
                         const Eigen::MatrixXd& elementwise_dual, double trace_bound);

/// Solves max <C,Y> over the fixed rows, the enforced pool rows, Y PSD and
/// Y >= 0 on the nonneg entries. `warm` seeds Y, duals (matched by pool index,
/// new rows start at 0), S and sigma.
SdpSolution admm_solve(const SdpRelaxation& sdp, std::span<const int> enforced, const SolverParams& params,
                       const SdpSolution* warm = nullptr);

double solve_theta(const Graph& g, const SolverParams& params = {});
double solve_theta_plus(const Graph& g, const SolverParams& params = {});

/// value / valid_ub / status lines, the dense Y row by row, then the duals.
std::string format_solution(const SdpSolution& sol);

}  // namespace liftbound
