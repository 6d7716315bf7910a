#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "liftbound/formulations.hpp"
#include "liftbound/graph.hpp"
#include "liftbound/lifting.hpp"
#include "liftbound/sdp_solver.hpp"

namespace liftbound {

struct CutPool {
  std::vector<SymRow> rows;
  std::vector<bool> enforced;

  CutPool() = default;
  explicit CutPool(std::vector<SymRow> r) : rows(std::move(r)), enforced(rows.size(), false) {}

  std::size_t size() const noexcept { return rows.size(); }
  void enforce(int k) { enforced.at(k) = true; }
  std::vector<int> enforced_indices() const;
};

/// Up to `c` un-enforced rows with violation > epsilon, most violated first,
/// ties by ascending index.
std::vector<int> scan_violations(const Eigen::MatrixXd& y, const CutPool& pool, double epsilon, int c);

enum class RelaxationKind { frac, qstab, nod_gamma, nod_theta, nod_alpha };
std::string_view to_string(RelaxationKind k);
RelaxationKind relaxation_kind_from_string(std::string_view name);
/// Symbol used in reports: lambda, mu, nu_gamma, nu_theta, nu_alpha.
std::string_view bound_symbol(RelaxationKind k);

struct CuttingParams {
  double epsilon = 1e-3;
  double delta = 1e-1;
  int c = 1000;
  double time_limit = 7200.0;
  bool warm_start = true;

  void validate() const;
};

enum class Termination { no_violation, tailing_off, time_limit };
std::string_view to_string(Termination t);

struct Cut {
  int row = -1;
  ConstraintClass cls = ConstraintClass::generic_lift_4;
  double violation = 0.0;
};

struct BoundRun {
  std::vector<double> bounds;            // best-so-far valid bound after each solve
  std::vector<double> solve_bounds;      // the solve's own safeguarded bound
  std::vector<double> primal_values;
  std::vector<double> traces;            // trace(Y) of each solve
  std::vector<std::vector<Cut>> cuts_added;  // cuts enforced before solve k (empty for k = 0)
  std::vector<double> seconds;           // wall time per solve
  std::vector<int> solver_iterations;
  int iterations = 0;                    // cutting-plane rounds after the initial solve
  double wall_time = 0.0;
  Termination termination = Termination::no_violation;
  SdpSolution final_solution;

  double final_bound() const {
    return bounds.empty() ? std::numeric_limits<double>::infinity() : bounds.back();
  }
  int total_cuts() const;
  std::map<ConstraintClass, int> cuts_by_class() const;
};

/// Cutting plane over the pool of `sdp`, starting from its fixed rows only.
BoundRun run_cutting_plane(const SdpRelaxation& sdp, const CuttingParams& params, const SolverParams& solver);

/// Lifted relaxation of the given kind: greedy clique cover for qstab, the
/// kind's coefficient rule for the nodal kinds.
SdpRelaxation build_lifted(const Graph& g, RelaxationKind kind, const CoefficientSettings& coeff = {},
                           std::optional<NodalInfo>* nodal_out = nullptr);

BoundRun run_cutting_plane(const Graph& g, RelaxationKind kind, const CuttingParams& params,
                           const SolverParams& solver, const CoefficientSettings& coeff = {});

nlohmann::json trajectory_json(const BoundRun& run, std::string_view graph_id, RelaxationKind kind,
                               const CuttingParams& params);

}  // namespace liftbound
