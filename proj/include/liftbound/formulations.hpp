#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "liftbound/graph.hpp"

namespace liftbound {

/// Where a linear row came from. Edge rows carry (u,v), clique rows the clique
/// index in `a`, nodal rows the vertex in `a`.
struct RowOrigin {
  enum class Kind { edge, clique, nodal, generic };
  Kind kind = Kind::generic;
  int a = -1;
  int b = -1;
  friend bool operator==(const RowOrigin&, const RowOrigin&) = default;
};

/// Sparse row  sum_j coef_j x_j <= rhs  over 0-based variables.
struct LinearRow {
  std::vector<std::pair<int, double>> terms;  // sorted by variable, no zeros
  double rhs = 0.0;
  std::string label;
  RowOrigin origin;
  friend bool operator==(const LinearRow&, const LinearRow&) = default;

  double coefficient(int var) const;
};

enum class CoefficientRule { gamma, theta, alpha };

std::string_view to_string(CoefficientRule rule);
CoefficientRule coefficient_rule_from_string(std::string_view name);

struct CoefficientSettings {
  CoefficientRule rule = CoefficientRule::gamma;
  double theta_tol = 1e-4;              // residual tolerance of the theta solves
  int theta_max_iter = 20000;
  double alpha_time_limit = 60.0;       // seconds per neighborhood
  int threads = 1;                      // neighborhoods solved concurrently
};

/// Coefficient metadata of a nodal relaxation.
struct NodalInfo {
  CoefficientRule rule = CoefficientRule::gamma;
  bool mixed = false;               // some alpha coefficients fell back to theta
  std::vector<int> coefficients;    // r_i per vertex (0 for isolated vertices)
  double seconds = 0.0;             // time spent computing coefficients
  friend bool operator==(const NodalInfo& a, const NodalInfo& b) {
    return a.rule == b.rule && a.mixed == b.mixed && a.coefficients == b.coefficients;
  }
};

/// Linear relaxation  max w^T x  s.t. rows,  0 <= x <= 1 implicit.
struct LinearRelaxation {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LinearRow> rows;
  std::optional<NodalInfo> nodal;
  friend bool operator==(const LinearRelaxation&, const LinearRelaxation&) = default;
};

/// Edge formulation: x_u + x_v <= 1 for every edge.
LinearRelaxation build_frac(const Graph& g);

/// Clique formulation over a cover; throws std::invalid_argument if the cover
/// is not a valid maximal-clique edge cover of g.
LinearRelaxation build_qstab(const Graph& g, const CliqueCover& cover);

struct NodalCoefficient {
  int value = 0;
  bool timed_out = false;  // alpha rule only: value is a theta fallback
};

/// r_i >= alpha(G[N(i)]) under the given rule.
NodalCoefficient nodal_coefficient(const Graph& g, int vertex, const CoefficientSettings& settings);

/// floor of a valid upper bound on theta(h). Stops early once the floor
/// matches a greedy stable-set lower bound.
int theta_coefficient(const Graph& h, double tol, int max_iter);

/// Nodal formulation  sum_{j in N(i)} x_j + r_i x_i <= r_i; isolated vertices
/// get no row. Alpha timeouts fall back to theta and set `mixed`.
LinearRelaxation build_nod(const Graph& g, const CoefficientSettings& settings);

/// Text LP format:
///   max: +1 x1 +1 x2 ;
///   R_e_1_2: +1 x1 +1 x2 <= 1 ;
/// 1-based variables, `//` comments, whitespace-insensitive.
std::string serialize_lp(const LinearRelaxation& lp);
/// Throws ParseError with the offending line.
LinearRelaxation parse_lp(std::string_view text);

/// True if x (0/1 or fractional) satisfies every row within tol.
bool satisfies(const LinearRelaxation& lp, const std::vector<double>& x, double tol = 1e-12);

}  // namespace liftbound
