#include "liftbound/cutting_plane.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace liftbound {

std::vector<int> CutPool::enforced_indices() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < enforced.size(); ++k)
    if (enforced[k]) out.push_back(static_cast<int>(k));
  return out;
}

std::vector<int> scan_violations(const Eigen::MatrixXd& y, const CutPool& pool, double epsilon, int c) {
  std::vector<std::pair<double, int>> hits;
  for (std::size_t k = 0; k < pool.rows.size(); ++k) {
    if (pool.enforced[k]) continue;
    const double v = pool.rows[k].violation(y);
    const double viol = pool.rows[k].sense == Sense::eq ? std::abs(v) : v;
    if (viol > epsilon) hits.emplace_back(viol, static_cast<int>(k));
  }
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  if (c >= 0 && hits.size() > static_cast<std::size_t>(c)) hits.resize(c);
  std::vector<int> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(h.second);
  return out;
}

namespace {

constexpr std::pair<RelaxationKind, std::string_view> kKinds[] = {
    {RelaxationKind::frac, "frac"},
    {RelaxationKind::qstab, "qstab"},
    {RelaxationKind::nod_gamma, "nod_gamma"},
    {RelaxationKind::nod_theta, "nod_theta"},
    {RelaxationKind::nod_alpha, "nod_alpha"},
};

}  // namespace

std::string_view to_string(RelaxationKind k) {
  for (auto [kind, name] : kKinds)
    if (kind == k) return name;
  return "unknown";
}

RelaxationKind relaxation_kind_from_string(std::string_view name) {
  for (auto [kind, n] : kKinds)
    if (n == name) return kind;
  throw std::invalid_argument("unknown relaxation '" + std::string(name) + "'");
}

std::string_view bound_symbol(RelaxationKind k) {
  switch (k) {
    case RelaxationKind::frac: return "lambda";
    case RelaxationKind::qstab: return "mu";
    case RelaxationKind::nod_gamma: return "nu_gamma";
    case RelaxationKind::nod_theta: return "nu_theta";
    case RelaxationKind::nod_alpha: return "nu_alpha";
  }
  return "?";
}

void CuttingParams::validate() const {
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
  if (c < 1) throw std::invalid_argument("c must be positive");
  if (!(time_limit > 0)) throw std::invalid_argument("time_limit must be positive");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::no_violation: return "no_violation";
    case Termination::tailing_off: return "tailing_off";
    case Termination::time_limit: return "time_limit";
  }
  return "unknown";
}

int BoundRun::total_cuts() const {
  int n = 0;
  for (const auto& round : cuts_added) n += static_cast<int>(round.size());
  return n;
}

std::map<ConstraintClass, int> BoundRun::cuts_by_class() const {
  std::map<ConstraintClass, int> out;
  for (const auto& round : cuts_added)
    for (const auto& cut : round) ++out[cut.cls];
  return out;
}

BoundRun run_cutting_plane(const SdpRelaxation& sdp, const CuttingParams& params, const SolverParams& solver) {
  params.validate();
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

  CutPool pool(sdp.pool_rows);
  BoundRun run;
  std::vector<int> enforced;
  double best = std::numeric_limits<double>::infinity();

  auto solve = [&](std::vector<Cut> cuts) {
    SolverParams sp = solver;
    sp.time_limit = std::min(solver.time_limit, std::max(1e-3, params.time_limit - elapsed()));
    const SdpSolution* warm = params.warm_start && !run.bounds.empty() ? &run.final_solution : nullptr;
    auto sol = admm_solve(sdp, enforced, sp, warm);
    best = std::min(best, sol.valid_upper_bound);
    run.bounds.push_back(best);
    run.solve_bounds.push_back(sol.valid_upper_bound);
    run.primal_values.push_back(sol.primal_value);
    run.traces.push_back(sol.Y.trace());
    run.seconds.push_back(sol.seconds);
    run.solver_iterations.push_back(sol.iterations);
    run.cuts_added.push_back(std::move(cuts));
    run.final_solution = std::move(sol);
  };

  solve({});
  double delta = std::numeric_limits<double>::infinity();
  while (true) {
    if (elapsed() >= params.time_limit) {
      run.termination = Termination::time_limit;
      break;
    }
    const auto viol = scan_violations(run.final_solution.Y, pool, params.epsilon, params.c);
    if (viol.empty()) {
      run.termination = Termination::no_violation;
      break;
    }
    if (delta <= params.delta) {
      run.termination = Termination::tailing_off;
      break;
    }
    std::vector<Cut> cuts;
    for (int k : viol) {
      pool.enforce(k);
      enforced.push_back(k);
      cuts.push_back({k, pool.rows[k].cls, pool.rows[k].violation(run.final_solution.Y)});
    }
    const double before = run.bounds.back();
    solve(std::move(cuts));
    ++run.iterations;
    delta = std::abs(run.bounds.back() - before);
  }
  run.wall_time = elapsed();
  return run;
}

SdpRelaxation build_lifted(const Graph& g, RelaxationKind kind, const CoefficientSettings& coeff,
                           std::optional<NodalInfo>* nodal_out) {
  switch (kind) {
    case RelaxationKind::frac:
      return lift_frac_pool(g);
    case RelaxationKind::qstab:
      return lift_qstab_reduced(g, greedy_clique_cover(g));
    default: {
      CoefficientSettings s = coeff;
      s.rule = kind == RelaxationKind::nod_gamma   ? CoefficientRule::gamma
               : kind == RelaxationKind::nod_theta ? CoefficientRule::theta
                                                   : CoefficientRule::alpha;
      const auto lp = build_nod(g, s);
      if (nodal_out) *nodal_out = lp.nodal;
      return lift_nod_reduced(g, lp);
    }
  }
}

BoundRun run_cutting_plane(const Graph& g, RelaxationKind kind, const CuttingParams& params,
                           const SolverParams& solver, const CoefficientSettings& coeff) {
  return run_cutting_plane(build_lifted(g, kind, coeff), params, solver);
}

nlohmann::json trajectory_json(const BoundRun& run, std::string_view graph_id, RelaxationKind kind,
                               const CuttingParams& params) {
  nlohmann::json j;
  j["graph"] = graph_id;
  j["relaxation"] = to_string(kind);
  j["params"] = {{"epsilon", params.epsilon},
                 {"delta", params.delta},
                 {"c", params.c},
                 {"time_limit", params.time_limit}};
  auto& its = j["iterations"] = nlohmann::json::array();
  for (std::size_t k = 0; k < run.bounds.size(); ++k) {
    nlohmann::json by_class = nlohmann::json::object();
    for (const auto& cut : run.cuts_added[k]) by_class[std::string(to_string(cut.cls))] = by_class.value(std::string(to_string(cut.cls)), 0) + 1;
    its.push_back({{"bound", run.bounds[k]},
                   {"solve_bound", run.solve_bounds[k]},
                   {"cuts", run.cuts_added[k].size()},
                   {"cuts_by_class", by_class},
                   {"solver_iterations", run.solver_iterations[k]},
                   {"seconds", run.seconds[k]}});
  }
  j["final_bound"] = run.final_bound();
  j["termination"] = to_string(run.termination);
  j["wall_time"] = run.wall_time;
  return j;
}

}  // namespace liftbound
