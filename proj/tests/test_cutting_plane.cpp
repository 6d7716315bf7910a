#include "doctest.h"
#include "liftbound/cutting_plane.hpp"
#include "oracles.hpp"

using namespace liftbound;

namespace {

// Pool of rows Y00 <= 1 - v, whose violation at any Y with Y00 = 1 is v.
CutPool pool_with(const std::vector<double>& v) {
  std::vector<SymRow> rows;
  for (double x : v) {
    SymMatrix m;
    m.add(0, 0, 1.0);
    rows.push_back({m, 1.0 - x, Sense::le, ConstraintClass::generic_lift_4, "", -1});
  }
  return CutPool(rows);
}

void check_run(const BoundRun& run, const CuttingParams& cp, double tol) {
  REQUIRE(!run.bounds.empty());
  CHECK(run.bounds.size() == static_cast<std::size_t>(run.iterations + 1));
  CHECK(run.cuts_added.front().empty());
  for (std::size_t k = 1; k < run.bounds.size(); ++k) {
    CHECK(run.bounds[k] <= run.bounds[k - 1] + 2 * tol);
    CHECK(run.cuts_added[k].size() <= static_cast<std::size_t>(cp.c));
    CHECK(!run.cuts_added[k].empty());
  }
  int sum = 0;
  for (const auto& [cls, n] : run.cuts_by_class()) sum += n;
  CHECK(sum == run.total_cuts());
}

}  // namespace

TEST_CASE("scan_violations ordering") {
  const Eigen::MatrixXd y = Eigen::MatrixXd::Identity(2, 2);
  const auto pool = pool_with({0.5, 0.2, 0.0009});
  CHECK(scan_violations(y, pool, 1e-3, 2) == std::vector<int>{0, 1});
  CHECK(scan_violations(y, pool, 1e-3, 10) == std::vector<int>{0, 1});
  std::vector<double> v(8, 0.0);
  v[7] = 0.3;
  v[2] = 0.3;
  v[4] = 0.1;
  CHECK(scan_violations(y, pool_with(v), 1e-3, 5) == std::vector<int>{2, 7, 4});
  auto enforced = pool_with(v);
  enforced.enforce(2);
  CHECK(scan_violations(y, enforced, 1e-3, 5) == std::vector<int>{7, 4});
  CHECK(enforced.enforced_indices() == std::vector<int>{2});
}

TEST_CASE("lifted stable sets produce no cuts") {
  for (const auto& g : {cycle_graph(7), antiweb_graph(10, 3)}) {
    for (auto kind : {RelaxationKind::frac, RelaxationKind::qstab, RelaxationKind::nod_alpha,
                      RelaxationKind::nod_gamma}) {
      const CutPool pool(build_lifted(g, kind).pool_rows);
      for (auto s : oracle::all_stable_sets(g)) {
        const auto y = rank_one_lift(oracle::incidence(s, g.order()));
        CHECK(scan_violations(y, pool, 1e-3, 1000).empty());
      }
    }
  }
}

TEST_CASE("small-example bounds") {
  const CuttingParams cp;
  const SolverParams sp;
  const auto aw = antiweb_graph(10, 3);
  const auto c7 = cycle_graph(7);

  const auto mu = run_cutting_plane(aw, RelaxationKind::qstab, cp, sp);
  CHECK(std::abs(mu.final_bound() - 3.0) <= 0.01);
  check_run(mu, cp, sp.tol);

  const auto lambda = run_cutting_plane(aw, RelaxationKind::frac, cp, sp);
  CHECK(std::abs(lambda.final_bound() - 3.106) <= 0.01);
  for (double x : lambda.final_solution.x) CHECK(std::abs(x - 0.3106) <= 0.005);
  check_run(lambda, cp, sp.tol);

  const auto nu7 = run_cutting_plane(c7, RelaxationKind::nod_alpha, cp, sp);
  CHECK(std::abs(nu7.final_bound() - 3.317) <= 0.005);
  for (double x : nu7.final_solution.x) CHECK(std::abs(x - 0.47395) <= 0.002);

  const auto nu_aw = run_cutting_plane(aw, RelaxationKind::nod_alpha, cp, sp);
  CHECK(std::abs(nu_aw.final_bound() - 3.0) <= 0.01);
  const auto lambda7 = run_cutting_plane(c7, RelaxationKind::frac, cp, sp);
  CHECK(std::abs(lambda7.final_bound() - 3.0) <= 0.01);
}

TEST_CASE("gamma nodal bound matches theta-plus") {
  const CuttingParams cp;
  const SolverParams sp;
  for (unsigned s = 0; s < 4; ++s) {
    const auto g = erdos_renyi(14, 0.3 + 0.1 * s, 500 + s);
    const double tp = solve_theta_plus(g, sp);
    const auto run = run_cutting_plane(g, RelaxationKind::nod_gamma, cp, sp);
    CHECK(std::abs(run.final_bound() - tp) <= 0.01);
    CHECK(run.final_bound() >= oracle::brute_alpha(g) - 1e-9);
  }
}

TEST_CASE("run invariants, determinism and the cut cap") {
  const auto g = erdos_renyi(16, 0.35, 9);
  const int alpha = oracle::brute_alpha(g);
  CuttingParams cp;
  cp.c = 7;
  const SolverParams sp;
  const auto a = run_cutting_plane(g, RelaxationKind::frac, cp, sp);
  const auto b = run_cutting_plane(g, RelaxationKind::frac, cp, sp);
  check_run(a, cp, sp.tol);
  CHECK(a.final_bound() >= alpha);
  REQUIRE(a.cuts_added.size() == b.cuts_added.size());
  for (std::size_t k = 0; k < a.cuts_added.size(); ++k) {
    REQUIRE(a.cuts_added[k].size() == b.cuts_added[k].size());
    for (std::size_t i = 0; i < a.cuts_added[k].size(); ++i) CHECK(a.cuts_added[k][i].row == b.cuts_added[k][i].row);
    CHECK(std::abs(a.bounds[k] - b.bounds[k]) <= 1e-4);
  }
  // every round picks the most violated row first
  for (const auto& round : a.cuts_added)
    for (std::size_t i = 1; i < round.size(); ++i) CHECK(round[i - 1].violation >= round[i].violation);
}

TEST_CASE("termination reasons") {
  const auto g = antiweb_graph(10, 3);
  const SolverParams sp;
  CuttingParams cp;
  cp.c = 1;
  cp.delta = 10.0;
  const auto tail = run_cutting_plane(g, RelaxationKind::frac, cp, sp);
  CHECK(tail.termination == Termination::tailing_off);
  CHECK(tail.iterations == 1);

  cp = {};
  cp.time_limit = 1e-6;
  const auto timed = run_cutting_plane(g, RelaxationKind::frac, cp, sp);
  CHECK(timed.termination == Termination::time_limit);
  CHECK(timed.bounds.size() == 1);
  CHECK(timed.final_bound() >= oracle::brute_alpha(g));

  cp = {};
  const auto clique = run_cutting_plane(complete_graph(5), RelaxationKind::qstab, cp, sp);
  CHECK(clique.termination == Termination::no_violation);
  CHECK(clique.final_bound() == doctest::Approx(1.0).epsilon(1e-4));

  cp.epsilon = 0;
  CHECK_THROWS(run_cutting_plane(complete_graph(3), RelaxationKind::frac, cp, sp));
}

TEST_CASE("trajectory JSON") {
  const CuttingParams cp;
  const auto run = run_cutting_plane(antiweb_graph(10, 3), RelaxationKind::qstab, cp, {});
  const auto j = trajectory_json(run, "aw", RelaxationKind::qstab, cp);
  CHECK(j["graph"] == "aw");
  CHECK(j["relaxation"] == "qstab");
  CHECK(j["params"]["c"] == 1000);
  REQUIRE(j["iterations"].size() == run.bounds.size());
  CHECK(j["iterations"][1]["cuts"] == run.cuts_added[1].size());
  int sum = 0;
  for (const auto& [cls, n] : j["iterations"][1]["cuts_by_class"].items()) sum += n.get<int>();
  CHECK(sum == static_cast<int>(run.cuts_added[1].size()));
  CHECK(j["termination"] == "no_violation");
  CHECK(j["final_bound"].get<double>() == run.final_bound());
}

TEST_CASE("relaxation names") {
  for (auto k : {RelaxationKind::frac, RelaxationKind::qstab, RelaxationKind::nod_gamma, RelaxationKind::nod_theta,
                 RelaxationKind::nod_alpha})
    CHECK(relaxation_kind_from_string(to_string(k)) == k);
  CHECK(bound_symbol(RelaxationKind::qstab) == "mu");
  CHECK_THROWS(relaxation_kind_from_string("lp"));
}
