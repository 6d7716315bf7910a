#include "doctest.h"
#include "liftbound/formulations.hpp"
#include "oracles.hpp"

using namespace liftbound;

namespace {

std::vector<Graph> small_corpus() {
  std::vector<Graph> out{cycle_graph(5), cycle_graph(7), antiweb_graph(10, 3), complete_graph(4),
                         complete_bipartite(3, 3), web_graph(7, 2)};
  std::vector<std::pair<int, int>> e{{0, 1}, {1, 2}};
  out.emplace_back(5, e);  // two isolated vertices
  for (unsigned s = 0; s < 6; ++s) out.push_back(erdos_renyi(11, 0.25 + 0.1 * s, 40 + s));
  return out;
}

CoefficientSettings rule(CoefficientRule r) {
  CoefficientSettings s;
  s.rule = r;
  return s;
}

}  // namespace

TEST_CASE("edge formulation") {
  CHECK(build_frac(cycle_graph(5)).rows.size() == 5);
  CHECK(build_frac(Graph(4)).rows.empty());
  CHECK(build_frac(complete_graph(4)).rows.size() == 6);
  const auto lp = build_frac(complete_graph(2));
  REQUIRE(lp.rows.size() == 1);
  CHECK(lp.rows[0].label == "R_e_1_2");
  CHECK(lp.rows[0].origin.kind == RowOrigin::Kind::edge);
  CHECK(lp.objective == std::vector<double>{1.0, 1.0});
}

TEST_CASE("clique formulation") {
  CliqueCover k3{{{0, 1, 2}}};
  const auto lp = build_qstab(complete_graph(3), k3);
  REQUIRE(lp.rows.size() == 1);
  CHECK(lp.rows[0].terms == std::vector<std::pair<int, double>>{{0, 1.0}, {1, 1.0}, {2, 1.0}});
  CHECK(lp.rows[0].rhs == 1.0);
  const auto c5 = cycle_graph(5);
  const auto q = build_qstab(c5, greedy_clique_cover(c5));
  const auto f = build_frac(c5);
  REQUIRE(q.rows.size() == f.rows.size());
  for (std::size_t k = 0; k < q.rows.size(); ++k) CHECK(q.rows[k].terms == f.rows[k].terms);
  CliqueCover bad{{{0, 1}}};
  CHECK_THROWS_AS(build_qstab(complete_graph(3), bad), std::invalid_argument);
}

TEST_CASE("nodal coefficients") {
  const auto c7 = cycle_graph(7);
  for (int i = 0; i < 7; ++i) {
    CHECK(nodal_coefficient(c7, i, rule(CoefficientRule::alpha)).value == 2);
    CHECK(nodal_coefficient(c7, i, rule(CoefficientRule::theta)).value == 2);
    CHECK(nodal_coefficient(c7, i, rule(CoefficientRule::gamma)).value == 2);
  }
  const auto aw = antiweb_graph(10, 3);
  for (int i = 0; i < 10; ++i) {
    CHECK(nodal_coefficient(aw, i, rule(CoefficientRule::gamma)).value == 4);
    CHECK(nodal_coefficient(aw, i, rule(CoefficientRule::alpha)).value == 2);
    CHECK(nodal_coefficient(aw, i, rule(CoefficientRule::theta)).value == 2);
  }
  CHECK(theta_coefficient(cycle_graph(5), 1e-4, 20000) == 2);
  CHECK(theta_coefficient(Graph(3), 1e-4, 20000) == 3);
  CHECK(theta_coefficient(complete_graph(4), 1e-4, 20000) == 1);
}

TEST_CASE("coefficient chain alpha <= theta <= gamma and theta >= alpha of the neighborhood") {
  for (const auto& g : small_corpus()) {
    const auto a = build_nod(g, rule(CoefficientRule::alpha)).nodal->coefficients;
    const auto t = build_nod(g, rule(CoefficientRule::theta)).nodal->coefficients;
    const auto gm = build_nod(g, rule(CoefficientRule::gamma)).nodal->coefficients;
    for (int i = 0; i < g.order(); ++i) {
      CHECK(a[i] <= t[i]);
      CHECK(t[i] <= gm[i]);
      const auto sub = induced_subgraph(g, g.neighbors(i));
      CHECK(a[i] == oracle::brute_alpha(sub.graph));
    }
  }
}

TEST_CASE("nodal formulation rows") {
  const auto lp = build_nod(cycle_graph(7), rule(CoefficientRule::alpha));
  REQUIRE(lp.rows.size() == 7);
  for (int i = 0; i < 7; ++i) {
    const auto& row = lp.rows[i];
    CHECK(row.coefficient(i) == 2.0);
    CHECK(row.coefficient((i + 1) % 7) == 1.0);
    CHECK(row.coefficient((i + 6) % 7) == 1.0);
    CHECK(row.terms.size() == 3);
    CHECK(row.rhs == 2.0);
    CHECK(row.origin.kind == RowOrigin::Kind::nodal);
    CHECK(row.origin.a == i);
  }
  const auto k2 = build_nod(complete_graph(2), rule(CoefficientRule::gamma));
  REQUIRE(k2.rows.size() == 2);
  for (const auto& row : k2.rows) {
    CHECK(row.terms == std::vector<std::pair<int, double>>{{0, 1.0}, {1, 1.0}});
    CHECK(row.rhs == 1.0);
  }
  std::vector<std::pair<int, int>> e{{0, 1}};
  const auto iso = build_nod(Graph(3, e), rule(CoefficientRule::alpha));
  CHECK(iso.rows.size() == 2);
  CHECK(iso.nodal->coefficients[2] == 0);
  CHECK(satisfies(iso, {1.0, 0.0, 1.0}));
}

TEST_CASE("parallel coefficient computation agrees with the sequential one") {
  for (const auto& g : small_corpus()) {
    for (auto r : {CoefficientRule::theta, CoefficientRule::alpha}) {
      auto s = rule(r);
      const auto seq = build_nod(g, s);
      s.threads = 3;
      CHECK(build_nod(g, s) == seq);
    }
  }
}

TEST_CASE("alpha timeouts fall back to theta and mark the relaxation mixed") {
  auto s = rule(CoefficientRule::alpha);
  CHECK_FALSE(build_nod(cycle_graph(5), s).nodal->mixed);
  // a hub whose neighbourhood needs real search
  std::vector<std::pair<int, int>> e;
  const auto h = erdos_renyi(120, 0.08, 9);
  for (const auto& ed : h.edges()) e.emplace_back(ed.u + 1, ed.v + 1);
  for (int v = 1; v <= 120; ++v) e.emplace_back(0, v);
  const Graph hub(121, e);
  s.alpha_time_limit = 0.0;
  const auto c = nodal_coefficient(hub, 0, s);
  CHECK(c.timed_out);
  CHECK(c.value >= exact_stability_number(h).alpha);
}

TEST_CASE("stable sets are feasible for every formulation") {
  for (const auto& g : small_corpus()) {
    std::vector<LinearRelaxation> lps{build_frac(g), build_qstab(g, greedy_clique_cover(g))};
    for (auto r : {CoefficientRule::gamma, CoefficientRule::theta, CoefficientRule::alpha})
      lps.push_back(build_nod(g, rule(r)));
    for (auto s : oracle::all_stable_sets(g)) {
      const auto x = oracle::incidence(s, g.order());
      for (const auto& lp : lps) CHECK(satisfies(lp, x));
    }
  }
}

TEST_CASE("LP text format") {
  const auto k2 = build_frac(complete_graph(2));
  const auto text = serialize_lp(k2);
  CHECK(text.find("max: +1 x1 +1 x2;") != std::string::npos);
  CHECK(text.find("R_e_1_2: +1 x1 +1 x2 <= 1;") != std::string::npos);
  CHECK(parse_lp(text) == k2);

  const auto nod = build_nod(cycle_graph(7), rule(CoefficientRule::alpha));
  const auto nod_text = serialize_lp(nod);
  CHECK(nod_text.find("+2 x1") != std::string::npos);
  CHECK(parse_lp(nod_text) == nod);

  for (const auto& g : small_corpus()) {
    const auto q = build_qstab(g, greedy_clique_cover(g));
    CHECK(parse_lp(serialize_lp(q)) == q);
    const auto t = build_nod(g, rule(CoefficientRule::theta));
    CHECK(parse_lp(serialize_lp(t)) == t);
  }

  // whitespace-insensitive, comments anywhere
  const auto loose = parse_lp("// a comment\nmax:\n  x1 + x2 ;\nR_e_1_2 :x1+x2<=1;");
  CHECK(loose.num_vars == 2);
  REQUIRE(loose.rows.size() == 1);
  CHECK(loose.rows[0].rhs == 1.0);

  // fractional coefficients with exponents survive
  LinearRelaxation frac;
  frac.num_vars = 2;
  frac.objective = {0.5, 1e-05};
  frac.rows.push_back({{{0, 2.5e-7}, {1, -3.0}}, 1e-5, "r1", {}});
  CHECK(parse_lp(serialize_lp(frac)) == frac);

  auto line_of = [](std::string_view t) -> std::size_t {
    try {
      parse_lp(t);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("max: +1 x1;\nR: <= 1;") == 2);
  CHECK(line_of("max: +1 x1;\nR +1 x1 <= 1;") == 2);
  CHECK(line_of("max: +1 x1;\n\nR: +1 x1 1;") == 3);
  CHECK(line_of("max: +1 x0;") == 1);
}
