// End-to-end acceptance checks. One PASS/FAIL line per criterion; the exit
// status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "liftbound/cutting_plane.hpp"
#include "liftbound/formulations.hpp"
#include "liftbound/graph.hpp"
#include "liftbound/lifting.hpp"
#include "liftbound/sdp_solver.hpp"
#include "oracles.hpp"

using namespace liftbound;

namespace {

struct Criterion {
  int checks = 0;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  bool skipped = false;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool near(double v, double want, double tol) { return std::abs(v - want) <= tol; }

// Safeguard audit shared by criteria 1-5.
Criterion safeguard;

void audit(const std::string& label, double ub, double pv, double trace, int alpha, int n) {
  safeguard.check(ub >= alpha, fmt("%s: ub %.8f < alpha %d", label.c_str(), ub, alpha));
  safeguard.check(ub >= pv - 1e-5, fmt("%s: ub %.8f < primal %.8f - 1e-5", label.c_str(), ub, pv));
  safeguard.check(trace <= n + 1 + 1e-6, fmt("%s: trace %.8f > n+1", label.c_str(), trace));
}

void audit(const std::string& label, const SdpSolution& s, int alpha, int n) {
  audit(label, s.valid_upper_bound, s.primal_value, s.Y.trace(), alpha, n);
}

void audit(const std::string& label, const BoundRun& run, int alpha, int n) {
  for (std::size_t k = 0; k < run.solve_bounds.size(); ++k)
    audit(label + fmt(" solve %zu", k), run.solve_bounds[k], run.primal_values[k], run.traces[k], alpha, n);
}

const SolverParams kSolver{};
const CuttingParams kCutting{};

int alpha_of(const Graph& g) { return exact_stability_number(g).alpha; }

BoundRun bound(const std::string& name, const Graph& g, RelaxationKind kind, int alpha) {
  auto run = run_cutting_plane(g, kind, kCutting, kSolver);
  audit(name + " " + std::string(to_string(kind)), run, alpha, g.order());
  return run;
}

SdpSolution theta_solve(const std::string& name, const Graph& g, bool plus, int alpha) {
  auto s = admm_solve(plus ? theta_plus_base(g) : theta_base(g), {}, kSolver);
  audit(name + (plus ? " theta_plus" : " theta"), s, alpha, g.order());
  return s;
}

bool entries_near(const std::vector<double>& x, double want, double tol) {
  for (double v : x)
    if (!near(v, want, tol)) return false;
  return !x.empty();
}

std::string xs(const std::vector<double>& x) {
  std::ostringstream o;
  for (double v : x) o << fmt(" %.4f", v);
  return o.str();
}

// Antiweb: clique pool versus edge pool.
void criterion1(Criterion& c) {
  const auto g = antiweb_graph(10, 3);
  const int a = alpha_of(g);
  const auto mu = bound("antiweb(10,3)", g, RelaxationKind::qstab, a);
  const auto lam = bound("antiweb(10,3)", g, RelaxationKind::frac, a);
  c.check(near(mu.final_bound(), 3.0, 0.01), fmt("mu %.5f, want 3.000", mu.final_bound()));
  c.check(near(lam.final_bound(), 3.106, 0.01), fmt("lambda %.5f, want 3.106", lam.final_bound()));
  c.check(entries_near(lam.final_solution.x, 0.3106, 0.005), "lambda x entries:" + xs(lam.final_solution.x));
  c.note(fmt("mu=%.4f lambda=%.4f", mu.final_bound(), lam.final_bound()));
}

// Nodal bounds on C7 and the antiweb.
void criterion2(Criterion& c) {
  const auto c7 = cycle_graph(7);
  const int a7 = alpha_of(c7);
  for (auto k : {RelaxationKind::nod_theta, RelaxationKind::nod_alpha}) {
    const auto r = bound("C7", c7, k, a7);
    c.check(near(r.final_bound(), 3.317, 0.005), fmt("C7 %s %.5f, want 3.317", std::string(to_string(k)).c_str(), r.final_bound()));
    c.check(entries_near(r.final_solution.x, 0.47395, 0.002), "C7 x entries:" + xs(r.final_solution.x));
    c.note(fmt("C7 %s=%.4f", std::string(bound_symbol(k)).c_str(), r.final_bound()));
  }
  const auto lam = bound("C7", c7, RelaxationKind::frac, a7);
  c.check(near(lam.final_bound(), 3.0, 0.01), fmt("C7 lambda %.5f, want 3.000", lam.final_bound()));
  c.note(fmt("C7 lambda=%.4f", lam.final_bound()));

  const auto aw = antiweb_graph(10, 3);
  const int aa = alpha_of(aw);
  for (auto k : {RelaxationKind::nod_theta, RelaxationKind::nod_alpha}) {
    const auto r = bound("antiweb(10,3)", aw, k, aa);
    c.check(near(r.final_bound(), 3.0, 0.01), fmt("antiweb %s %.5f, want 3.000", std::string(to_string(k)).c_str(), r.final_bound()));
    c.note(fmt("antiweb %s=%.4f", std::string(bound_symbol(k)).c_str(), r.final_bound()));
  }
}

// Odd cycles against the closed form.
void criterion3(Criterion& c) {
  for (int n : {5, 7, 9, 11}) {
    const auto g = cycle_graph(n);
    const auto s = theta_solve("C" + std::to_string(n), g, false, (n - 1) / 2);
    const double want = oracle::theta_odd_cycle(n);
    c.check(std::abs(s.valid_upper_bound - want) <= 1e-3, fmt("theta(C%d) %.6f, want %.6f", n, s.valid_upper_bound, want));
    c.note(fmt("C%d %.6f", n, s.valid_upper_bound));
  }
}

// Complemented MANN_a9. A DIMACS copy wins over the bundled stable-set graph.
std::string mann_source(Graph& g) {
  namespace fs = std::filesystem;
  const fs::path dir = LIFTBOUND_TEST_DATA;
  for (const char* name : {"MANN_a9.clq", "MANN_a9.col", "MANN_a9"}) {
    if (fs::exists(dir / name)) {
      g = complement(read_graph_file((dir / name).string()));
      return (dir / name).string() + " (complemented)";
    }
  }
  if (fs::exists(dir / "mann_a9_stable.edges")) {
    g = read_graph_file((dir / "mann_a9_stable.edges").string());
    return (dir / "mann_a9_stable.edges").string();
  }
  return {};
}

Graph mann_graph;
bool mann_loaded = false;

void criterion4(Criterion& c) {
  const std::string src = mann_source(mann_graph);
  if (src.empty()) {
    c.skipped = true;
    c.note("instance file not found, skipped");
    std::fprintf(stderr, "warning: MANN_a9 instance not found under %s\n", LIFTBOUND_TEST_DATA);
    return;
  }
  mann_loaded = true;
  const auto t0 = std::chrono::steady_clock::now();
  const auto& g = mann_graph;
  const int a = alpha_of(g);
  c.check(g.order() == 45 && a == 16, fmt("instance has n=%d alpha=%d, want 45 and 16", g.order(), a));
  const double tp = theta_solve("MANN", g, true, a).valid_upper_bound;
  const double mu = bound("MANN", g, RelaxationKind::qstab, a).final_bound();
  const double lam = bound("MANN", g, RelaxationKind::frac, a).final_bound();
  const double nt = bound("MANN", g, RelaxationKind::nod_theta, a).final_bound();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.check(near(tp, 17.475, 0.05), fmt("theta_plus %.4f, want 17.475", tp));
  c.check(mu <= 17.10, fmt("mu %.4f > 17.10", mu));
  c.check(lam <= 17.15, fmt("lambda %.4f > 17.15", lam));
  c.check(nt <= 17.50, fmt("nu_theta %.4f > 17.50", nt));
  c.check(secs < 120, fmt("took %.1f s", secs));
  c.note(fmt("theta_plus=%.4f mu=%.4f lambda=%.4f nu_theta=%.4f in %.1fs", tp, mu, lam, nt, secs));
}

// Ordering of all bounds on random and structured graphs.
void criterion5(Criterion& c) {
  std::vector<std::pair<std::string, Graph>> graphs;
  const double ps[] = {0.3, 0.5, 0.7};
  for (int s = 0; s < 10; ++s) {
    const double p = ps[s % 3];
    graphs.emplace_back(fmt("G(30,%.1f) seed %d", p, 100 + s), erdos_renyi(30, p, 100 + s));
  }
  for (int n : {5, 7, 9, 11}) graphs.emplace_back("C" + std::to_string(n), cycle_graph(n));
  graphs.emplace_back("antiweb(10,3)", antiweb_graph(10, 3));
  graphs.emplace_back("antiweb(13,4)", antiweb_graph(13, 4));
  graphs.emplace_back("web(10,3)", web_graph(10, 3));
  graphs.emplace_back("web(11,2)", web_graph(11, 2));
  graphs.emplace_back("K5", complete_graph(5));
  graphs.emplace_back("K3,3", complete_bipartite(3, 3));
  if (mann_loaded) graphs.emplace_back("MANN", mann_graph);

  const double tol = 2e-3;
  for (const auto& [name, g] : graphs) {
    const int a = alpha_of(g);
    const double th = theta_solve(name, g, false, a).valid_upper_bound;
    const double tp = theta_solve(name, g, true, a).valid_upper_bound;
    std::map<RelaxationKind, double> b;
    for (auto k : {RelaxationKind::frac, RelaxationKind::qstab, RelaxationKind::nod_gamma, RelaxationKind::nod_theta,
                   RelaxationKind::nod_alpha})
      b[k] = bound(name, g, k, a).final_bound();
    const double na = b[RelaxationKind::nod_alpha], nt = b[RelaxationKind::nod_theta], ng = b[RelaxationKind::nod_gamma];
    const auto tag = [&](const char* rel, double lo, double hi, double slack) {
      c.check(lo <= hi + slack, fmt("%s: %s (%.6f > %.6f)", name.c_str(), rel, lo, hi));
    };
    tag("alpha <= nu_alpha", a, na, 0);
    tag("nu_alpha <= nu_theta", na, nt, 0);
    tag("nu_theta <= nu_gamma", nt, ng, 0);
    tag("nu_gamma <= theta_plus", ng, tp, 0);
    tag("theta_plus <= theta", tp, th, tol);
    tag("mu <= lambda", b[RelaxationKind::qstab], b[RelaxationKind::frac], tol);
  }
  c.note(fmt("%zu graphs", graphs.size()));
}

// Lifted row identities and exhaustive rank-one feasibility.
void criterion6(Criterion& c) {
  std::vector<Graph> corpus{cycle_graph(5), cycle_graph(7), cycle_graph(9), cycle_graph(11),
                            antiweb_graph(10, 3), antiweb_graph(11, 3), web_graph(10, 3), web_graph(12, 4),
                            complete_graph(5), complete_bipartite(3, 3), complete_bipartite(4, 6)};
  for (unsigned s = 0; s < 8; ++s) corpus.push_back(erdos_renyi(12, 0.15 + 0.1 * s, 300 + s));
  int identities = 0, lifts = 0;
  for (const auto& g : corpus) {
    std::vector<LinearRelaxation> lps{build_frac(g), build_qstab(g, greedy_clique_cover(g))};
    for (auto r : {CoefficientRule::gamma, CoefficientRule::theta, CoefficientRule::alpha}) {
      CoefficientSettings s;
      s.rule = r;
      lps.push_back(build_nod(g, s));
    }
    std::vector<SdpRelaxation> sdps{theta_base(g), theta_plus_base(g), lift_frac_pool(g),
                                    lift_qstab_reduced(g, greedy_clique_cover(g), {true})};
    for (std::size_t k = 0; k < lps.size(); ++k) {
      for (const auto& row : lps[k].rows)
        for (int i = 0; i < lps[k].num_vars; ++i) {
          const auto [r4, r5] = lift_row(row, i);
          const auto e = embed_row(row);
          ++identities;
          c.check(r4.matrix + r5.matrix == e.matrix && r4.rhs + r5.rhs == e.rhs, "row-sum identity broken");
        }
      sdps.push_back(m_plus_lift(lps[k]));
      if (k >= 2) sdps.push_back(lift_nod_reduced(g, lps[k], {true}));
    }
    lifts += static_cast<int>(sdps.size());
    for (auto st : oracle::all_stable_sets(g)) {
      const auto y = rank_one_lift(oracle::incidence(st, g.order()));
      for (const auto& sdp : sdps) {
        const double v = max_violation(sdp, y);
        ++c.checks;
        if (v > 1e-12) c.failures.push_back(fmt("stable set %llx violates a lift by %.3g", (unsigned long long)st, v));
      }
    }
  }
  c.note(fmt("%d identities, %d lifted relaxations", identities, lifts));
}

// Collected by the audit calls in criteria 1-5.
void criterion7(Criterion& c) {
  c = safeguard;
  c.note(fmt("%d inline checks", safeguard.checks));
}

void criterion8(Criterion& c) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> order(1, 16);
  std::uniform_real_distribution<double> dens(0.05, 0.95);
  for (int t = 0; t < 50; ++t) {
    const int n = order(rng);
    const double p = dens(rng);
    const auto g = erdos_renyi(n, p, rng());
    const auto r = exact_stability_number(g);
    const int want = oracle::brute_alpha(g);
    c.check(r.alpha == want && !r.timed_out, fmt("graph %d (n=%d): %d vs %d", t, n, r.alpha, want));
    c.check(is_stable_set(g, r.witness) && static_cast<int>(r.witness.size()) == r.alpha,
            fmt("graph %d: bad witness", t));
  }
  c.note("50 graphs");
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<void(Criterion&)>>> all{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
      {5, criterion5}, {6, criterion6}, {7, criterion7}, {8, criterion8}};
  int failed = 0;
  for (const auto& [id, fn] : all) {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string notes;
    for (const auto& n : c.notes) notes += (notes.empty() ? "" : "; ") + n;
    const char* verdict = c.skipped ? "SKIP" : c.failures.empty() ? "PASS" : "FAIL";
    std::printf("criterion %d: %s (%d checks, %.1fs) %s\n", id, verdict, c.checks, secs, notes.c_str());
    for (std::size_t k = 0; k < c.failures.size() && k < 10; ++k) std::printf("    %s\n", c.failures[k].c_str());
    if (c.failures.size() > 10) std::printf("    ... %zu more\n", c.failures.size() - 10);
    if (!c.failures.empty()) ++failed;
    std::fflush(stdout);
  }
  std::printf("criterion 9: EXCLUDED (published random-graph tables, large-instance rows and CPU times are not "
              "reproducible at this scale)\n");
  return failed == 0 ? 0 : 1;
}
