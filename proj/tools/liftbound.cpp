#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "liftbound/cutting_plane.hpp"
#include "liftbound/formulations.hpp"
#include "liftbound/graph.hpp"
#include "liftbound/lifting.hpp"
#include "liftbound/report.hpp"
#include "liftbound/sdp_solver.hpp"

using namespace liftbound;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

// Flags shared by the commands that run the pipeline.
struct RunFlags {
  std::string config;
  std::vector<std::string> settings;
  std::optional<double> epsilon, delta, time_limit, tol;
  std::optional<int> c, max_iter, alpha_cap, workers, best_known;
  std::optional<std::uint64_t> seed;
  std::string output_dir;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "key = value config file")->check(CLI::ExistingFile);
    app->add_option("--set", settings, "override a config key, e.g. cutting.c=500");
    app->add_option("--epsilon", epsilon, "violation tolerance");
    app->add_option("--delta", delta, "tailing-off threshold");
    app->add_option("--c", c, "cuts added per round");
    app->add_option("--time-limit", time_limit, "seconds per cutting-plane run");
    app->add_option("--tol", tol, "SDP solver tolerance");
    app->add_option("--max-iter", max_iter, "SDP solver iteration cap");
    app->add_option("--seed", seed, "base random seed");
    app->add_option("--alpha-cap", alpha_cap, "largest order for exact alpha");
    app->add_option("--best-known-alpha", best_known, "alpha to use above the cap");
    app->add_option("--workers", workers, "concurrent graphs in ensembles");
    app->add_option("--output-dir", output_dir, "trajectory and table directory");
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config.empty()) cfg = load_config(config);
    for (const auto& kv : settings) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
      std::string key = kv.substr(0, eq);
      while (!key.empty() && key.back() == ' ') key.pop_back();
      apply_config_key(cfg, key, kv.substr(eq + 1));
    }
    if (epsilon) cfg.cutting.epsilon = *epsilon;
    if (delta) cfg.cutting.delta = *delta;
    if (c) cfg.cutting.c = *c;
    if (time_limit) cfg.cutting.time_limit = *time_limit;
    if (tol) cfg.solver.tol = *tol;
    if (max_iter) cfg.solver.max_iter = *max_iter;
    if (seed) cfg.seed = *seed;
    if (alpha_cap) cfg.alpha_cap = *alpha_cap;
    if (best_known) cfg.best_known_alpha = *best_known;
    if (workers) cfg.workers = *workers;
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    cfg.validate();
    return cfg;
  }
};

Graph generate(const std::string& type, int n, int a, int b, double p, std::uint64_t seed) {
  if (type == "cycle") return cycle_graph(n);
  if (type == "complete") return complete_graph(n);
  if (type == "bipartite") return complete_bipartite(a, b);
  if (type == "web") return web_graph(n, a);
  if (type == "antiweb") return antiweb_graph(n, a);
  if (type == "er") return erdos_renyi(n, p, seed);
  if (type == "sts") return steiner_triple_stable_set_graph();
  throw std::invalid_argument("unknown graph type '" + type + "'");
}

std::vector<std::string> pick_relaxations(const std::vector<std::string>& names) {
  if (names.empty()) return all_relaxations();
  std::vector<std::string> out;
  for (const auto& n : names) out.push_back(relaxation_for(n));
  return out;
}

int finish_report(const std::vector<BoundReport>& reps, const RunConfig& cfg, const std::string& format) {
  const auto fmt = table_format_from_string(format);
  std::cout << render_table(reps, fmt);
  if (!cfg.output_dir.empty()) {
    emit_tables(reps, fmt, cfg.output_dir);
    emit((std::filesystem::path(cfg.output_dir) / "report.json").string(), reports_to_json(reps).dump(2) + "\n");
  }
  for (const auto& r : reps)
    for (const auto& [col, e] : r.bounds)
      if (!e.error.empty()) std::cerr << r.graph << " " << col << ": " << e.error << "\n";
  const bool ok = std::all_of(reps.begin(), reps.end(), [](const auto& r) { return r.mean || r.all_bounded(); });
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lift-and-project upper bounds on the stability number"};
  app.require_subcommand(1);
  int rc = 0;

  // gen
  auto* gen = app.add_subcommand("gen", "write a structured or random graph");
  std::string gen_type = "cycle", gen_format = "edgelist", gen_out;
  int gen_n = 5, gen_a = 2, gen_b = 2;
  double gen_p = 0.5;
  std::uint64_t gen_seed = 1;
  bool gen_complement = false;
  gen->add_option("type", gen_type, "cycle|complete|bipartite|web|antiweb|er|sts")->required();
  gen->add_option("-n", gen_n, "order (web/antiweb: p)");
  gen->add_option("-a", gen_a, "web/antiweb q, bipartite left side");
  gen->add_option("-b", gen_b, "bipartite right side");
  gen->add_option("-p", gen_p, "edge probability")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_flag("--complement", gen_complement, "emit the complement");
  gen->add_option("--format", gen_format, "dimacs|edgelist");
  gen->add_option("-o,--out", gen_out, "output path (stdout if omitted)");
  gen->callback([&] {
    auto g = generate(gen_type, gen_n, gen_a, gen_b, gen_p, gen_seed);
    if (gen_complement) g = complement(g);
    emit(gen_out, write_graph(g, gen_format == "dimacs" ? GraphFormat::dimacs : GraphFormat::edgelist));
  });

  // formulate
  auto* form = app.add_subcommand("formulate", "write a linear relaxation");
  std::string form_graph, form_kind = "frac", form_rule = "gamma", form_out;
  CoefficientSettings form_coeff;
  form->add_option("graph", form_graph, "graph file")->required()->check(CLI::ExistingFile);
  form->add_option("--kind", form_kind, "frac|qstab|nod");
  form->add_option("--rule", form_rule, "nodal coefficient rule: gamma|theta|alpha");
  form->add_option("--threads", form_coeff.threads, "coefficient workers");
  form->add_option("-o,--out", form_out, "output path");
  form->callback([&] {
    const auto g = read_graph_file(form_graph);
    LinearRelaxation lp;
    if (form_kind == "frac") lp = build_frac(g);
    else if (form_kind == "qstab") lp = build_qstab(g, greedy_clique_cover(g));
    else if (form_kind == "nod") {
      form_coeff.rule = coefficient_rule_from_string(form_rule);
      lp = build_nod(g, form_coeff);
    } else throw std::invalid_argument("unknown formulation '" + form_kind + "'");
    emit(form_out, serialize_lp(lp));
  });

  // lift
  auto* lift = app.add_subcommand("lift", "write a lifted SDP relaxation");
  std::string lift_graph, lift_lp, lift_kind = "frac", lift_out;
  bool lift_redundant = false;
  lift->add_option("--graph", lift_graph, "graph file")->check(CLI::ExistingFile);
  lift->add_option("--lp", lift_lp, "LP file, lifted generically")->check(CLI::ExistingFile);
  lift->add_option("--kind", lift_kind, "theta|theta_plus|frac|qstab|nod_gamma|nod_theta|nod_alpha");
  lift->add_flag("--emit-redundant", lift_redundant, "keep rows the reduced lifts drop");
  lift->add_option("-o,--out", lift_out, "output path");
  lift->callback([&] {
    SdpRelaxation sdp;
    if (!lift_lp.empty()) {
      sdp = m_plus_lift(parse_lp(slurp(lift_lp)));
    } else if (!lift_graph.empty()) {
      const auto g = read_graph_file(lift_graph);
      if (lift_kind == "theta") sdp = theta_base(g);
      else if (lift_kind == "theta_plus") sdp = theta_plus_base(g);
      else if (lift_kind == "qstab") sdp = lift_qstab_reduced(g, greedy_clique_cover(g), {lift_redundant});
      else if (lift_kind.starts_with("nod_")) {
        CoefficientSettings s;
        s.rule = coefficient_rule_from_string(lift_kind.substr(4));
        sdp = lift_nod_reduced(g, build_nod(g, s), {lift_redundant});
      } else sdp = build_lifted(g, relaxation_kind_from_string(lift_kind));
    } else {
      throw std::invalid_argument("lift needs --graph or --lp");
    }
    emit(lift_out, serialize_sdp(sdp));
  });

  // solve
  auto* solve = app.add_subcommand("solve", "solve a serialized SDP");
  std::string solve_in, solve_pool = "none", solve_out;
  SolverParams solve_params;
  solve->add_option("sdp", solve_in, "SDP file")->required()->check(CLI::ExistingFile);
  solve->add_option("--pool", solve_pool, "none|all: which pool rows to enforce");
  solve->add_option("--tol", solve_params.tol, "residual tolerance");
  solve->add_option("--max-iter", solve_params.max_iter, "iteration cap");
  solve->add_option("-o,--out", solve_out, "solution path");
  solve->callback([&] {
    const auto sdp = parse_sdp(slurp(solve_in));
    std::vector<int> enforced;
    if (solve_pool == "all")
      for (std::size_t k = 0; k < sdp.pool_rows.size(); ++k) enforced.push_back(static_cast<int>(k));
    else if (solve_pool != "none") throw std::invalid_argument("--pool must be none or all");
    emit(solve_out, format_solution(admm_solve(sdp, enforced, solve_params)));
  });

  // bound
  auto* bound = app.add_subcommand("bound", "run the full pipeline on graph files");
  std::vector<std::string> bound_graphs, bound_relax;
  std::string bound_format = "text";
  bool bound_complement = false;
  RunFlags bound_flags;
  bound->add_option("graphs", bound_graphs, "graph files");
  bound->add_flag("--complement", bound_complement, "bound the complements (DIMACS clique instances)");
  bound->add_option("-r,--relax", bound_relax, "relaxations or column names (default: all)");
  bound->add_option("--format", bound_format, "csv|json|text");
  bound_flags.attach(bound);
  bound->callback([&] {
    const auto cfg = bound_flags.resolve();
    auto graphs = bound_graphs;
    graphs.insert(graphs.end(), cfg.inputs.begin(), cfg.inputs.end());
    if (graphs.empty()) throw std::invalid_argument("no graph files given");
    const auto relax = pick_relaxations(bound_relax);
    std::vector<BoundReport> reps;
    for (const auto& path : graphs) {
      if (!bound_complement) {
        reps.push_back(cmd_pipeline(cfg, path, relax));
        continue;
      }
      const auto g = complement(read_graph_file(path));
      reps.push_back(cmd_pipeline(cfg, g, std::filesystem::path(path).stem().string(), relax));
    }
    rc = finish_report(reps, cfg, bound_format);
  });

  // ensemble
  auto* ens = app.add_subcommand("ensemble", "random-graph batches with per-cell means");
  std::vector<int> ens_n{20};
  std::vector<double> ens_p{0.5};
  int ens_seeds = 5;
  std::vector<std::string> ens_relax;
  std::string ens_format = "text";
  RunFlags ens_flags;
  ens->add_option("--n", ens_n, "orders");
  ens->add_option("--p", ens_p, "edge probabilities");
  ens->add_option("--seeds", ens_seeds, "instances per cell");
  ens->add_option("-r,--relax", ens_relax, "relaxations or column names (default: all)");
  ens->add_option("--format", ens_format, "csv|json|text");
  ens_flags.attach(ens);
  ens->callback([&] {
    const auto cfg = ens_flags.resolve();
    const auto relax = pick_relaxations(ens_relax);
    rc = finish_report(cmd_ensemble(cfg, ens_n, ens_p, ens_seeds, relax), cfg, ens_format);
  });

  // report
  auto* rep = app.add_subcommand("report", "re-render a JSON report");
  std::string rep_in, rep_format = "text", rep_dir;
  bool rep_cuts = false;
  rep->add_option("report", rep_in, "report.json")->required()->check(CLI::ExistingFile);
  rep->add_option("--format", rep_format, "csv|json|text");
  rep->add_flag("--cuts", rep_cuts, "print the cut-count table");
  rep->add_option("--output-dir", rep_dir, "write bounds/cuts tables here");
  rep->callback([&] {
    const auto reps = reports_from_json(nlohmann::json::parse(slurp(rep_in)));
    const auto fmt = table_format_from_string(rep_format);
    std::cout << (rep_cuts ? render_cut_table(reps, fmt) : render_table(reps, fmt));
    if (!rep_dir.empty()) emit_tables(reps, fmt, rep_dir);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ParseError& e) {
    std::cerr << "error: line " << e.line() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
