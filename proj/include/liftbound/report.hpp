#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "liftbound/cutting_plane.hpp"
#include "liftbound/formulations.hpp"
#include "liftbound/graph.hpp"
#include "liftbound/sdp_solver.hpp"

namespace liftbound {

struct RunConfig {
  CuttingParams cutting;
  SolverParams solver;
  CoefficientSettings coefficients;
  std::uint64_t seed = 1;
  std::vector<std::string> inputs;
  std::string output_dir;        // trajectory files go here when non-empty
  int alpha_cap = 100;           // exact alpha only up to this order
  std::optional<int> best_known_alpha;
  int workers = 1;               // concurrent graphs in ensembles

  void validate() const;
};

/// Applies one `section.key = value` setting; throws std::invalid_argument on
/// unknown keys or bad values.
void apply_config_key(RunConfig& cfg, std::string_view key, std::string_view value);
/// Plain-text key = value lines, `#` comments. Errors carry the line number.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Report columns, in emission order.
inline constexpr std::string_view kBoundColumns[] = {"theta",    "theta_plus", "lambda",  "mu",
                                                     "nu_gamma", "nu_theta",   "nu_alpha"};
/// Relaxation names accepted by the pipeline: theta, theta_plus, frac, qstab,
/// nod_gamma, nod_theta, nod_alpha.
std::string_view column_for(std::string_view relaxation);
std::vector<std::string> all_relaxations();
/// Relaxation name for either a relaxation or a column name ("mu" -> "qstab").
/// Throws std::invalid_argument on anything else.
std::string relaxation_for(std::string_view name);

struct BoundEntry {
  std::optional<double> bound;
  std::optional<double> gap;
  int iterations = 0;              // cutting-plane rounds
  int solver_iterations = 0;
  double seconds = 0.0;            // bound computation, formulation excluded
  double coefficient_seconds = 0.0;
  std::string termination;
  std::map<std::string, int> cuts_by_class;
  std::string error;
  friend bool operator==(const BoundEntry&, const BoundEntry&) = default;
};

struct BoundReport {
  std::string graph;
  int n = 0;
  int edges = 0;
  double density = 0.0;
  std::optional<double> alpha;     // integer for single graphs, mean for mean rows
  bool alpha_exact = false;
  bool mean = false;               // aggregated ensemble row
  int samples = 1;
  std::map<std::string, BoundEntry> bounds;  // keyed by column name
  friend bool operator==(const BoundReport&, const BoundReport&) = default;

  bool all_bounded() const;
};

nlohmann::json to_json(const BoundReport& r);
BoundReport report_from_json(const nlohmann::json& j);
nlohmann::json reports_to_json(const std::vector<BoundReport>& rs);
std::vector<BoundReport> reports_from_json(const nlohmann::json& j);

/// 100 (bound - alpha) / alpha rounded to 3 decimals; throws if alpha < 1.
double pct_gap(double bound, double alpha);

enum class TableFormat { csv, json, text };
TableFormat table_format_from_string(std::string_view name);

/// Bound table. Text marks the best gap of each row with '*', ties included.
std::string render_table(const std::vector<BoundReport>& records, TableFormat format);
/// Cuts per constraint class, one line per (graph, relaxation).
std::string render_cut_table(const std::vector<BoundReport>& records, TableFormat format);
/// Writes bounds.<ext> and cuts.<ext> into `dir`.
void emit_tables(const std::vector<BoundReport>& records, TableFormat format, const std::string& dir);

BoundReport cmd_pipeline(const RunConfig& cfg, const Graph& g, const std::string& graph_id,
                         const std::vector<std::string>& relaxations);
BoundReport cmd_pipeline(const RunConfig& cfg, const std::string& graph_path,
                         const std::vector<std::string>& relaxations);

/// Erdos-Renyi cells with `seeds` instances each (seeds cfg.seed, cfg.seed+1,
/// ...). Each cell's records are followed by its mean row.
std::vector<BoundReport> cmd_ensemble(const RunConfig& cfg, const std::vector<int>& ns,
                                      const std::vector<double>& ps, int seeds,
                                      const std::vector<std::string>& relaxations);

}  // namespace liftbound
