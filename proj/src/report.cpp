#include "liftbound/report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace liftbound {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_value(std::string_view key, std::string_view v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw std::invalid_argument("bad value '" + std::string(v) + "' for " + std::string(key));
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("bad boolean '" + std::string(v) + "' for " + std::string(key));
}

std::string fixed(double v, int digits) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(digits) << v;
  return o.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

void RunConfig::validate() const {
  cutting.validate();
  solver.validate();
  if (!(coefficients.theta_tol > 0) || coefficients.theta_max_iter < 1 || !(coefficients.alpha_time_limit > 0) ||
      coefficients.threads < 1)
    throw std::invalid_argument("coefficient settings must be positive");
  if (alpha_cap < 0) throw std::invalid_argument("alpha_cap must be nonnegative");
  if (workers < 1) throw std::invalid_argument("workers must be positive");
  if (best_known_alpha && *best_known_alpha < 1) throw std::invalid_argument("best known alpha must be >= 1");
}

void apply_config_key(RunConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "cutting.epsilon") cfg.cutting.epsilon = parse_value<double>(key, value);
  else if (key == "cutting.delta") cfg.cutting.delta = parse_value<double>(key, value);
  else if (key == "cutting.c") cfg.cutting.c = parse_value<int>(key, value);
  else if (key == "cutting.time_limit") cfg.cutting.time_limit = parse_value<double>(key, value);
  else if (key == "cutting.warm_start") cfg.cutting.warm_start = parse_bool(key, value);
  else if (key == "solver.tol") cfg.solver.tol = parse_value<double>(key, value);
  else if (key == "solver.max_iter") cfg.solver.max_iter = parse_value<int>(key, value);
  else if (key == "solver.penalty") cfg.solver.penalty = parse_value<double>(key, value);
  else if (key == "solver.over_relaxation") cfg.solver.over_relaxation = parse_value<double>(key, value);
  else if (key == "solver.bound_every") cfg.solver.bound_every = parse_value<int>(key, value);
  else if (key == "solver.time_limit") cfg.solver.time_limit = parse_value<double>(key, value);
  else if (key == "coefficients.theta_tol") cfg.coefficients.theta_tol = parse_value<double>(key, value);
  else if (key == "coefficients.theta_max_iter") cfg.coefficients.theta_max_iter = parse_value<int>(key, value);
  else if (key == "coefficients.alpha_time_limit") cfg.coefficients.alpha_time_limit = parse_value<double>(key, value);
  else if (key == "coefficients.threads") cfg.coefficients.threads = parse_value<int>(key, value);
  else if (key == "run.seed") cfg.seed = parse_value<std::uint64_t>(key, value);
  else if (key == "run.input") cfg.inputs.emplace_back(value);
  else if (key == "run.output_dir") cfg.output_dir = std::string(value);
  else if (key == "run.alpha_cap") cfg.alpha_cap = parse_value<int>(key, value);
  else if (key == "run.best_known_alpha") cfg.best_known_alpha = parse_value<int>(key, value);
  else if (key == "run.workers") cfg.workers = parse_value<int>(key, value);
  else throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
}

RunConfig parse_config(std::string_view text, RunConfig cfg) {
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    try {
      apply_config_key(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

// ---------------------------------------------------------------------------
// Records

std::string_view column_for(std::string_view relaxation) {
  if (relaxation == "theta") return "theta";
  if (relaxation == "theta_plus") return "theta_plus";
  return bound_symbol(relaxation_kind_from_string(relaxation));
}

std::vector<std::string> all_relaxations() {
  return {"theta", "theta_plus", "frac", "qstab", "nod_gamma", "nod_theta", "nod_alpha"};
}

std::string relaxation_for(std::string_view name) {
  for (const auto& r : all_relaxations())
    if (r == name || column_for(r) == name) return r;
  throw std::invalid_argument("unknown relaxation '" + std::string(name) + "'");
}

bool BoundReport::all_bounded() const {
  return std::all_of(bounds.begin(), bounds.end(), [](const auto& kv) { return kv.second.bound.has_value(); });
}

namespace {

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

std::optional<double> opt_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j;
  j["graph"] = r.graph;
  j["n"] = r.n;
  j["edges"] = r.edges;
  j["density"] = r.density;
  j["alpha"] = opt_json(r.alpha);
  j["alpha_exact"] = r.alpha_exact;
  j["mean"] = r.mean;
  j["samples"] = r.samples;
  auto& b = j["bounds"] = nlohmann::json::object();
  for (std::string_view col : kBoundColumns) {
    auto it = r.bounds.find(std::string(col));
    if (it == r.bounds.end()) continue;
    const auto& e = it->second;
    b[std::string(col)] = {{"bound", opt_json(e.bound)},
                           {"gap", opt_json(e.gap)},
                           {"iterations", e.iterations},
                           {"solver_iterations", e.solver_iterations},
                           {"seconds", e.seconds},
                           {"coefficient_seconds", e.coefficient_seconds},
                           {"termination", e.termination},
                           {"cuts_by_class", e.cuts_by_class},
                           {"error", e.error}};
  }
  return j;
}

BoundReport report_from_json(const nlohmann::json& j) {
  BoundReport r;
  r.graph = j.at("graph").get<std::string>();
  r.n = j.at("n").get<int>();
  r.edges = j.at("edges").get<int>();
  r.density = j.at("density").get<double>();
  r.alpha = opt_from(j, "alpha");
  r.alpha_exact = j.value("alpha_exact", false);
  r.mean = j.value("mean", false);
  r.samples = j.value("samples", 1);
  for (const auto& [col, e] : j.at("bounds").items()) {
    BoundEntry be;
    be.bound = opt_from(e, "bound");
    be.gap = opt_from(e, "gap");
    be.iterations = e.value("iterations", 0);
    be.solver_iterations = e.value("solver_iterations", 0);
    be.seconds = e.value("seconds", 0.0);
    be.coefficient_seconds = e.value("coefficient_seconds", 0.0);
    be.termination = e.value("termination", std::string{});
    be.cuts_by_class = e.value("cuts_by_class", std::map<std::string, int>{});
    be.error = e.value("error", std::string{});
    r.bounds[col] = std::move(be);
  }
  return r;
}

nlohmann::json reports_to_json(const std::vector<BoundReport>& rs) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rs) arr.push_back(to_json(r));
  return arr;
}

std::vector<BoundReport> reports_from_json(const nlohmann::json& j) {
  std::vector<BoundReport> out;
  for (const auto& e : j) out.push_back(report_from_json(e));
  return out;
}

double pct_gap(double bound, double alpha) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("pct_gap needs alpha >= 1");
  return std::round(100.0 * (bound - alpha) / alpha * 1000.0) / 1000.0;
}

// ---------------------------------------------------------------------------
// Tables

TableFormat table_format_from_string(std::string_view name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "json") return TableFormat::json;
  if (name == "text") return TableFormat::text;
  throw std::invalid_argument("unknown table format '" + std::string(name) + "'");
}

namespace {

std::vector<std::string_view> present_columns(const std::vector<BoundReport>& records) {
  std::vector<std::string_view> cols;
  for (std::string_view c : kBoundColumns)
    if (std::any_of(records.begin(), records.end(), [&](const auto& r) { return r.bounds.count(std::string(c)); }))
      cols.push_back(c);
  return cols;
}

std::string alpha_cell(const BoundReport& r) {
  if (!r.alpha) return "";
  return r.mean ? fixed(*r.alpha, 3) : fixed(*r.alpha, 0);
}

std::string bound_cell(const BoundReport& r, std::string_view col) {
  auto it = r.bounds.find(std::string(col));
  if (it == r.bounds.end() || !it->second.bound) return "";
  return fixed(*it->second.bound, 3);
}

std::string gap_cell(const BoundReport& r, std::string_view col) {
  auto it = r.bounds.find(std::string(col));
  if (it == r.bounds.end() || !it->second.gap) return "";
  return fixed(*it->second.gap, 3);
}

// Columns holding the row's best gap (or best bound when gaps are absent),
// compared at printed precision so ties are exact.
std::vector<std::string_view> best_columns(const BoundReport& r, const std::vector<std::string_view>& cols) {
  const bool by_gap = std::any_of(cols.begin(), cols.end(), [&](auto c) { return !gap_cell(r, c).empty(); });
  std::optional<long long> best;
  auto key = [&](std::string_view c) -> std::optional<long long> {
    const auto& e = r.bounds.at(std::string(c));
    const auto v = by_gap ? e.gap : e.bound;
    if (!v) return std::nullopt;
    return std::llround(*v * 1000.0);
  };
  for (auto c : cols)
    if (r.bounds.count(std::string(c)))
      if (auto k = key(c); k && (!best || *k < *best)) best = k;
  std::vector<std::string_view> out;
  for (auto c : cols)
    if (r.bounds.count(std::string(c)) && best && key(c) == best) out.push_back(c);
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      line += std::string(width[i] - row[i].size(), ' ') + row[i];
    }
    out += line + "\n";
  }
  return out;
}

}  // namespace

std::string render_table(const std::vector<BoundReport>& records, TableFormat format) {
  if (format == TableFormat::json) return reports_to_json(records).dump(2) + "\n";
  const auto cols = present_columns(records);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"graph", "n", "m", "density", "alpha"};
  for (auto c : cols) {
    header.emplace_back(c);
    header.push_back(std::string(c) + "_gap");
  }
  rows.push_back(header);
  for (const auto& r : records) {
    std::vector<std::string> row{r.graph, std::to_string(r.n), std::to_string(r.edges), fixed(r.density, 2),
                                 alpha_cell(r)};
    const auto best = format == TableFormat::text ? best_columns(r, cols) : std::vector<std::string_view>{};
    for (auto c : cols) {
      const bool mark = std::find(best.begin(), best.end(), c) != best.end();
      const bool gap_mode = !gap_cell(r, c).empty();
      auto b = bound_cell(r, c), g = gap_cell(r, c);
      if (mark && gap_mode) g += "*";
      if (mark && !gap_mode) b += "*";
      auto it = r.bounds.find(std::string(c));
      if (it != r.bounds.end() && !it->second.bound && !it->second.error.empty()) b = "error";
      row.push_back(b);
      row.push_back(g);
    }
    rows.push_back(std::move(row));
  }
  if (format == TableFormat::text) return aligned(rows);
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_escape(row[i]);
    out += "\n";
  }
  return out;
}

std::string render_cut_table(const std::vector<BoundReport>& records, TableFormat format) {
  if (format == TableFormat::json) {
    auto arr = nlohmann::json::array();
    for (const auto& r : records)
      for (std::string_view c : kBoundColumns)
        if (auto it = r.bounds.find(std::string(c)); it != r.bounds.end())
          arr.push_back({{"graph", r.graph},
                         {"bound", c},
                         {"iterations", it->second.iterations},
                         {"cuts_by_class", it->second.cuts_by_class}});
    return arr.dump(2) + "\n";
  }
  std::vector<std::string> classes;
  for (const auto& r : records)
    for (const auto& [col, e] : r.bounds)
      for (const auto& [cls, n] : e.cuts_by_class)
        if (std::find(classes.begin(), classes.end(), cls) == classes.end()) classes.push_back(cls);
  std::sort(classes.begin(), classes.end());
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"graph", "bound", "iterations", "total"};
  header.insert(header.end(), classes.begin(), classes.end());
  rows.push_back(header);
  for (const auto& r : records)
    for (std::string_view c : kBoundColumns) {
      auto it = r.bounds.find(std::string(c));
      if (it == r.bounds.end()) continue;
      int total = 0;
      for (const auto& [cls, n] : it->second.cuts_by_class) total += n;
      std::vector<std::string> row{r.graph, std::string(c), std::to_string(it->second.iterations),
                                   std::to_string(total)};
      for (const auto& cls : classes) {
        auto ct = it->second.cuts_by_class.find(cls);
        row.push_back(ct == it->second.cuts_by_class.end() ? "0" : std::to_string(ct->second));
      }
      rows.push_back(std::move(row));
    }
  if (format == TableFormat::text) return aligned(rows);
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_escape(row[i]);
    out += "\n";
  }
  return out;
}

void emit_tables(const std::vector<BoundReport>& records, TableFormat format, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::string ext = format == TableFormat::csv ? "csv" : format == TableFormat::json ? "json" : "txt";
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(std::filesystem::path(dir) / (name + "." + ext));
    if (!out) throw std::runtime_error("cannot write into '" + dir + "'");
    out << body;
  };
  write("bounds", render_table(records, format));
  write("cuts", render_cut_table(records, format));
}

// ---------------------------------------------------------------------------
// Pipelines

BoundReport cmd_pipeline(const RunConfig& cfg, const Graph& g, const std::string& graph_id,
                         const std::vector<std::string>& relaxations) {
  cfg.validate();
  if (relaxations.empty()) throw std::invalid_argument("no relaxations requested");
  BoundReport rep;
  rep.graph = graph_id;
  rep.n = g.order();
  rep.edges = g.size();
  rep.density = g.density();
  if (g.order() <= cfg.alpha_cap) {
    const auto res = exact_stability_number(g);
    rep.alpha = res.alpha;
    rep.alpha_exact = !res.timed_out;
  } else if (cfg.best_known_alpha) {
    rep.alpha = *cfg.best_known_alpha;
  }

  for (const auto& name : relaxations) {
    BoundEntry entry;
    std::string col;
    try {
      col = std::string(column_for(name));
      if (name == "theta" || name == "theta_plus") {
        const auto sdp = name == "theta" ? theta_base(g) : theta_plus_base(g);
        SolverParams sp = cfg.solver;
        sp.time_limit = std::min(sp.time_limit, cfg.cutting.time_limit);
        const auto sol = admm_solve(sdp, {}, sp);
        entry.bound = sol.valid_upper_bound;
        entry.solver_iterations = sol.iterations;
        entry.seconds = sol.seconds;
        entry.termination = std::string(to_string(sol.status));
      } else {
        const auto kind = relaxation_kind_from_string(name);
        const auto t0 = std::chrono::steady_clock::now();
        const auto sdp = build_lifted(g, kind, cfg.coefficients);
        entry.coefficient_seconds = seconds_since(t0);
        const auto run = run_cutting_plane(sdp, cfg.cutting, cfg.solver);
        entry.bound = run.final_bound();
        entry.iterations = run.iterations;
        for (int it : run.solver_iterations) entry.solver_iterations += it;
        entry.seconds = run.wall_time;
        entry.termination = std::string(to_string(run.termination));
        for (const auto& [cls, n] : run.cuts_by_class()) entry.cuts_by_class[std::string(to_string(cls))] = n;
        if (!cfg.output_dir.empty()) {
          std::filesystem::create_directories(cfg.output_dir);
          std::ofstream out(std::filesystem::path(cfg.output_dir) / (graph_id + "_" + name + ".json"));
          out << trajectory_json(run, graph_id, kind, cfg.cutting).dump(2) << "\n";
        }
      }
      if (entry.bound && !std::isfinite(*entry.bound)) {
        entry.bound.reset();
        entry.error = "no valid bound";
      }
      if (entry.bound && rep.alpha) entry.gap = pct_gap(*entry.bound, *rep.alpha);
    } catch (const std::exception& e) {
      entry.bound.reset();
      entry.error = e.what();
      if (col.empty()) col = name;
    }
    rep.bounds[col] = std::move(entry);
  }
  return rep;
}

BoundReport cmd_pipeline(const RunConfig& cfg, const std::string& graph_path,
                         const std::vector<std::string>& relaxations) {
  const auto g = read_graph_file(graph_path);
  return cmd_pipeline(cfg, g, std::filesystem::path(graph_path).stem().string(), relaxations);
}

namespace {

BoundReport mean_row(const std::vector<BoundReport>& cell, int n, double p) {
  BoundReport m;
  std::ostringstream id;
  id << "mean_n" << n << "_p" << p;
  m.graph = id.str();
  m.mean = true;
  m.n = n;
  m.samples = static_cast<int>(cell.size());
  if (cell.empty()) return m;
  double edges = 0, density = 0, alpha = 0;
  bool have_alpha = true;
  for (const auto& r : cell) {
    edges += r.edges;
    density += r.density;
    if (r.alpha) alpha += *r.alpha;
    else have_alpha = false;
  }
  m.edges = static_cast<int>(std::lround(edges / cell.size()));
  m.density = density / cell.size();
  if (have_alpha) m.alpha = alpha / cell.size();
  m.alpha_exact = std::all_of(cell.begin(), cell.end(), [](const auto& r) { return r.alpha_exact; });
  for (std::string_view c : kBoundColumns) {
    const std::string col(c);
    double b = 0, g = 0, secs = 0;
    int nb = 0, ng = 0, iters = 0;
    bool seen = false;
    BoundEntry e;
    for (const auto& r : cell) {
      auto it = r.bounds.find(col);
      if (it == r.bounds.end()) continue;
      seen = true;
      if (it->second.bound) {
        b += *it->second.bound;
        ++nb;
        secs += it->second.seconds;
        iters += it->second.iterations;
      }
      if (it->second.gap) {
        g += *it->second.gap;
        ++ng;
      }
      for (const auto& [cls, k] : it->second.cuts_by_class) e.cuts_by_class[cls] += k;
    }
    if (!seen) continue;
    if (nb) {
      e.bound = b / nb;
      e.seconds = secs / nb;
      e.iterations = static_cast<int>(std::lround(static_cast<double>(iters) / nb));
    }
    if (ng) e.gap = std::round(g / ng * 1000.0) / 1000.0;
    m.bounds[col] = std::move(e);
  }
  return m;
}

}  // namespace

std::vector<BoundReport> cmd_ensemble(const RunConfig& cfg, const std::vector<int>& ns,
                                      const std::vector<double>& ps, int seeds,
                                      const std::vector<std::string>& relaxations) {
  cfg.validate();
  if (seeds < 1) throw std::invalid_argument("seeds per cell must be positive");
  struct Job {
    int n;
    double p;
    std::uint64_t seed;
    std::optional<BoundReport> result;
  };
  std::vector<Job> jobs;
  for (int n : ns)
    for (double p : ps)
      for (int s = 0; s < seeds; ++s) jobs.push_back({n, p, cfg.seed + static_cast<std::uint64_t>(s), std::nullopt});

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      auto& job = jobs[k];
      std::ostringstream id;
      id << "er_n" << job.n << "_p" << job.p << "_s" << job.seed;
      try {
        job.result = cmd_pipeline(cfg, erdos_renyi(job.n, job.p, job.seed), id.str(), relaxations);
      } catch (const std::exception& e) {
        std::lock_guard lock(log_mutex);
        std::cerr << "ensemble: " << id.str() << " failed: " << e.what() << "\n";
      }
    }
  };
  const int nworkers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < nworkers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<BoundReport> out;
  std::size_t k = 0;
  for (int n : ns)
    for (double p : ps) {
      std::vector<BoundReport> cell;
      for (int s = 0; s < seeds; ++s, ++k)
        if (jobs[k].result) cell.push_back(*jobs[k].result);
      out.insert(out.end(), cell.begin(), cell.end());
      out.push_back(mean_row(cell, n, p));
    }
  return out;
}

}  // namespace liftbound
