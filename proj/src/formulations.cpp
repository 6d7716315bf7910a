#include "liftbound/formulations.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <future>
#include <stdexcept>

#include "liftbound/lifting.hpp"
#include "liftbound/sdp_solver.hpp"

namespace liftbound {

double LinearRow::coefficient(int var) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), var,
                             [](const std::pair<int, double>& t, int v) { return t.first < v; });
  return it != terms.end() && it->first == var ? it->second : 0.0;
}

std::string_view to_string(CoefficientRule rule) {
  switch (rule) {
    case CoefficientRule::gamma: return "gamma";
    case CoefficientRule::theta: return "theta";
    case CoefficientRule::alpha: return "alpha";
  }
  return "gamma";
}

CoefficientRule coefficient_rule_from_string(std::string_view name) {
  if (name == "gamma") return CoefficientRule::gamma;
  if (name == "theta") return CoefficientRule::theta;
  if (name == "alpha") return CoefficientRule::alpha;
  throw std::invalid_argument("unknown coefficient rule '" + std::string(name) + "'");
}

LinearRelaxation build_frac(const Graph& g) {
  LinearRelaxation lp;
  lp.num_vars = g.order();
  lp.objective = g.weights();
  for (const auto& e : g.edges()) {
    LinearRow row;
    row.terms = {{e.u, 1.0}, {e.v, 1.0}};
    row.rhs = 1.0;
    row.label = "R_e_" + std::to_string(e.u + 1) + "_" + std::to_string(e.v + 1);
    row.origin = {RowOrigin::Kind::edge, e.u, e.v};
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

LinearRelaxation build_qstab(const Graph& g, const CliqueCover& cover) {
  if (!is_valid_cover(g, cover)) throw std::invalid_argument("clique cover is not a maximal-clique edge cover");
  LinearRelaxation lp;
  lp.num_vars = g.order();
  lp.objective = g.weights();
  for (std::size_t k = 0; k < cover.cliques.size(); ++k) {
    LinearRow row;
    for (int v : cover.cliques[k]) row.terms.emplace_back(v, 1.0);
    row.rhs = 1.0;
    row.label = "R_c_" + std::to_string(k + 1);
    row.origin = {RowOrigin::Kind::clique, static_cast<int>(k), -1};
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

int theta_coefficient(const Graph& h, double tol, int max_iter) {
  if (h.order() == 0) return 0;
  if (h.size() == 0) return h.order();
  const int lower = static_cast<int>(greedy_stable_set(h).size());
  SolverParams params;
  params.tol = tol;
  params.max_iter = max_iter;
  // floor(UB) == lower as soon as UB < lower + 1.
  params.target_bound = lower + 1.0;
  const auto sol = admm_solve(theta_base(h), {}, params);
  // The small offset only ever rounds up, which keeps r_i >= theta >= alpha.
  const int floored = static_cast<int>(std::floor(sol.valid_upper_bound + 1e-9));
  return std::clamp(floored, lower, h.order());
}

NodalCoefficient nodal_coefficient(const Graph& g, int vertex, const CoefficientSettings& settings) {
  const auto& nb = g.neighbors(vertex);
  if (nb.empty()) return {0, false};
  switch (settings.rule) {
    case CoefficientRule::gamma:
      return {static_cast<int>(nb.size()), false};
    case CoefficientRule::theta: {
      const auto sub = induced_subgraph(g, nb);
      return {theta_coefficient(sub.graph, settings.theta_tol, settings.theta_max_iter), false};
    }
    case CoefficientRule::alpha: {
      const auto sub = induced_subgraph(g, nb);
      const auto res = exact_stability_number(sub.graph, settings.alpha_time_limit);
      if (!res.timed_out) return {res.alpha, false};
      return {theta_coefficient(sub.graph, settings.theta_tol, settings.theta_max_iter), true};
    }
  }
  return {static_cast<int>(nb.size()), false};
}

LinearRelaxation build_nod(const Graph& g, const CoefficientSettings& settings) {
  const auto start = std::chrono::steady_clock::now();
  const int n = g.order();
  std::vector<NodalCoefficient> coef(n);

  const int threads = std::max(1, settings.threads);
  if (threads == 1 || settings.rule == CoefficientRule::gamma) {
    for (int i = 0; i < n; ++i) coef[i] = nodal_coefficient(g, i, settings);
  } else {
    // Vertices are dealt round-robin; each slot is written by one worker only.
    std::vector<std::future<void>> workers;
    for (int t = 0; t < threads; ++t)
      workers.push_back(std::async(std::launch::async, [&, t] {
        for (int i = t; i < n; i += threads) coef[i] = nodal_coefficient(g, i, settings);
      }));
    for (auto& w : workers) w.get();
  }

  LinearRelaxation lp;
  lp.num_vars = n;
  lp.objective = g.weights();
  NodalInfo info;
  info.rule = settings.rule;
  info.coefficients.resize(n);
  for (int i = 0; i < n; ++i) {
    info.coefficients[i] = coef[i].value;
    info.mixed = info.mixed || coef[i].timed_out;
    const auto& nb = g.neighbors(i);
    if (nb.empty()) continue;
    LinearRow row;
    for (int j : nb) row.terms.emplace_back(j, 1.0);
    row.terms.emplace_back(i, static_cast<double>(coef[i].value));
    std::sort(row.terms.begin(), row.terms.end());
    row.rhs = coef[i].value;
    row.label = "R_n_" + std::to_string(i + 1);
    row.origin = {RowOrigin::Kind::nodal, i, -1};
    lp.rows.push_back(std::move(row));
  }
  info.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  lp.nodal = std::move(info);
  return lp;
}

bool satisfies(const LinearRelaxation& lp, const std::vector<double>& x, double tol) {
  for (double v : x)
    if (v < -tol || v > 1.0 + tol) return false;
  for (const auto& row : lp.rows) {
    double lhs = 0.0;
    for (auto [j, a] : row.terms) lhs += a * x[j];
    if (lhs > row.rhs + tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// LP text format

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_terms(const std::vector<std::pair<int, double>>& terms) {
  std::string out;
  for (auto [j, a] : terms) {
    out += ' ';
    out += a < 0 ? '-' : '+';
    out += format_number(std::abs(a));
    out += " x" + std::to_string(j + 1);
  }
  return out;
}

RowOrigin origin_from_label(const std::string& label) {
  auto numbers = [&](std::size_t from) {
    std::vector<int> out;
    std::size_t pos = from;
    while (pos < label.size()) {
      std::size_t next = label.find('_', pos);
      if (next == std::string::npos) next = label.size();
      int v = 0;
      auto [p, ec] = std::from_chars(label.data() + pos, label.data() + next, v);
      if (ec != std::errc{} || p != label.data() + next) return std::vector<int>{};
      out.push_back(v);
      pos = next + 1;
    }
    return out;
  };
  if (label.rfind("R_e_", 0) == 0) {
    auto v = numbers(4);
    if (v.size() == 2) return {RowOrigin::Kind::edge, v[0] - 1, v[1] - 1};
  } else if (label.rfind("R_c_", 0) == 0) {
    auto v = numbers(4);
    if (v.size() == 1) return {RowOrigin::Kind::clique, v[0] - 1, -1};
  } else if (label.rfind("R_n_", 0) == 0) {
    auto v = numbers(4);
    if (v.size() == 1) return {RowOrigin::Kind::nodal, v[0] - 1, -1};
  }
  return {};
}

class LpLexer {
 public:
  LpLexer(std::string_view text) : text_(text) {}

  // Statements end with ';'. Returns false at end of input.
  bool next_statement(std::string& stmt, std::size_t& line) {
    stmt.clear();
    bool started = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        std::size_t end = text_.find('\n', pos_);
        if (end == std::string_view::npos) end = text_.size();
        comments_.emplace_back(text_.substr(pos_ + 2, end - pos_ - 2));
        pos_ = end;
        continue;
      }
      if (c == '\n') ++line_;
      ++pos_;
      if (c == ';') {
        line = start_line_;
        return true;
      }
      if (!started && !std::isspace(static_cast<unsigned char>(c))) {
        started = true;
        start_line_ = line_;
      }
      if (started) stmt += c;
    }
    for (char c : stmt)
      if (!std::isspace(static_cast<unsigned char>(c))) throw ParseError(start_line_, "statement missing ';'");
    return false;
  }

  const std::vector<std::string>& comments() const { return comments_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t start_line_ = 1;
  std::vector<std::string> comments_;
};

std::vector<std::string> tokens_of(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if ((c == '+' || c == '-') &&
               !(cur.size() > 1 && (cur.back() == 'e' || cur.back() == 'E') &&
                 std::isdigit(static_cast<unsigned char>(cur.front())))) {
      flush();
      out.emplace_back(1, c);
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

double parse_double(const std::string& tok, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v))
    throw ParseError(line, "bad number '" + tok + "'");
  return v;
}

// Parses "[+|-]<coef> x<j> ..." into sorted terms; num_vars grows as needed.
std::vector<std::pair<int, double>> parse_terms(const std::vector<std::string>& tok, std::size_t line,
                                                int& num_vars) {
  std::vector<std::pair<int, double>> terms;
  std::size_t k = 0;
  while (k < tok.size()) {
    double sign = 1.0;
    if (tok[k] == "+" || tok[k] == "-") {
      sign = tok[k] == "-" ? -1.0 : 1.0;
      ++k;
    }
    if (k >= tok.size()) throw ParseError(line, "incomplete term");
    // a bare variable has coefficient 1
    const bool bare = !tok[k].empty() && tok[k][0] == 'x';
    if (!bare && k + 1 >= tok.size()) throw ParseError(line, "incomplete term");
    const double coef = bare ? sign : sign * parse_double(tok[k], line);
    const std::string& var = bare ? tok[k] : tok[k + 1];
    if (var.size() < 2 || var[0] != 'x') throw ParseError(line, "expected variable, got '" + var + "'");
    int j = 0;
    auto [ptr, ec] = std::from_chars(var.data() + 1, var.data() + var.size(), j);
    if (ec != std::errc{} || ptr != var.data() + var.size() || j < 1)
      throw ParseError(line, "bad variable '" + var + "'");
    terms.emplace_back(j - 1, coef);
    num_vars = std::max(num_vars, j);
    k += bare ? 1 : 2;
  }
  if (terms.empty()) throw ParseError(line, "empty row");
  std::sort(terms.begin(), terms.end());
  for (std::size_t a = 1; a < terms.size(); ++a)
    if (terms[a].first == terms[a - 1].first) throw ParseError(line, "repeated variable in row");
  return terms;
}

}  // namespace

std::string serialize_lp(const LinearRelaxation& lp) {
  std::string out;
  out += "// vars " + std::to_string(lp.num_vars) + "\n";
  if (lp.nodal)
    out += "// nodal rule " + std::string(to_string(lp.nodal->rule)) + (lp.nodal->mixed ? " mixed" : "") + "\n";
  std::vector<std::pair<int, double>> obj;
  for (int j = 0; j < lp.num_vars; ++j)
    if (lp.objective[j] != 0.0) obj.emplace_back(j, lp.objective[j]);
  out += "max:" + format_terms(obj) + ";\n";
  for (const auto& row : lp.rows)
    out += row.label + ":" + format_terms(row.terms) + " <= " + format_number(row.rhs) + ";\n";
  return out;
}

LinearRelaxation parse_lp(std::string_view text) {
  LpLexer lex(text);
  LinearRelaxation lp;
  std::string stmt;
  std::size_t line = 0;
  int max_var = 0;
  bool have_obj = false;
  std::vector<std::pair<int, double>> obj_terms;
  while (lex.next_statement(stmt, line)) {
    const auto colon = stmt.find(':');
    if (colon == std::string::npos) throw ParseError(line, "missing ':'");
    std::string head = stmt.substr(0, colon);
    while (!head.empty() && std::isspace(static_cast<unsigned char>(head.back()))) head.pop_back();
    const std::string body = stmt.substr(colon + 1);
    if (!have_obj) {
      if (head != "max") throw ParseError(line, "first statement must be 'max:'");
      auto tok = tokens_of(body);
      if (!tok.empty()) obj_terms = parse_terms(tok, line, max_var);
      have_obj = true;
      continue;
    }
    if (head.empty() || head.find_first_of(" \t") != std::string::npos) throw ParseError(line, "bad row label");
    const auto le = body.find("<=");
    if (le == std::string::npos) throw ParseError(line, "row needs '<='");
    LinearRow row;
    row.label = head;
    row.terms = parse_terms(tokens_of(body.substr(0, le)), line, max_var);
    auto rhs_tok = tokens_of(body.substr(le + 2));
    std::string rhs;
    for (auto& t : rhs_tok) rhs += t;
    if (rhs.empty()) throw ParseError(line, "missing right-hand side");
    row.rhs = parse_double(rhs[0] == '+' ? rhs.substr(1) : rhs, line);
    row.origin = origin_from_label(row.label);
    lp.rows.push_back(std::move(row));
  }
  if (!have_obj) throw ParseError(1, "missing objective");

  int declared = 0;
  bool nodal = false, mixed = false;
  CoefficientRule rule = CoefficientRule::gamma;
  for (const auto& c : lex.comments()) {
    auto tok = tokens_of(c);
    if (tok.size() == 2 && tok[0] == "vars") declared = std::stoi(tok[1]);
    if (tok.size() >= 3 && tok[0] == "nodal" && tok[1] == "rule") {
      nodal = true;
      rule = coefficient_rule_from_string(tok[2]);
      mixed = tok.size() >= 4 && tok[3] == "mixed";
    }
  }
  lp.num_vars = std::max(declared, max_var);
  lp.objective.assign(lp.num_vars, 0.0);
  for (auto [j, a] : obj_terms) lp.objective[j] = a;
  if (nodal) {
    NodalInfo info;
    info.rule = rule;
    info.mixed = mixed;
    info.coefficients.assign(lp.num_vars, 0);
    for (const auto& row : lp.rows)
      if (row.origin.kind == RowOrigin::Kind::nodal && row.origin.a < lp.num_vars)
        info.coefficients[row.origin.a] = static_cast<int>(std::lround(row.coefficient(row.origin.a)));
    lp.nodal = std::move(info);
  }
  return lp;
}

}  // namespace liftbound
