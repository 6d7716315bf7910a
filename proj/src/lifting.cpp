#include "liftbound/lifting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>

namespace liftbound {

// ---------------------------------------------------------------------------
// SymMatrix

void SymMatrix::add(int i, int j, double value) {
  if (i > j) std::swap(i, j);
  entries_.push_back({i, j, value});
  normalized_ = false;
}

SymMatrix& SymMatrix::normalize() {
  if (normalized_) return *this;
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const Entry& a, const Entry& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  std::vector<Entry> merged;
  merged.reserve(entries_.size());
  for (const auto& e : entries_) {
    if (!merged.empty() && merged.back().i == e.i && merged.back().j == e.j)
      merged.back().value += e.value;
    else
      merged.push_back(e);
  }
  std::erase_if(merged, [](const Entry& e) { return e.value == 0.0; });
  entries_ = std::move(merged);
  normalized_ = true;
  return *this;
}

double SymMatrix::inner(const Eigen::MatrixXd& y) const {
  double s = 0.0;
  for (const auto& e : entries_) s += (e.i == e.j ? 1.0 : 2.0) * e.value * y(e.i, e.j);
  return s;
}

double SymMatrix::norm() const {
  double s = 0.0;
  for (const auto& e : entries_) s += (e.i == e.j ? 1.0 : 2.0) * e.value * e.value;
  return std::sqrt(s);
}

void SymMatrix::accumulate(Eigen::MatrixXd& out, double scale) const {
  for (const auto& e : entries_) {
    out(e.i, e.j) += scale * e.value;
    if (e.i != e.j) out(e.j, e.i) += scale * e.value;
  }
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  SymMatrix out = a;
  for (const auto& e : b.entries_) out.add(e.i, e.j, e.value);
  out.normalize();
  return out;
}

// ---------------------------------------------------------------------------
// Class names

namespace {

struct ClassName {
  ConstraintClass cls;
  std::string_view name;
  std::string_view tag;
};

constexpr ClassName kClassNames[] = {
    {ConstraintClass::normalization, "normalization", ""},
    {ConstraintClass::diag_link, "diag_link", "(7)"},
    {ConstraintClass::edge_zero, "edge_zero", ""},
    {ConstraintClass::nonedge_nonneg, "nonedge_nonneg", "(11)"},
    {ConstraintClass::mccormick, "mccormick", "(14-17)"},
    {ConstraintClass::frac_lift_12, "frac_lift_12", "(12)"},
    {ConstraintClass::frac_lift_13, "frac_lift_13", "(13)"},
    {ConstraintClass::clique_var_19, "clique_var_19", "(19)"},
    {ConstraintClass::clique_comp_20, "clique_comp_20", "(20)"},
    {ConstraintClass::clique_comp_21, "clique_comp_21", "(21)"},
    {ConstraintClass::nod_lift_25, "nod_lift_25", "(25)"},
    {ConstraintClass::nod_lift_26, "nod_lift_26", "(26)"},
    {ConstraintClass::nod_comp_27, "nod_comp_27", "(27)"},
    {ConstraintClass::nod_comp_28, "nod_comp_28", "(28)"},
    {ConstraintClass::nod_comp_29, "nod_comp_29", "(29)"},
    {ConstraintClass::generic_lift_4, "generic_lift_4", "(4)"},
    {ConstraintClass::generic_lift_5, "generic_lift_5", "(5)"},
};

}  // namespace

std::string_view to_string(ConstraintClass c) {
  for (const auto& e : kClassNames)
    if (e.cls == c) return e.name;
  return "unknown";
}

std::string_view equation_tag(ConstraintClass c) {
  for (const auto& e : kClassNames)
    if (e.cls == c) return e.tag;
  return "";
}

ConstraintClass constraint_class_from_string(std::string_view name) {
  for (const auto& e : kClassNames)
    if (e.name == name) return e.cls;
  throw std::invalid_argument("unknown constraint class '" + std::string(name) + "'");
}

bool SdpRelaxation::has_diag_links() const {
  std::vector<std::uint8_t> seen(order, 0);
  bool normalization = false;
  for (const auto& r : fixed_rows) {
    if (r.cls == ConstraintClass::normalization) normalization = true;
    if (r.cls == ConstraintClass::diag_link && r.multiplier > 0 && r.multiplier < order) seen[r.multiplier] = 1;
  }
  return normalization && std::all_of(seen.begin() + 1, seen.end(), [](std::uint8_t s) { return s != 0; });
}

// ---------------------------------------------------------------------------
// Row builders

namespace {

// Lifted-index helpers: variable v (0-based) lives at index v+1.
constexpr int lifted(int v) { return v + 1; }

// Adds coefficient `c` on X_ab (or on x_a when b == 0) in the natural
// "coefficient of the scalar" sense.
void add_scalar(SymMatrix& m, int a, int b, double c) {
  if (a == b)
    m.add(a, a, c);
  else
    m.add(a, b, 0.5 * c);
}

SymRow make_row(SymMatrix m, double rhs, Sense sense, ConstraintClass cls, std::string source, int multiplier) {
  m.normalize();
  return {std::move(m), rhs, sense, cls, std::move(source), multiplier};
}

void add_fixed_rows(SdpRelaxation& sdp, const Graph& g) {
  const int n = g.order();
  {
    SymMatrix m;
    m.add(0, 0, 1.0);
    sdp.fixed_rows.push_back(make_row(std::move(m), 1.0, Sense::eq, ConstraintClass::normalization, "Y00", 0));
  }
  for (int i = 1; i <= n; ++i) {
    SymMatrix m;
    add_scalar(m, i, i, 1.0);
    add_scalar(m, 0, i, -1.0);
    sdp.fixed_rows.push_back(
        make_row(std::move(m), 0.0, Sense::eq, ConstraintClass::diag_link, "diag_" + std::to_string(i), i));
  }
  for (const auto& e : g.edges()) {
    SymMatrix m;
    add_scalar(m, lifted(e.u), lifted(e.v), 1.0);
    sdp.fixed_rows.push_back(make_row(std::move(m), 0.0, Sense::eq, ConstraintClass::edge_zero,
                                      "R_e_" + std::to_string(e.u + 1) + "_" + std::to_string(e.v + 1), -1));
  }
}

SymMatrix lifted_objective(const std::vector<double>& w) {
  SymMatrix c;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] != 0.0) add_scalar(c, 0, lifted(static_cast<int>(i)), w[i]);
  c.normalize();
  return c;
}

SdpRelaxation graph_base(const Graph& g, bool nonneg, std::string name) {
  SdpRelaxation sdp;
  sdp.order = g.order() + 1;
  sdp.name = std::move(name);
  sdp.objective = lifted_objective(g.weights());
  add_fixed_rows(sdp, g);
  if (nonneg) {
    for (int i = 1; i <= g.order(); ++i) sdp.nonneg_entries.emplace_back(0, i);
    for (int i = 0; i < g.order(); ++i)
      for (int j = i + 1; j < g.order(); ++j)
        if (!g.adjacent(i, j)) sdp.nonneg_entries.emplace_back(lifted(i), lifted(j));
    std::sort(sdp.nonneg_entries.begin(), sdp.nonneg_entries.end());
  }
  return sdp;
}

}  // namespace

std::pair<SymRow, SymRow> lift_row(const LinearRow& row, int var) {
  const int i = lifted(var);
  const double b = row.rhs;
  // x_i (a^T x - b) <= 0  ->  sum_j a_j X_ij - b x_i <= 0
  SymMatrix m4;
  for (auto [j, a] : row.terms) add_scalar(m4, i, lifted(j), a);
  add_scalar(m4, 0, i, -b);
  // (1 - x_i)(a^T x - b) <= 0  ->  sum_j a_j x_j - sum_j a_j X_ij + b x_i <= b
  SymMatrix m5;
  for (auto [j, a] : row.terms) {
    add_scalar(m5, 0, lifted(j), a);
    add_scalar(m5, i, lifted(j), -a);
  }
  add_scalar(m5, 0, i, b);
  return {make_row(std::move(m4), 0.0, Sense::le, ConstraintClass::generic_lift_4, row.label, i),
          make_row(std::move(m5), b, Sense::le, ConstraintClass::generic_lift_5, row.label, i)};
}

SymRow embed_row(const LinearRow& row) {
  SymMatrix m;
  for (auto [j, a] : row.terms) add_scalar(m, 0, lifted(j), a);
  return make_row(std::move(m), row.rhs, Sense::le, ConstraintClass::generic_lift_4, row.label, 0);
}

SdpRelaxation m_plus_lift(const LinearRelaxation& lp) {
  const int n = lp.num_vars;
  SdpRelaxation sdp;
  sdp.order = n + 1;
  sdp.name = "m_plus";
  sdp.objective = lifted_objective(lp.objective);
  {
    SymMatrix m;
    m.add(0, 0, 1.0);
    sdp.fixed_rows.push_back(make_row(std::move(m), 1.0, Sense::eq, ConstraintClass::normalization, "Y00", 0));
  }
  for (int i = 1; i <= n; ++i) {
    SymMatrix m;
    add_scalar(m, i, i, 1.0);
    add_scalar(m, 0, i, -1.0);
    sdp.fixed_rows.push_back(
        make_row(std::move(m), 0.0, Sense::eq, ConstraintClass::diag_link, "diag_" + std::to_string(i), i));
  }

  // Rows keyed by (entries, rhs, sense) for merging identical lifts.
  std::map<std::vector<double>, std::size_t> seen;
  auto push_unique = [&](SymRow row) {
    std::vector<double> key;
    key.reserve(3 * row.matrix.entries().size() + 2);
    for (const auto& e : row.matrix.entries()) {
      key.push_back(e.i);
      key.push_back(e.j);
      key.push_back(e.value);
    }
    key.push_back(row.rhs);
    key.push_back(row.sense == Sense::eq ? 1.0 : 0.0);
    if (row.matrix.empty() && row.rhs >= 0.0) return;  // 0 <= rhs holds trivially
    if (seen.emplace(std::move(key), sdp.pool_rows.size()).second) sdp.pool_rows.push_back(std::move(row));
  };

  std::vector<SymRow> fours, fives;
  for (const auto& row : lp.rows)
    for (int v = 0; v < n; ++v) {
      auto [r4, r5] = lift_row(row, v);
      fours.push_back(std::move(r4));
      fives.push_back(std::move(r5));
    }
  for (auto& r : fours) push_unique(std::move(r));
  for (auto& r : fives) push_unique(std::move(r));

  // Bounds  -x_v <= 0  and  x_v <= 1  multiplied by x_u and (1 - x_u).
  for (int v = 0; v < n; ++v) {
    LinearRow lower{{{v, -1.0}}, 0.0, "lb_" + std::to_string(v + 1), {}};
    LinearRow upper{{{v, 1.0}}, 1.0, "ub_" + std::to_string(v + 1), {}};
    for (int u = 0; u < n; ++u)
      for (const auto* bound : {&lower, &upper}) {
        auto [r4, r5] = lift_row(*bound, u);
        r4.cls = r5.cls = ConstraintClass::mccormick;
        push_unique(std::move(r4));
        push_unique(std::move(r5));
      }
  }
  return sdp;
}

SdpRelaxation theta_plus_base(const Graph& g) { return graph_base(g, true, "theta_plus"); }

SdpRelaxation theta_base(const Graph& g) { return graph_base(g, false, "theta"); }

SdpRelaxation lift_frac_pool(const Graph& g) {
  auto sdp = graph_base(g, true, "frac");
  const int n = g.order();
  for (auto cls : {ConstraintClass::frac_lift_12, ConstraintClass::frac_lift_13}) {
    for (const auto& e : g.edges()) {
      const std::string source = "R_e_" + std::to_string(e.u + 1) + "_" + std::to_string(e.v + 1);
      const int i = lifted(e.u), j = lifted(e.v);
      for (int kv = 0; kv < n; ++kv) {
        if (kv == e.u || kv == e.v) continue;
        // triangles: frac_lift_12 collapses to 0 <= x_k, frac_lift_13 to a clique row theta already implies
        if (g.adjacent(e.u, kv) && g.adjacent(e.v, kv)) continue;
        const int k = lifted(kv);
        SymMatrix m;
        if (cls == ConstraintClass::frac_lift_12) {
          // X_ik + X_jk - x_k <= 0
          add_scalar(m, i, k, 1.0);
          add_scalar(m, j, k, 1.0);
          add_scalar(m, 0, k, -1.0);
          sdp.pool_rows.push_back(make_row(std::move(m), 0.0, Sense::le, cls, source, k));
        } else {
          // x_i + x_j + x_k - X_ik - X_jk <= 1
          add_scalar(m, 0, i, 1.0);
          add_scalar(m, 0, j, 1.0);
          add_scalar(m, 0, k, 1.0);
          add_scalar(m, i, k, -1.0);
          add_scalar(m, j, k, -1.0);
          sdp.pool_rows.push_back(make_row(std::move(m), 1.0, Sense::le, cls, source, k));
        }
      }
    }
  }
  return sdp;
}

SdpRelaxation lift_qstab_reduced(const Graph& g, const CliqueCover& cover, const LiftOptions& opt) {
  if (!is_valid_cover(g, cover)) throw std::invalid_argument("clique cover is not a maximal-clique edge cover");
  auto sdp = graph_base(g, true, "qstab");
  const int n = g.order();
  std::vector<ConstraintClass> classes{ConstraintClass::clique_var_19, ConstraintClass::clique_comp_21};
  if (opt.emit_redundant) classes.push_back(ConstraintClass::clique_comp_20);
  for (auto cls : classes) {
    for (std::size_t c = 0; c < cover.cliques.size(); ++c) {
      const auto& clique = cover.cliques[c];
      const std::string source = "R_c_" + std::to_string(c + 1);
      std::vector<std::uint8_t> inside(n, 0);
      for (int v : clique) inside[v] = 1;
      for (int jv = 0; jv < n; ++jv) {
        const int j = lifted(jv);
        SymMatrix m;
        if (cls == ConstraintClass::clique_var_19 && !inside[jv]) {
          for (int v : clique) add_scalar(m, lifted(v), j, 1.0);
          add_scalar(m, 0, j, -1.0);
          sdp.pool_rows.push_back(make_row(std::move(m), 0.0, Sense::le, cls, source, j));
        } else if (cls == ConstraintClass::clique_comp_21 && !inside[jv]) {
          for (int v : clique) {
            add_scalar(m, 0, lifted(v), 1.0);
            add_scalar(m, lifted(v), j, -1.0);
          }
          add_scalar(m, 0, j, 1.0);
          sdp.pool_rows.push_back(make_row(std::move(m), 1.0, Sense::le, cls, source, j));
        } else if (cls == ConstraintClass::clique_comp_20 && inside[jv]) {
          for (int v : clique) {
            add_scalar(m, 0, lifted(v), 1.0);
            if (v != jv) add_scalar(m, lifted(v), j, -1.0);
          }
          sdp.pool_rows.push_back(make_row(std::move(m), 1.0, Sense::le, cls, source, j));
        }
      }
    }
  }
  return sdp;
}

SdpRelaxation lift_nod_reduced(const Graph& g, const LinearRelaxation& lp, const LiftOptions& opt) {
  if (!lp.nodal || static_cast<int>(lp.nodal->coefficients.size()) != g.order() || lp.num_vars != g.order())
    throw std::invalid_argument("nodal lift needs a relaxation built by build_nod for this graph");
  const int n = g.order();
  std::vector<int> r(n, -1);
  for (const auto& row : lp.rows) {
    if (row.origin.kind != RowOrigin::Kind::nodal || row.origin.a < 0 || row.origin.a >= n)
      throw std::invalid_argument("row '" + row.label + "' lacks nodal provenance");
    r[row.origin.a] = static_cast<int>(std::lround(row.rhs));
  }
  auto sdp = graph_base(g, true, std::string("nod_") + std::string(to_string(lp.nodal->rule)));

  std::vector<ConstraintClass> classes{ConstraintClass::nod_lift_25, ConstraintClass::nod_lift_26,
                                       ConstraintClass::nod_comp_28, ConstraintClass::nod_comp_29};
  if (lp.nodal->rule == CoefficientRule::gamma) classes.erase(classes.begin());
  if (opt.emit_redundant) classes.push_back(ConstraintClass::nod_comp_27);

  for (auto cls : classes) {
    for (int iv = 0; iv < n; ++iv) {
      if (r[iv] < 0) continue;  // isolated vertex: no nodal row
      const auto& nb = g.neighbors(iv);
      const double ri = r[iv];
      const int i = lifted(iv);
      const std::string source = "R_n_" + std::to_string(iv + 1);
      if (cls == ConstraintClass::nod_comp_27) {
        SymMatrix m;
        for (int h : nb) {
          add_scalar(m, 0, lifted(h), 1.0);
          add_scalar(m, lifted(h), i, -1.0);
        }
        add_scalar(m, 0, i, ri);
        sdp.pool_rows.push_back(make_row(std::move(m), ri, Sense::le, cls, source, i));
        continue;
      }
      for (int jv = 0; jv < n; ++jv) {
        if (jv == iv) continue;
        const bool neighbor = g.adjacent(iv, jv);
        const int j = lifted(jv);
        SymMatrix m;
        double rhs = 0.0;
        switch (cls) {
          case ConstraintClass::nod_lift_25:
            if (!neighbor) continue;
            // (1 - r_i) x_j + sum_{h in N(i)\j} X_jh + r_i X_ij <= 0
            add_scalar(m, 0, j, 1.0 - ri);
            for (int h : nb)
              if (h != jv) add_scalar(m, j, lifted(h), 1.0);
            add_scalar(m, i, j, ri);
            break;
          case ConstraintClass::nod_lift_26:
            if (neighbor) continue;
            // sum_{h in N(i)} X_jh + r_i X_ij - r_i x_j <= 0
            for (int h : nb) add_scalar(m, j, lifted(h), 1.0);
            add_scalar(m, i, j, ri);
            add_scalar(m, 0, j, -ri);
            break;
          case ConstraintClass::nod_comp_28:
            if (!neighbor) continue;
            // sum_{h in N(i)\j} (x_h - X_jh) + r_i x_i + r_i x_j - r_i X_ij <= r_i
            for (int h : nb)
              if (h != jv) {
                add_scalar(m, 0, lifted(h), 1.0);
                add_scalar(m, j, lifted(h), -1.0);
              }
            add_scalar(m, 0, i, ri);
            add_scalar(m, 0, j, ri);
            add_scalar(m, i, j, -ri);
            rhs = ri;
            break;
          case ConstraintClass::nod_comp_29:
            if (neighbor) continue;
            // sum_{h in N(i)} (x_h - X_jh) + r_i x_i + r_i x_j - r_i X_ij <= r_i
            for (int h : nb) {
              add_scalar(m, 0, lifted(h), 1.0);
              add_scalar(m, j, lifted(h), -1.0);
            }
            add_scalar(m, 0, i, ri);
            add_scalar(m, 0, j, ri);
            add_scalar(m, i, j, -ri);
            rhs = ri;
            break;
          default:
            continue;
        }
        sdp.pool_rows.push_back(make_row(std::move(m), rhs, Sense::le, cls, source, j));
      }
    }
  }
  return sdp;
}

Eigen::MatrixXd rank_one_lift(const std::vector<double>& x) {
  Eigen::VectorXd v(x.size() + 1);
  v(0) = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) v(i + 1) = x[i];
  return v * v.transpose();
}

double max_violation(const SdpRelaxation& sdp, const Eigen::MatrixXd& y, bool include_pool) {
  double worst = 0.0;
  auto check = [&](const SymRow& r) {
    const double v = r.violation(y);
    worst = std::max(worst, r.sense == Sense::eq ? std::abs(v) : v);
  };
  for (const auto& r : sdp.fixed_rows) check(r);
  if (include_pool)
    for (const auto& r : sdp.pool_rows) check(r);
  for (auto [i, j] : sdp.nonneg_entries) worst = std::max(worst, -y(i, j));
  return worst;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T to_number(std::string_view tok, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, "bad number '" + std::string(tok) + "'");
  return v;
}

}  // namespace

std::string serialize_sdp(const SdpRelaxation& sdp) {
  std::string out;
  const std::size_t rows = sdp.fixed_rows.size() + sdp.pool_rows.size();
  out += "order " + std::to_string(sdp.order) + "\n";
  out += "rows " + std::to_string(rows) + "\n";
  auto emit = [&](std::size_t idx, const SymMatrix& m) {
    for (const auto& e : m.entries())
      out += std::to_string(idx) + " " + std::to_string(e.i) + " " + std::to_string(e.j) + " " + num(e.value) + "\n";
  };
  emit(0, sdp.objective);
  std::size_t idx = 1;
  for (const auto& r : sdp.fixed_rows) emit(idx++, r.matrix);
  for (const auto& r : sdp.pool_rows) emit(idx++, r.matrix);
  idx = 1;
  auto table = [&](const SymRow& r, const char* group) {
    out += "rhs " + std::to_string(idx++) + " " + (r.sense == Sense::eq ? "eq" : "le") + " " + group + " " +
           std::string(to_string(r.cls)) + " " + num(r.rhs) + " " + (r.source.empty() ? "-" : r.source) + " " +
           std::to_string(r.multiplier) + "\n";
  };
  for (const auto& r : sdp.fixed_rows) table(r, "fixed");
  for (const auto& r : sdp.pool_rows) table(r, "pool");
  for (auto [i, j] : sdp.nonneg_entries) out += "nonneg " + std::to_string(i) + " " + std::to_string(j) + "\n";
  return out;
}

SdpRelaxation parse_sdp(std::string_view text) {
  SdpRelaxation sdp;
  std::size_t rows = 0;
  bool have_order = false, have_rows = false;
  std::vector<SymMatrix> mats;
  struct Meta {
    Sense sense;
    bool fixed;
    ConstraintClass cls;
    double rhs;
    std::string source;
    int multiplier;
  };
  std::vector<std::optional<Meta>> meta;

  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto tok = words(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (tok.empty() || tok[0].starts_with('#')) continue;
    if (tok[0] == "order") {
      if (tok.size() != 2) throw ParseError(line_no, "malformed order line");
      sdp.order = to_number<int>(tok[1], line_no);
      if (sdp.order < 1) throw ParseError(line_no, "order must be positive");
      have_order = true;
    } else if (tok[0] == "rows") {
      if (tok.size() != 2 || !have_order) throw ParseError(line_no, "malformed rows line");
      rows = to_number<std::size_t>(tok[1], line_no);
      mats.assign(rows + 1, {});
      meta.assign(rows + 1, std::nullopt);
      have_rows = true;
    } else if (tok[0] == "rhs") {
      if (!have_rows || tok.size() != 8) throw ParseError(line_no, "malformed rhs line");
      const auto idx = to_number<std::size_t>(tok[1], line_no);
      if (idx < 1 || idx > rows) throw ParseError(line_no, "row index out of range");
      if (tok[2] != "eq" && tok[2] != "le") throw ParseError(line_no, "sense must be eq or le");
      if (tok[3] != "fixed" && tok[3] != "pool") throw ParseError(line_no, "group must be fixed or pool");
      ConstraintClass cls;
      try {
        cls = constraint_class_from_string(tok[4]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
      }
      meta[idx] = Meta{tok[2] == "eq" ? Sense::eq : Sense::le, tok[3] == "fixed", cls,
                       to_number<double>(tok[5], line_no), tok[6] == "-" ? std::string{} : std::string(tok[6]),
                       to_number<int>(tok[7], line_no)};
    } else if (tok[0] == "nonneg") {
      if (tok.size() != 3) throw ParseError(line_no, "malformed nonneg line");
      int i = to_number<int>(tok[1], line_no), j = to_number<int>(tok[2], line_no);
      if (i > j) std::swap(i, j);
      if (i < 0 || j >= sdp.order || i == j) throw ParseError(line_no, "nonneg entry out of range");
      sdp.nonneg_entries.emplace_back(i, j);
    } else {
      if (!have_rows || tok.size() != 4) throw ParseError(line_no, "malformed entry line");
      const auto idx = to_number<std::size_t>(tok[0], line_no);
      const int i = to_number<int>(tok[1], line_no), j = to_number<int>(tok[2], line_no);
      if (idx > rows) throw ParseError(line_no, "row index out of range");
      if (i < 0 || j < 0 || i >= sdp.order || j >= sdp.order) throw ParseError(line_no, "matrix index out of range");
      mats[idx].add(i, j, to_number<double>(tok[3], line_no));
    }
  }
  if (!have_order || !have_rows) throw ParseError(line_no, "missing order/rows header");
  for (auto& m : mats) m.normalize();
  sdp.objective = std::move(mats[0]);
  for (std::size_t idx = 1; idx <= rows; ++idx) {
    if (!meta[idx]) throw ParseError(line_no, "row " + std::to_string(idx) + " has no rhs line");
    const auto& m = *meta[idx];
    SymRow row{std::move(mats[idx]), m.rhs, m.sense, m.cls, m.source, m.multiplier};
    (m.fixed ? sdp.fixed_rows : sdp.pool_rows).push_back(std::move(row));
  }
  return sdp;
}

}  // namespace liftbound
