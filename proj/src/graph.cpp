#include "liftbound/graph.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace liftbound {

Graph::Graph(int n) : Graph(n, std::span<const std::pair<int, int>>{}) {}

Graph::Graph(int n, std::span<const std::pair<int, int>> edges, std::vector<double> weights)
    : n_(n) {
  if (n < 0) throw std::invalid_argument("negative vertex count");
  adj_.assign(static_cast<std::size_t>(n) * n, 0);
  nbrs_.assign(n, {});
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw std::invalid_argument("vertex id out of range");
    if (a == b) throw std::invalid_argument("self-loop on vertex " + std::to_string(a));
    if (a > b) std::swap(a, b);
    auto& cell = adj_[static_cast<std::size_t>(a) * n + b];
    if (cell) continue;
    cell = 1;
    adj_[static_cast<std::size_t>(b) * n + a] = 1;
    edges_.push_back({a, b});
  }
  std::sort(edges_.begin(), edges_.end());
  for (const auto& e : edges_) {
    nbrs_[e.u].push_back(e.v);
    nbrs_[e.v].push_back(e.u);
  }
  for (auto& nb : nbrs_) std::sort(nb.begin(), nb.end());

  if (weights.empty()) {
    weights_.assign(n, 1.0);
  } else {
    if (static_cast<int>(weights.size()) != n) throw std::invalid_argument("weight vector size mismatch");
    for (double w : weights)
      if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be finite and nonnegative");
    weights_ = std::move(weights);
  }
}

bool Graph::unit_weights() const noexcept {
  return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w == 1.0; });
}

double Graph::density() const noexcept {
  if (n_ < 2) return 0.0;
  return 200.0 * static_cast<double>(edges_.size()) / (static_cast<double>(n_) * (n_ - 1));
}

Graph complement(const Graph& g) {
  std::vector<std::pair<int, int>> pairs;
  const int n = g.order();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!g.adjacent(i, j)) pairs.emplace_back(i, j);
  return Graph(n, pairs, g.weights());
}

Subgraph induced_subgraph(const Graph& g, std::span<const int> vertices) {
  std::vector<int> sorted(vertices.begin(), vertices.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int v : sorted)
    if (v < 0 || v >= g.order()) throw std::out_of_range("vertex " + std::to_string(v) + " outside graph");

  const int k = static_cast<int>(sorted.size());
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> w(k);
  for (int a = 0; a < k; ++a) {
    w[a] = g.weights()[sorted[a]];
    for (int b = a + 1; b < k; ++b)
      if (g.adjacent(sorted[a], sorted[b])) pairs.emplace_back(a, b);
  }
  return {Graph(k, pairs, std::move(w)), std::move(sorted)};
}

// ---------------------------------------------------------------------------
// Generators

namespace {

int circular_distance(int i, int j, int p) {
  const int d = std::abs(i - j);
  return std::min(d, p - d);
}

void check_web_params(int p, int q) {
  if (!(q > 1 && p > 2 * q + 1))
    throw std::invalid_argument("web/antiweb parameters need p > 2q+1 and q > 1");
}

}  // namespace

Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  return Graph(n, pairs);
}

Graph complete_bipartite(int a, int b) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) pairs.emplace_back(i, a + j);
  return Graph(a + b, pairs);
}

Graph cycle_graph(int k) {
  if (k < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i) pairs.emplace_back(i, (i + 1) % k);
  return Graph(k, pairs);
}

Graph web_graph(int p, int q) {
  check_web_params(p, q);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (circular_distance(i, j, p) >= q) pairs.emplace_back(i, j);
  return Graph(p, pairs);
}

Graph antiweb_graph(int p, int q) {
  check_web_params(p, q);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (circular_distance(i, j, p) <= q - 1) pairs.emplace_back(i, j);
  return Graph(p, pairs);
}

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability outside [0,1]");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < p) pairs.emplace_back(i, j);
    }
  return Graph(n, pairs);
}

Graph steiner_triple_stable_set_graph() {
  // Lines of AG(2,3); point (x,y) has id 3x+y.
  std::vector<std::array<int, 3>> triples;
  for (int m = 0; m < 3; ++m)
    for (int b = 0; b < 3; ++b) {
      std::array<int, 3> t{};
      for (int x = 0; x < 3; ++x) t[x] = 3 * x + (m * x + b) % 3;
      triples.push_back(t);
    }
  for (int c = 0; c < 3; ++c) triples.push_back({3 * c, 3 * c + 1, 3 * c + 2});

  const int incidences = static_cast<int>(triples.size()) * 3;
  std::vector<std::pair<int, int>> pairs;
  for (int t = 0; t < static_cast<int>(triples.size()); ++t) {
    for (int k = 0; k < 3; ++k) {
      pairs.emplace_back(3 * t + k, incidences + triples[t][k]);
      for (int l = k + 1; l < 3; ++l) pairs.emplace_back(3 * t + k, 3 * t + l);
    }
  }
  return Graph(incidences + 9, pairs);
}

// ---------------------------------------------------------------------------
// File formats

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
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

long parse_int(std::string_view tok, std::size_t line) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected integer, got '" + std::string(tok) + "'");
  return value;
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    f(++line_no, line);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

struct RawEdge {
  long u, v;
  std::size_t line;
};

Graph assemble(long n, const std::vector<RawEdge>& raw) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(raw.size());
  for (const auto& e : raw) {
    if (e.u < 1 || e.v < 1 || e.u > n || e.v > n) throw ParseError(e.line, "vertex id out of range");
    if (e.u == e.v) throw ParseError(e.line, "self-loop on vertex " + std::to_string(e.u));
    pairs.emplace_back(static_cast<int>(e.u - 1), static_cast<int>(e.v - 1));
  }
  return Graph(static_cast<int>(n), pairs);
}

Graph parse_dimacs(std::string_view text) {
  long n = -1;
  std::vector<RawEdge> raw;
  for_each_line(text, [&](std::size_t no, std::string_view line) {
    auto tok = split_ws(line);
    if (tok.empty() || tok[0] == "c") return;
    if (tok[0] == "p") {
      if (n >= 0) throw ParseError(no, "duplicate problem line");
      if (tok.size() != 4 || (tok[1] != "edge" && tok[1] != "col"))
        throw ParseError(no, "malformed header, expected 'p edge <n> <m>'");
      n = parse_int(tok[2], no);
      parse_int(tok[3], no);
      if (n < 0) throw ParseError(no, "malformed header, negative vertex count");
      return;
    }
    if (tok[0] == "e") {
      if (n < 0) throw ParseError(no, "edge line before header");
      if (tok.size() != 3) throw ParseError(no, "malformed edge line");
      raw.push_back({parse_int(tok[1], no), parse_int(tok[2], no), no});
      return;
    }
    throw ParseError(no, "unknown line type '" + std::string(tok[0]) + "'");
  });
  if (n < 0) throw ParseError(1, "malformed header, missing 'p edge' line");
  return assemble(n, raw);
}

Graph parse_edgelist(std::string_view text) {
  std::vector<RawEdge> raw;
  for_each_line(text, [&](std::size_t no, std::string_view line) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = split_ws(line);
    if (tok.empty()) return;
    if (tok.size() != 2) throw ParseError(no, "expected two integers");
    raw.push_back({parse_int(tok[0], no), parse_int(tok[1], no), no});
  });
  if (raw.empty()) return Graph(0);

  // The first line is a header "<n> <m>" when m equals the number of
  // remaining lines and every remaining id fits within n.
  long n = 0;
  const RawEdge head = raw.front();
  const long rest = static_cast<long>(raw.size()) - 1;
  bool header = head.v == rest && head.u >= 0;
  if (header) {
    for (std::size_t k = 1; k < raw.size(); ++k)
      if (raw[k].u > head.u || raw[k].v > head.u) header = false;
  }
  if (header) {
    n = head.u;
    raw.erase(raw.begin());
  } else {
    for (const auto& e : raw) n = std::max({n, e.u, e.v});
  }
  return assemble(n, raw);
}

}  // namespace

Graph parse_graph(std::string_view text, GraphFormat format) {
  return format == GraphFormat::dimacs ? parse_dimacs(text) : parse_edgelist(text);
}

Graph parse_graph_auto(std::string_view text) {
  bool dimacs = false;
  for_each_line(text, [&](std::size_t, std::string_view line) {
    auto tok = split_ws(line);
    if (!tok.empty() && tok[0] == "p") dimacs = true;
  });
  return parse_graph(text, dimacs ? GraphFormat::dimacs : GraphFormat::edgelist);
}

std::string write_graph(const Graph& g, GraphFormat format) {
  std::string out;
  if (format == GraphFormat::dimacs) {
    out += "p edge " + std::to_string(g.order()) + " " + std::to_string(g.size()) + "\n";
    for (const auto& e : g.edges()) out += "e " + std::to_string(e.u + 1) + " " + std::to_string(e.v + 1) + "\n";
  } else {
    out += std::to_string(g.order()) + " " + std::to_string(g.size()) + "\n";
    for (const auto& e : g.edges()) out += std::to_string(e.u + 1) + " " + std::to_string(e.v + 1) + "\n";
  }
  return out;
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph_auto(buf.str());
}

void write_graph_file(const Graph& g, const std::string& path, GraphFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << write_graph(g, format);
}

// ---------------------------------------------------------------------------
// Cliques

bool is_clique(const Graph& g, std::span<const int> members) {
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b)
      if (!g.adjacent(members[a], members[b])) return false;
  return true;
}

bool is_maximal_clique(const Graph& g, std::span<const int> members) {
  if (!is_clique(g, members)) return false;
  for (int v = 0; v < g.order(); ++v) {
    if (std::find(members.begin(), members.end(), v) != members.end()) continue;
    if (std::all_of(members.begin(), members.end(), [&](int u) { return g.adjacent(u, v); })) return false;
  }
  return true;
}

bool is_valid_cover(const Graph& g, const CliqueCover& cover) {
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(g.order()) * g.order(), 0);
  for (const auto& c : cover.cliques) {
    if (c.empty() || !is_maximal_clique(g, c)) return false;
    for (std::size_t a = 0; a < c.size(); ++a)
      for (std::size_t b = a + 1; b < c.size(); ++b) {
        covered[static_cast<std::size_t>(c[a]) * g.order() + c[b]] = 1;
        covered[static_cast<std::size_t>(c[b]) * g.order() + c[a]] = 1;
      }
  }
  return std::all_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) {
    return covered[static_cast<std::size_t>(e.u) * g.order() + e.v] != 0;
  });
}

CliqueCover greedy_clique_cover(const Graph& g) {
  const int n = g.order();
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(n) * n, 0);
  CliqueCover cover;
  for (const auto& e : g.edges()) {
    if (covered[static_cast<std::size_t>(e.u) * n + e.v]) continue;
    std::vector<int> clique{e.u, e.v};
    for (;;) {
      int pick = -1;
      for (int w : g.neighbors(e.u)) {
        if (w == e.v) continue;
        if (std::find(clique.begin(), clique.end(), w) != clique.end()) continue;
        if (std::all_of(clique.begin(), clique.end(), [&](int u) { return g.adjacent(u, w); })) {
          pick = w;
          break;
        }
      }
      if (pick < 0) break;
      clique.push_back(pick);
    }
    std::sort(clique.begin(), clique.end());
    for (std::size_t a = 0; a < clique.size(); ++a)
      for (std::size_t b = a + 1; b < clique.size(); ++b) {
        covered[static_cast<std::size_t>(clique[a]) * n + clique[b]] = 1;
        covered[static_cast<std::size_t>(clique[b]) * n + clique[a]] = 1;
      }
    cover.cliques.push_back(std::move(clique));
  }
  return cover;
}

namespace {

void bron_kerbosch(const Graph& g, std::vector<int>& r, std::vector<int> p, std::vector<int> x,
                   std::vector<std::vector<int>>& out) {
  if (p.empty() && x.empty()) {
    auto c = r;
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
    return;
  }
  int pivot = -1;
  std::size_t best = 0;
  for (const auto* set : {&p, &x})
    for (int u : *set) {
      std::size_t cnt = 0;
      for (int v : p) cnt += g.adjacent(u, v);
      if (pivot < 0 || cnt > best) {
        pivot = u;
        best = cnt;
      }
    }
  const auto candidates = p;
  for (int v : candidates) {
    if (g.adjacent(pivot, v)) continue;
    std::vector<int> np, nx;
    for (int u : p)
      if (g.adjacent(u, v)) np.push_back(u);
    for (int u : x)
      if (g.adjacent(u, v)) nx.push_back(u);
    r.push_back(v);
    bron_kerbosch(g, r, std::move(np), std::move(nx), out);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.push_back(v);
  }
}

}  // namespace

std::vector<std::vector<int>> all_maximal_cliques(const Graph& g) {
  std::vector<std::vector<int>> out;
  std::vector<int> r;
  std::vector<int> p(g.order());
  std::iota(p.begin(), p.end(), 0);
  bron_kerbosch(g, r, p, {}, out);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Stable sets

bool is_stable_set(const Graph& g, std::span<const int> members) {
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b)
      if (members[a] == members[b] || g.adjacent(members[a], members[b])) return false;
  return true;
}

std::vector<int> greedy_stable_set(const Graph& g) {
  const int n = g.order();
  std::vector<std::uint8_t> alive(n, 1);
  std::vector<int> deg(n);
  for (int i = 0; i < n; ++i) deg[i] = g.degree(i);
  std::vector<int> chosen;
  for (;;) {
    int pick = -1;
    for (int i = 0; i < n; ++i)
      if (alive[i] && (pick < 0 || deg[i] < deg[pick])) pick = i;
    if (pick < 0) break;
    chosen.push_back(pick);
    alive[pick] = 0;
    for (int u : g.neighbors(pick)) {
      if (!alive[u]) continue;
      alive[u] = 0;
      for (int w : g.neighbors(u)) --deg[w];
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

namespace {

// Tomita-style maximum clique search over bitset adjacency.
class MaxCliqueSearch {
 public:
  MaxCliqueSearch(const Graph& host_complement, double time_limit)
      : n_(host_complement.order()),
        words_((n_ + 63) / 64),
        adj_(static_cast<std::size_t>(n_) * words_, 0),
        deadline_(std::chrono::steady_clock::now()),
        unlimited_(!std::isfinite(time_limit)) {
    if (!unlimited_)
      deadline_ += std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(time_limit));
    for (const auto& e : host_complement.edges()) {
      set_bit(row(e.u), e.v);
      set_bit(row(e.v), e.u);
    }
    order_ = smallest_last_order(host_complement);
  }

  StabilityResult run() {
    best_.clear();
    std::vector<int> r;
    expand(r, order_);
    StabilityResult res;
    res.witness = best_;
    std::sort(res.witness.begin(), res.witness.end());
    res.alpha = static_cast<int>(best_.size());
    res.timed_out = timed_out_;
    return res;
  }

 private:
  std::uint64_t* row(int v) { return adj_.data() + static_cast<std::size_t>(v) * words_; }
  const std::uint64_t* row(int v) const { return adj_.data() + static_cast<std::size_t>(v) * words_; }
  static void set_bit(std::uint64_t* bits, int v) { bits[v >> 6] |= std::uint64_t{1} << (v & 63); }
  bool linked(int a, int b) const { return (row(a)[b >> 6] >> (b & 63)) & 1U; }

  // Vertices ordered so that the vertex of minimum degree in the remaining
  // graph is placed last; branching then sees high-degree vertices first.
  static std::vector<int> smallest_last_order(const Graph& h) {
    const int n = h.order();
    std::vector<int> deg(n);
    std::vector<std::uint8_t> gone(n, 0);
    for (int i = 0; i < n; ++i) deg[i] = h.degree(i);
    std::vector<int> order(n);
    for (int pos = n - 1; pos >= 0; --pos) {
      int pick = -1;
      for (int i = 0; i < n; ++i)
        if (!gone[i] && (pick < 0 || deg[i] < deg[pick])) pick = i;
      if (pick < 0) break;
      order[pos] = pick;
      gone[pick] = 1;
      for (int u : h.neighbors(pick))
        if (!gone[u]) --deg[u];
    }
    return order;
  }

  // Greedy sequential coloring of `p` in its given order; returns the vertices
  // sorted by color class with their color numbers (1-based).
  void color_sort(const std::vector<int>& p, std::vector<int>& sorted, std::vector<int>& colors) const {
    std::vector<std::vector<int>> classes;
    for (int v : p) {
      std::size_t k = 0;
      for (; k < classes.size(); ++k) {
        bool clash = false;
        for (int u : classes[k])
          if (linked(u, v)) {
            clash = true;
            break;
          }
        if (!clash) break;
      }
      if (k == classes.size()) classes.emplace_back();
      classes[k].push_back(v);
    }
    sorted.clear();
    colors.clear();
    for (std::size_t k = 0; k < classes.size(); ++k)
      for (int v : classes[k]) {
        sorted.push_back(v);
        colors.push_back(static_cast<int>(k) + 1);
      }
  }

  bool out_of_time() {
    if (unlimited_ || timed_out_) return timed_out_;
    if ((++nodes_ & 1023U) == 0 && std::chrono::steady_clock::now() > deadline_) timed_out_ = true;
    return timed_out_;
  }

  void expand(std::vector<int>& r, const std::vector<int>& p) {
    if (out_of_time()) return;
    std::vector<int> sorted, colors;
    color_sort(p, sorted, colors);
    std::vector<std::uint8_t> removed(sorted.size(), 0);
    for (int idx = static_cast<int>(sorted.size()) - 1; idx >= 0; --idx) {
      if (r.size() + static_cast<std::size_t>(colors[idx]) <= best_.size()) return;
      const int v = sorted[idx];
      r.push_back(v);
      std::vector<int> np;
      for (int k = 0; k < idx; ++k)
        if (!removed[k] && linked(v, sorted[k])) np.push_back(sorted[k]);
      if (np.empty()) {
        if (r.size() > best_.size()) best_ = r;
      } else {
        expand(r, np);
      }
      r.pop_back();
      removed[idx] = 1;
      if (timed_out_) return;
    }
  }

  int n_;
  int words_;
  std::vector<std::uint64_t> adj_;
  std::vector<int> order_;
  std::vector<int> best_;
  std::chrono::steady_clock::time_point deadline_;
  bool unlimited_;
  bool timed_out_ = false;
  std::uint64_t nodes_ = 0;
};

}  // namespace

StabilityResult exact_stability_number(const Graph& g, double time_limit_seconds) {
  if (g.order() == 0) return {};
  MaxCliqueSearch search(complement(g), time_limit_seconds);
  auto res = search.run();
  if (res.timed_out) {
    // Keep the better of the partial search and the greedy heuristic.
    auto greedy = greedy_stable_set(g);
    if (static_cast<int>(greedy.size()) > res.alpha) {
      res.alpha = static_cast<int>(greedy.size());
      res.witness = std::move(greedy);
    }
  }
  return res;
}

}  // namespace liftbound
