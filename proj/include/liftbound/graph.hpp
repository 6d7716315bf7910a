#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace liftbound {

/// Unordered vertex pair, always stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Raised by the graph readers; carries the 1-based line of the offending input.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Simple undirected graph on vertices 0..n-1 with optional vertex weights.
///
/// Immutable after construction. Adjacency is kept both as a dense byte
/// matrix (constant-time membership) and as sorted neighbor lists.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  /// Duplicate pairs collapse; self-loops and out-of-range ids throw
  /// std::invalid_argument.
  Graph(int n, std::span<const std::pair<int, int>> edges, std::vector<double> weights = {});

  int order() const noexcept { return n_; }
  std::size_t size() const noexcept { return edges_.size(); }

  bool adjacent(int i, int j) const noexcept {
    return i != j && adj_[static_cast<std::size_t>(i) * n_ + j] != 0;
  }
  const std::vector<int>& neighbors(int i) const { return nbrs_.at(i); }
  int degree(int i) const { return static_cast<int>(nbrs_.at(i).size()); }

  /// Edges sorted lexicographically.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  bool unit_weights() const noexcept;

  /// Edge density in percent.
  double density() const noexcept;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_ && a.weights_ == b.weights_;
  }

 private:
  int n_ = 0;
  std::vector<std::uint8_t> adj_;
  std::vector<std::vector<int>> nbrs_;
  std::vector<Edge> edges_;
  std::vector<double> weights_;
};

Graph complement(const Graph& g);

/// Induced subgraph together with the map from new ids to original ids.
struct Subgraph {
  Graph graph;
  std::vector<int> original;  // original[k] = id in the host graph of new vertex k
};

/// Vertices are relabeled by sorted position. Throws std::out_of_range for
/// ids outside the host graph.
Subgraph induced_subgraph(const Graph& g, std::span<const int> vertices);

// Generators. All use unit weights.
Graph complete_graph(int n);
Graph complete_bipartite(int a, int b);
Graph cycle_graph(int k);
/// (p,q)-web: i ~ j iff circular distance >= q. Requires p > 2q+1, q > 1.
Graph web_graph(int p, int q);
/// (p,q)-antiweb: complement of the web, i ~ j iff 1 <= circular distance <= q-1.
Graph antiweb_graph(int p, int q);

/// G(n,p) with std::mt19937_64 seeded by `seed`. Pairs (i,j), i<j, are visited
/// in lexicographic order; each draws u = (rng() >> 11) * 2^-53 and the edge is
/// kept iff u < p.
Graph erdos_renyi(int n, double p, std::uint64_t seed);

/// Stable-set graph of the Steiner-triple covering problem on the affine plane
/// AG(2,3) (the unique STS(9)): one vertex per (triple, point) incidence, the
/// three incidences of a triple form a triangle, and incidence (T,c) is joined
/// to point vertex c. Isomorphic to the complement of DIMACS MANN_a9
/// (45 vertices, 72 edges, alpha = 16).
Graph steiner_triple_stable_set_graph();

// ---------------------------------------------------------------------------
// File formats (1-based ids on disk)

enum class GraphFormat { dimacs, edgelist };

Graph parse_graph(std::string_view text, GraphFormat format);
/// Format chosen from the content: any `p` line means DIMACS.
Graph parse_graph_auto(std::string_view text);
std::string write_graph(const Graph& g, GraphFormat format);

Graph read_graph_file(const std::string& path);
void write_graph_file(const Graph& g, const std::string& path, GraphFormat format);

// ---------------------------------------------------------------------------
// Cliques

struct CliqueCover {
  std::vector<std::vector<int>> cliques;  // each sorted ascending
};

bool is_clique(const Graph& g, std::span<const int> members);
bool is_maximal_clique(const Graph& g, std::span<const int> members);
/// Every set a maximal clique and every edge inside some set.
bool is_valid_cover(const Graph& g, const CliqueCover& cover);

/// Scans edges lexicographically; each uncovered edge is grown into a clique
/// by repeatedly adding the lowest-indexed vertex adjacent to all members.
CliqueCover greedy_clique_cover(const Graph& g);

/// All maximal cliques (Bron-Kerbosch with pivoting), each sorted. Exponential;
/// meant for small graphs.
std::vector<std::vector<int>> all_maximal_cliques(const Graph& g);

// ---------------------------------------------------------------------------
// Stable sets

struct StabilityResult {
  int alpha = 0;
  std::vector<int> witness;  // sorted stable set of size alpha
  bool timed_out = false;    // alpha is then only a lower bound
};

/// Exact stability number via branch-and-bound maximum clique on the
/// complement (greedy coloring bound, smallest-last initial order).
StabilityResult exact_stability_number(
    const Graph& g, double time_limit_seconds = std::numeric_limits<double>::infinity());

/// Minimum-degree greedy stable set; a cheap lower bound.
std::vector<int> greedy_stable_set(const Graph& g);

bool is_stable_set(const Graph& g, std::span<const int> members);

}  // namespace liftbound
