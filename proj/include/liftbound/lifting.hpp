#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "liftbound/formulations.hpp"
#include "liftbound/graph.hpp"

namespace liftbound {

// Lifted matrices have order n+1. Index 0 is the homogenizing coordinate,
// so Y(0,i) plays the role of x_i and Y(i,j) the role of X_ij (1-based
// graph vertices map to indices 1..n).

/// Sparse symmetric matrix stored as upper-triangle triplets (i <= j).
/// Inner products count each off-diagonal entry twice.
class SymMatrix {
 public:
  struct Entry {
    int i = 0;
    int j = 0;
    double value = 0.0;
    friend bool operator==(const Entry&, const Entry&) = default;
    friend auto operator<=>(const Entry& a, const Entry& b) {
      return a.i != b.i ? a.i <=> b.i : a.j <=> b.j;
    }
  };

  SymMatrix() = default;

  /// Adds `value` to entry (i,j); (i,j) and (j,i) address the same entry.
  void add(int i, int j, double value);
  /// Sorts, merges duplicates and drops exact zeros.
  SymMatrix& normalize();

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  double inner(const Eigen::MatrixXd& y) const;
  /// Frobenius norm of the full symmetric matrix.
  double norm() const;
  /// Accumulates scale * (full symmetric matrix) into `out`.
  void accumulate(Eigen::MatrixXd& out, double scale) const;

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::vector<Entry> entries_;
  bool normalized_ = true;
};

enum class Sense { le, eq };

/// Closed set of constraint classes; comments give the matching inequality.
enum class ConstraintClass {
  normalization,  // Y00 = 1
  diag_link,      // X_ii = x_i
  edge_zero,      // X_ij = 0 on edges
  nonedge_nonneg, // X_ij >= 0 on non-edges (also used for x_i >= 0)
  mccormick,      // bound-row products
  frac_lift_12,   // X_ik + X_jk <= x_k
  frac_lift_13,   // x_i + x_j + x_k <= 1 + X_ik + X_jk
  clique_var_19,  // sum_{i in C} X_ij - x_j <= 0, j outside C
  clique_comp_20, // (1 - x_j) times the clique row, j in C; redundant
  clique_comp_21, // sum_{i in C} (x_i - X_ij) + x_j <= 1, j outside C
  nod_lift_25,
  nod_lift_26,
  nod_comp_27,    // redundant; only emitted on request
  nod_comp_28,
  nod_comp_29,
  generic_lift_4, // x_i * (a^T x - b) <= 0
  generic_lift_5, // (1 - x_i) * (a^T x - b) <= 0
};

std::string_view to_string(ConstraintClass c);
ConstraintClass constraint_class_from_string(std::string_view name);
/// Matching inequality label ("(19)", "(25)", ...), empty when none.
std::string_view equation_tag(ConstraintClass c);

struct SymRow {
  SymMatrix matrix;
  double rhs = 0.0;
  Sense sense = Sense::le;
  ConstraintClass cls = ConstraintClass::generic_lift_4;
  std::string source;      // label of the linear row this came from
  int multiplier = -1;     // lifted index of the multiplying variable, -1 if none

  /// <A,Y> - rhs; positive means violated for a <= row.
  double violation(const Eigen::MatrixXd& y) const { return matrix.inner(y) - rhs; }
};

/// Doubly nonnegative relaxation  max <C,Y>  over symmetric Y of order n+1.
struct SdpRelaxation {
  int order = 1;
  SymMatrix objective;
  std::vector<SymRow> fixed_rows;  // always enforced
  std::vector<SymRow> pool_rows;   // cut-pool candidates
  /// Upper-triangle entries (i<j) constrained elementwise nonnegative.
  std::vector<std::pair<int, int>> nonneg_entries;
  std::string name;

  int vertices() const noexcept { return order - 1; }
  bool has_diag_links() const;
};

struct LiftOptions {
  /// Re-emit the rows the reduced descriptions drop as redundant
  /// (classes clique_comp_20 and nod_comp_27).
  bool emit_redundant = false;
};

/// Generic lift: every row times x_i and (1-x_i) for all i, bounds lifted to
/// McCormick rows, identical rows merged (first provenance kept). Fixed rows
/// are Y00 = 1 and the diagonal links; everything else goes to the pool.
SdpRelaxation m_plus_lift(const LinearRelaxation& lp);

/// Lifted pair before dedup: row times x_i and row times (1 - x_i).
std::pair<SymRow, SymRow> lift_row(const LinearRow& row, int var);
/// Row k of an LP embedded in row/column 0 of Y.
SymRow embed_row(const LinearRow& row);

/// SDP-theta+: normalization, diagonal links, edge zeros, nonnegativity on
/// non-edges and row/column 0, empty pool.
SdpRelaxation theta_plus_base(const Graph& g);
/// SDP-theta: as theta_plus_base without nonnegativity.
SdpRelaxation theta_base(const Graph& g);

SdpRelaxation lift_frac_pool(const Graph& g);
SdpRelaxation lift_qstab_reduced(const Graph& g, const CliqueCover& cover, const LiftOptions& opt = {});
/// `lp` must come from build_nod (nodal provenance); throws otherwise.
SdpRelaxation lift_nod_reduced(const Graph& g, const LinearRelaxation& lp, const LiftOptions& opt = {});

/// Y = (1,x)(1,x)^T.
Eigen::MatrixXd rank_one_lift(const std::vector<double>& x);

/// Largest violation of any fixed or pool row (and of nonnegativity) at Y.
double max_violation(const SdpRelaxation& sdp, const Eigen::MatrixXd& y, bool include_pool = true);

/// Text serialization:
///   order <n+1>
///   rows <count>
///   <row> <i> <j> <value>      one line per nonzero, row 0 = objective
///   ...
///   rhs <row> <sense> <fixed|pool> <class> <rhs> <source> <multiplier>
///   nonneg <i> <j>
std::string serialize_sdp(const SdpRelaxation& sdp);
SdpRelaxation parse_sdp(std::string_view text);

}  // namespace liftbound
