#include "liftbound/sdp_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace liftbound {

void SolverParams::validate() const {
  if (!(tol > 0)) throw std::invalid_argument("solver tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("solver max_iter must be positive");
  if (!(penalty > 0) || !(penalty_min > 0) || penalty_max < penalty_min)
    throw std::invalid_argument("solver penalty bounds are inconsistent");
  if (!(over_relaxation >= 1.0 && over_relaxation < 2.0))
    throw std::invalid_argument("over_relaxation must lie in [1, 2)");
  if (bound_every < 1) throw std::invalid_argument("bound_every must be positive");
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::time_limit: return "time_limit";
  }
  return "unknown";
}

double SdpSolution::pool_dual(int k) const {
  const std::size_t fixed = duals.size() - enforced.size();
  for (std::size_t e = 0; e < enforced.size(); ++e)
    if (enforced[e] == k) return duals[fixed + e];
  return 0.0;
}

Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw std::domain_error("psd_project: non-finite input");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw std::domain_error("psd_project: eigendecomposition failed");
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd out = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) throw std::domain_error("min_eigenvalue: non-finite input");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::domain_error("min_eigenvalue: eigendecomposition failed");
  return es.eigenvalues()(0);
}

double trace_bound_for(const SdpRelaxation& sdp) {
  if (!sdp.has_diag_links()) throw std::invalid_argument("trace bound needs Y00 = 1 and all diagonal links");
  return static_cast<double>(sdp.order);
}

namespace {

const SymRow& row_at(const SdpRelaxation& sdp, std::span<const int> enforced, std::size_t k) {
  if (k < sdp.fixed_rows.size()) return sdp.fixed_rows[k];
  const int p = enforced[k - sdp.fixed_rows.size()];
  if (p < 0 || static_cast<std::size_t>(p) >= sdp.pool_rows.size())
    throw std::out_of_range("enforced pool index out of range");
  return sdp.pool_rows[p];
}

// svec layout over the upper triangle, off-diagonals scaled by sqrt(2) so
// the Euclidean inner product matches the trace inner product.
struct SvecLayout {
  int order;
  std::vector<int> offset;
  explicit SvecLayout(int n) : order(n), offset(n) {
    int o = 0;
    for (int i = 0; i < n; ++i) {
      offset[i] = o - i;
      o += n - i;
    }
  }
  int size() const { return order * (order + 1) / 2; }
  int index(int i, int j) const {
    if (i > j) std::swap(i, j);
    return offset[i] + j;
  }

  Eigen::VectorXd svec(const Eigen::MatrixXd& m) const {
    Eigen::VectorXd v(size());
    for (int i = 0; i < order; ++i) {
      v(index(i, i)) = m(i, i);
      for (int j = i + 1; j < order; ++j) v(index(i, j)) = M_SQRT2 * 0.5 * (m(i, j) + m(j, i));
    }
    return v;
  }
  Eigen::MatrixXd smat(const Eigen::VectorXd& v) const {
    Eigen::MatrixXd m(order, order);
    for (int i = 0; i < order; ++i) {
      m(i, i) = v(index(i, i));
      for (int j = i + 1; j < order; ++j) m(i, j) = m(j, i) = v(index(i, j)) * M_SQRT1_2;
    }
    return m;
  }
  Eigen::VectorXd svec(const SymMatrix& a) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(size());
    for (const auto& e : a.entries()) v(index(e.i, e.j)) += (e.i == e.j ? 1.0 : M_SQRT2) * e.value;
    return v;
  }
};

// Row-normalized constraint operator over svec space.
struct Operator {
  Eigen::SparseMatrix<double, Eigen::RowMajor> a;
  Eigen::VectorXd b;
  std::vector<double> scale;   // original row = scale * normalized row
  std::vector<int> ineq;       // operator rows with <= sense
  std::vector<int> active;     // operator row -> constraint index
  std::vector<int> slot;       // constraint index -> operator row or -1
};

Operator build_operator(const SdpRelaxation& sdp, std::span<const int> enforced, const SvecLayout& lay) {
  Operator op;
  const std::size_t total = sdp.fixed_rows.size() + enforced.size();
  op.slot.assign(total, -1);
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> rhs;
  for (std::size_t k = 0; k < total; ++k) {
    const auto& row = row_at(sdp, enforced, k);
    if (row.matrix.entries().empty()) {
      const bool ok = row.sense == Sense::eq ? row.rhs == 0.0 : row.rhs >= 0.0;
      if (!ok) throw std::invalid_argument("relaxation contains an infeasible empty row");
      continue;
    }
    const double nrm = row.matrix.norm();
    const int r = static_cast<int>(op.active.size());
    for (const auto& e : row.matrix.entries())
      trip.emplace_back(r, lay.index(e.i, e.j), (e.i == e.j ? 1.0 : M_SQRT2) * e.value / nrm);
    rhs.push_back(row.rhs / nrm);
    op.scale.push_back(nrm);
    if (row.sense == Sense::le) op.ineq.push_back(r);
    op.slot[k] = r;
    op.active.push_back(static_cast<int>(k));
  }
  op.a.resize(static_cast<int>(op.active.size()), lay.size());
  op.a.setFromTriplets(trip.begin(), trip.end());
  op.a.makeCompressed();
  op.b = Eigen::Map<Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  return op;
}

double safeguard(const Operator& op, const SvecLayout& lay, const Eigen::VectorXd& y, const Eigen::VectorXd& c,
                 const Eigen::VectorXd& s, double trace_bound) {
  Eigen::VectorXd yc = y;
  for (int r : op.ineq) yc(r) = std::max(0.0, yc(r));
  const Eigen::VectorXd z = op.a.transpose() * yc - c - s.cwiseMax(0.0);
  const double lam = min_eigenvalue(lay.smat(z));
  return op.b.dot(yc) + trace_bound * std::max(0.0, -lam);
}

}  // namespace

double valid_upper_bound(const SdpRelaxation& sdp, std::span<const int> enforced, std::span<const double> duals,
                         const Eigen::MatrixXd& elementwise_dual, double trace_bound) {
  const std::size_t total = sdp.fixed_rows.size() + enforced.size();
  if (duals.size() != total) throw std::invalid_argument("dual vector size does not match the enforced rows");
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(sdp.order, sdp.order);
  double by = 0.0;
  for (std::size_t k = 0; k < total; ++k) {
    const auto& row = row_at(sdp, enforced, k);
    const double y = row.sense == Sense::le ? std::max(0.0, duals[k]) : duals[k];
    row.matrix.accumulate(z, y);
    by += y * row.rhs;
  }
  sdp.objective.accumulate(z, -1.0);
  if (elementwise_dual.size() > 0) {
    // only the nonneg entries may carry multipliers
    for (auto [i, j] : sdp.nonneg_entries) {
      const double v = std::max(0.0, 0.5 * (elementwise_dual(i, j) + elementwise_dual(j, i)));
      z(i, j) -= v;
      z(j, i) -= v;
    }
  }
  return by + trace_bound * std::max(0.0, -min_eigenvalue(z));
}

SdpSolution admm_solve(const SdpRelaxation& sdp, std::span<const int> enforced, const SolverParams& params,
                       const SdpSolution* warm) {
  params.validate();
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

  const SvecLayout lay(sdp.order);
  const Operator op = build_operator(sdp, enforced, lay);
  const int m = static_cast<int>(op.active.size());
  const int dim = lay.size();

  double trace_bound = params.trace_bound;
  if (trace_bound <= 0) trace_bound = sdp.has_diag_links() ? trace_bound_for(sdp) : 0.0;

  Eigen::VectorXd c = lay.svec(sdp.objective);
  const double cscale = c.norm() > 0 ? c.norm() : 1.0;
  c /= cscale;

  std::vector<int> mask;
  for (auto [i, j] : sdp.nonneg_entries) mask.push_back(lay.index(i, j));
  std::sort(mask.begin(), mask.end());
  mask.erase(std::unique(mask.begin(), mask.end()), mask.end());

  // (A A^T + D_I), independent of sigma.
  Eigen::SparseMatrix<double> gram = Eigen::SparseMatrix<double>(op.a * op.a.transpose());
  for (int r : op.ineq) gram.coeffRef(r, r) += 1.0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol;
  chol.compute(gram);
  if (chol.info() != Eigen::Success) {
    for (int r = 0; r < m; ++r) gram.coeffRef(r, r) += 1e-10;
    chol.compute(gram);
    if (chol.info() != Eigen::Success) throw std::runtime_error("constraint operator is rank deficient");
  }

  Eigen::VectorXd xv = Eigen::VectorXd::Zero(dim);  // primal iterate
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(dim);
  const int ni = static_cast<int>(op.ineq.size());
  Eigen::VectorXd t = Eigen::VectorXd::Zero(ni);   // copy of y_I kept >= 0
  Eigen::VectorXd w = Eigen::VectorXd::Zero(ni);   // primal slacks
  double sigma = params.penalty;

  if (warm) {
    if (warm->Y.rows() == sdp.order) xv = lay.svec(warm->Y);
    const std::size_t nfixed = sdp.fixed_rows.size();
    const std::size_t warm_fixed = warm->duals.size() - warm->enforced.size();
    for (int r = 0; r < m; ++r) {
      const std::size_t k = op.active[r];
      double d = 0.0;
      if (k < nfixed) {
        if (k < warm_fixed) d = warm->duals[k];
      } else {
        d = warm->pool_dual(enforced[k - nfixed]);
      }
      y(r) = d * op.scale[r] / cscale;
    }
    if (warm->elementwise_dual.rows() == sdp.order) {
      const Eigen::VectorXd sw = lay.svec(warm->elementwise_dual) / cscale;
      for (int idx : mask) s(idx) = std::max(0.0, sw(idx));
    }
    sigma = std::clamp(warm->penalty, params.penalty_min, params.penalty_max);
    const Eigen::VectorXd ax = op.a * xv;
    for (int q = 0; q < ni; ++q) {
      t(q) = std::max(0.0, y(op.ineq[q]));
      w(q) = std::max(0.0, op.b(op.ineq[q]) - ax(op.ineq[q]));
    }
    z = lay.svec(psd_project(lay.smat(Eigen::VectorXd(op.a.transpose() * y) - c - s)));
  }

  SdpSolution sol;
  sol.enforced.assign(enforced.begin(), enforced.end());
  double best_ub = std::numeric_limits<double>::infinity();
  double best_res = std::numeric_limits<double>::infinity();
  const double bnorm = op.b.norm();
  const double gamma = params.over_relaxation;

  auto check_bound = [&] {
    if (trace_bound <= 0) return;
    const double ub = cscale * safeguard(op, lay, y, c, s, trace_bound);
    if (std::isfinite(ub)) best_ub = std::min(best_ub, ub);
    sol.bound_history.push_back(best_ub);
  };

  Eigen::VectorXd ax = op.a * xv;
  Eigen::VectorXd rhs(m), wv(dim), v(dim);
  double pres = 0, dres = 0, gap = 0;
  int it = 0, next_gap_check = 0;
  sol.status = SolveStatus::max_iter;
  for (it = 1; it <= params.max_iter; ++it) {
    // y-step
    rhs = ax - op.b;
    for (int q = 0; q < ni; ++q) rhs(op.ineq[q]) += w(q);
    rhs /= sigma;
    rhs += op.a * (c + s + z);
    for (int q = 0; q < ni; ++q) rhs(op.ineq[q]) += t(q);
    y = chol.solve(rhs);

    wv = op.a.transpose() * y;
    wv -= c;
    // S-step on the nonneg entries
    s.setZero();
    for (int idx : mask) s(idx) = std::max(0.0, wv(idx) - z(idx) - xv(idx) / sigma);
    // Z-step
    v = wv - s - xv / sigma;
    z = lay.svec(psd_project(lay.smat(v)));
    // slack copy of y_I
    for (int q = 0; q < ni; ++q) t(q) = std::max(0.0, y(op.ineq[q]) - w(q) / sigma);

    const Eigen::VectorXd dual_gap = wv - s - z;
    xv -= gamma * sigma * dual_gap;
    double tres = 0.0;
    for (int q = 0; q < ni; ++q) {
      const double d = y(op.ineq[q]) - t(q);
      w(q) -= gamma * sigma * d;
      tres += d * d;
    }

    ax = op.a * xv;
    double p2 = 0.0;
    for (int r = 0; r < m; ++r) {
      const double d = ax(r) - op.b(r);
      p2 += d * d;
    }
    for (int r : op.ineq) {
      const double d = ax(r) - op.b(r);
      if (d < 0) p2 -= d * d;
    }
    for (int idx : mask)
      if (xv(idx) < 0) p2 += xv(idx) * xv(idx);
    pres = std::sqrt(std::max(0.0, p2)) / (1.0 + bnorm);
    dres = std::sqrt(dual_gap.squaredNorm() + tres) / 2.0;
    const double pobj = c.dot(xv), dobj = op.b.dot(y);
    gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    const double res = std::max(pres, dres);
    best_res = std::min(best_res, res);
    if (it % params.bound_every == 0) {
      check_bound();
      if (best_ub < params.target_bound) {
        sol.target_reached = true;
        sol.status = SolveStatus::converged;
        break;
      }
    }
    if (std::max(res, gap) < params.tol && it >= next_gap_check) {
      // residuals are small; also ask the safeguard to be tight
      if (trace_bound <= 0) {
        sol.status = SolveStatus::converged;
        break;
      }
      check_bound();
      const double pv = cscale * pobj;
      // pv above a certified bound is primal infeasibility: absolute test
      if (best_ub - pv <= params.tol * (1.0 + std::abs(pv)) && pv - best_ub <= params.tol) {
        sol.status = SolveStatus::converged;
        break;
      }
      next_gap_check = it + 10;
    }
    if (!std::isfinite(res) || (it > 1000 && res > 100.0 * best_res)) {
      sol.diverged = true;
      break;
    }
    if (params.adaptive_penalty && it % 10 == 0) {
      if (pres > 10.0 * dres) sigma = std::max(params.penalty_min, sigma / 2.0);
      else if (dres > 10.0 * pres) sigma = std::min(params.penalty_max, sigma * 2.0);
    }
    if (it % 16 == 0 && elapsed() > params.time_limit) {
      sol.status = SolveStatus::time_limit;
      break;
    }
  }
  sol.iterations = std::min(it, params.max_iter);
  if (std::isfinite(y.sum())) check_bound();
  if (sol.diverged) sol.status = SolveStatus::max_iter;
  if (!sol.target_reached && best_ub < params.target_bound) sol.target_reached = true;

  sol.Y = lay.smat(xv);
  sol.x.resize(sdp.order - 1);
  for (int i = 1; i < sdp.order; ++i) sol.x[i - 1] = sol.Y(0, i);
  sol.primal_value = cscale * c.dot(xv);
  sol.duals.assign(sdp.fixed_rows.size() + enforced.size(), 0.0);
  for (int r = 0; r < m; ++r) sol.duals[op.active[r]] = y(r) * cscale / op.scale[r];
  sol.elementwise_dual = lay.smat(s * cscale);
  sol.primal_residual = pres;
  sol.dual_residual = dres;
  sol.valid_upper_bound = best_ub;
  sol.penalty = sigma;
  sol.seconds = elapsed();
  return sol;
}

double solve_theta(const Graph& g, const SolverParams& params) {
  if (g.order() == 0) return 0.0;
  return admm_solve(theta_base(g), {}, params).valid_upper_bound;
}

double solve_theta_plus(const Graph& g, const SolverParams& params) {
  if (g.order() == 0) return 0.0;
  return admm_solve(theta_plus_base(g), {}, params).valid_upper_bound;
}

std::string format_solution(const SdpSolution& sol) {
  std::ostringstream out;
  out.precision(17);
  out << "value " << sol.primal_value << "\n";
  out << "valid_ub " << sol.valid_upper_bound << "\n";
  out << "status " << to_string(sol.status) << "\n";
  for (Eigen::Index i = 0; i < sol.Y.rows(); ++i) {
    for (Eigen::Index j = 0; j < sol.Y.cols(); ++j) out << (j ? " " : "") << sol.Y(i, j);
    out << "\n";
  }
  out << "duals";
  for (double d : sol.duals) out << " " << d;
  out << "\n";
  return out.str();
}

}  // namespace liftbound
