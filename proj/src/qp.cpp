#include "strider/qp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace strider::qp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

int VariableLayout::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (names[i] == name) return i;
  throw std::out_of_range("VariableLayout: no slot named " + name);
}

namespace {

nlohmann::json matrix_json(const MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json vector_json(const VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

// One-sided constraint n'y >= d in the reduced space.
struct Row {
  VectorXd normal;
  double rhs = 0.0;
  int source = -1;   // original inequality row
  bool is_upper = false;
  double scale = 1.0;  // norm the row was divided by
};

struct KktDirections {
  VectorXd z;  // primal step
  VectorXd r;  // dual rate for active multipliers
};

}  // namespace

nlohmann::json QpProblem::to_json() const {
  nlohmann::json j;
  j["hessian"] = matrix_json(hessian);
  j["linear_cost"] = vector_json(linear_cost);
  j["eq_matrix"] = matrix_json(eq_matrix);
  j["eq_rhs"] = vector_json(eq_rhs);
  j["ineq_matrix"] = matrix_json(ineq_matrix);
  nlohmann::json lo = nlohmann::json::array(), up = nlohmann::json::array();
  for (Eigen::Index i = 0; i < ineq_lower.size(); ++i) {
    lo.push_back(std::isfinite(ineq_lower(i)) ? nlohmann::json(ineq_lower(i))
                                              : nlohmann::json("-inf"));
    up.push_back(std::isfinite(ineq_upper(i)) ? nlohmann::json(ineq_upper(i))
                                              : nlohmann::json("inf"));
  }
  j["ineq_lower"] = lo;
  j["ineq_upper"] = up;
  j["variables"] = layout.names;
  return j;
}

nlohmann::json QpSolution::to_json() const {
  nlohmann::json j;
  j["values"] = vector_json(values);
  j["status"] = status_name(status);
  j["objective"] = objective;
  j["kkt_residual"] = kkt_residual;
  j["iterations"] = iterations;
  j["regularization"] = regularization;
  return j;
}

QpSolution solve_qp(const QpProblem& p, const SolverOptions& opt) {
  const int n = p.num_vars();
  if (p.hessian.cols() != n || p.linear_cost.size() != n)
    throw std::invalid_argument("solve_qp: hessian/linear_cost dimension mismatch");
  const int me = static_cast<int>(p.eq_matrix.rows());
  const int mi = static_cast<int>(p.ineq_matrix.rows());
  if (me > 0 && p.eq_matrix.cols() != n)
    throw std::invalid_argument("solve_qp: eq_matrix dimension mismatch");
  if (p.eq_rhs.size() != me) throw std::invalid_argument("solve_qp: eq_rhs size mismatch");
  if (mi > 0 && p.ineq_matrix.cols() != n)
    throw std::invalid_argument("solve_qp: ineq_matrix dimension mismatch");
  if (p.ineq_lower.size() != mi || p.ineq_upper.size() != mi)
    throw std::invalid_argument("solve_qp: ineq bound size mismatch");
  if (!p.layout.names.empty() && p.layout.size() != n)
    throw std::invalid_argument("solve_qp: layout size mismatch");

  QpSolution sol;
  sol.values = VectorXd::Zero(n);

  auto finish = [&](SolveStatus status, const VectorXd& x, const VectorXd& mu_lower,
                    const VectorXd& mu_upper) {
    sol.status = status;
    sol.values = x;
    sol.objective = 0.5 * x.dot(p.hessian * x) + p.linear_cost.dot(x);
    if (status != SolveStatus::Optimal) {
      sol.kkt_residual = kInf;
      return sol;
    }
    VectorXd res = p.hessian * x + p.linear_cost;
    double comp = 0.0, viol = 0.0;
    for (int i = 0; i < mi; ++i) {
      const double ax = p.ineq_matrix.row(i).dot(x);
      if (std::isfinite(p.ineq_lower(i))) {
        res -= mu_lower(i) * p.ineq_matrix.row(i).transpose();
        comp = std::max(comp, std::abs(mu_lower(i) * (ax - p.ineq_lower(i))));
        viol = std::max(viol, p.ineq_lower(i) - ax);
      }
      if (std::isfinite(p.ineq_upper(i))) {
        res += mu_upper(i) * p.ineq_matrix.row(i).transpose();
        comp = std::max(comp, std::abs(mu_upper(i) * (p.ineq_upper(i) - ax)));
        viol = std::max(viol, ax - p.ineq_upper(i));
      }
    }
    double stat = 0.0;
    if (me > 0) {
      // equality multipliers absorb the range(A_eq') component of the residual
      VectorXd lambda = p.eq_matrix.transpose()
                            .colPivHouseholderQr()
                            .solve(-res);
      stat = (res + p.eq_matrix.transpose() * lambda).lpNorm<Eigen::Infinity>();
      viol = std::max(viol, (p.eq_matrix * x - p.eq_rhs).lpNorm<Eigen::Infinity>());
    } else {
      stat = res.lpNorm<Eigen::Infinity>();
    }
    sol.kkt_residual = std::max({stat, viol, comp});
    return sol;
  };

  // Eliminate equalities: x = x0 + Z y with Z an orthonormal kernel basis.
  VectorXd x0 = VectorXd::Zero(n);
  MatrixXd Z = MatrixXd::Identity(n, n);
  if (me > 0) {
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(p.eq_matrix);
    x0 = cod.solve(p.eq_rhs);
    const double scale = std::max(1.0, p.eq_rhs.lpNorm<Eigen::Infinity>());
    if ((p.eq_matrix * x0 - p.eq_rhs).lpNorm<Eigen::Infinity>() > 1e-9 * scale)
      return finish(SolveStatus::Infeasible, x0, VectorXd::Zero(mi), VectorXd::Zero(mi));
    Eigen::ColPivHouseholderQR<MatrixXd> qr(p.eq_matrix.transpose());
    const int rank = static_cast<int>(qr.rank());
    if (rank >= n) {
      Z.resize(n, 0);
    } else {
      MatrixXd q = qr.householderQ();
      Z = q.rightCols(n - rank);
    }
  }
  const int nf = static_cast<int>(Z.cols());

  // One-sided normalized constraints in the reduced space.
  std::vector<Row> rows;
  rows.reserve(2 * static_cast<size_t>(mi));
  for (int i = 0; i < mi; ++i) {
    const VectorXd base_row = p.ineq_matrix.row(i).transpose();
    const double fixed = base_row.dot(x0);
    VectorXd reduced = nf > 0 ? VectorXd(Z.transpose() * base_row) : VectorXd();
    const double nrm = nf > 0 ? reduced.norm() : 0.0;
    auto add = [&](bool is_upper) {
      const double bound = is_upper ? p.ineq_upper(i) : p.ineq_lower(i);
      if (!std::isfinite(bound)) return true;
      const double sign = is_upper ? -1.0 : 1.0;
      const double d = sign * (bound - fixed);
      if (nrm < 1e-13) return d <= opt.feasibility_tol;  // constant on the manifold
      Row r;
      r.normal = sign / nrm * reduced;
      r.rhs = d / nrm;
      r.source = i;
      r.is_upper = is_upper;
      r.scale = nrm;
      rows.push_back(std::move(r));
      return true;
    };
    if (!add(false) || !add(true))
      return finish(SolveStatus::Infeasible, x0, VectorXd::Zero(mi), VectorXd::Zero(mi));
  }

  VectorXd mu_lower = VectorXd::Zero(mi), mu_upper = VectorXd::Zero(mi);
  if (nf == 0)
    return finish(SolveStatus::Optimal, x0, mu_lower, mu_upper);

  // Reduced objective with a jitter ladder in case the projected Hessian is
  // only semidefinite.
  MatrixXd hr = Z.transpose() * p.hessian * Z;
  hr = 0.5 * (hr + hr.transpose()).eval();
  const VectorXd gr = Z.transpose() * (p.linear_cost + p.hessian * x0);
  const double hscale = std::max(1.0, hr.diagonal().cwiseAbs().maxCoeff());
  Eigen::LLT<MatrixXd> llt(hr);
  for (double jit = 1e-12; llt.info() != Eigen::Success && jit <= 1e-6; jit *= 100.0) {
    llt.compute(hr + jit * hscale * MatrixXd::Identity(nf, nf));
    if (llt.info() == Eigen::Success) sol.regularization = jit * hscale;
  }
  if (llt.info() != Eigen::Success)
    return finish(SolveStatus::MaxIter, x0, mu_lower, mu_upper);

  VectorXd y = llt.solve(-gr);
  std::vector<int> active;
  VectorXd mu(0);

  const int m = static_cast<int>(rows.size());
  std::vector<char> is_active(m, 0);
  const double tol_v = opt.feasibility_tol;

  auto directions = [&](const VectorXd& np) {
    KktDirections d;
    const VectorXd hin = llt.solve(np);
    const int k = static_cast<int>(active.size());
    if (k == 0) {
      d.z = hin;
      d.r.resize(0);
      return d;
    }
    MatrixXd nmat(nf, k);
    for (int j = 0; j < k; ++j) nmat.col(j) = rows[active[j]].normal;
    const MatrixXd hin_n = llt.solve(nmat);
    const MatrixXd s = nmat.transpose() * hin_n;
    d.r = s.ldlt().solve(nmat.transpose() * hin);
    d.z = hin - hin_n * d.r;
    return d;
  };

  int iter = 0;
  while (true) {
    // most violated inactive constraint
    int pick = -1;
    double worst = -tol_v;
    for (int i = 0; i < m; ++i) {
      if (is_active[i]) continue;
      const double s = rows[i].normal.dot(y) - rows[i].rhs;
      if (s < worst) {
        worst = s;
        pick = i;
      }
    }
    if (pick < 0) break;  // feasible and stationary -> optimal

    double u_pending = 0.0;
    bool added = false;
    while (!added) {
      if (++iter > opt.max_iterations)
        return finish(SolveStatus::MaxIter, x0 + Z * y, mu_lower, mu_upper);
      const KktDirections d = directions(rows[pick].normal);
      const double npz = rows[pick].normal.dot(d.z);
      const double s_p = rows[pick].normal.dot(y) - rows[pick].rhs;

      // blocking constraint along the dual step
      double t1 = kInf;
      int blocker = -1;
      for (int j = 0; j < static_cast<int>(active.size()); ++j) {
        if (d.r.size() > j && d.r(j) > 1e-12) {
          const double t = mu(j) / d.r(j);
          if (t < t1) {
            t1 = t;
            blocker = j;
          }
        }
      }

      if (npz <= 1e-11) {
        if (!std::isfinite(t1))
          return finish(SolveStatus::Infeasible, x0 + Z * y, mu_lower, mu_upper);
        for (int j = 0; j < static_cast<int>(active.size()); ++j) mu(j) -= t1 * d.r(j);
        u_pending += t1;
      } else {
        const double t2 = -s_p / npz;
        const double t = std::min(t1, t2);
        y += t * d.z;
        for (int j = 0; j < static_cast<int>(active.size()); ++j) mu(j) -= t * d.r(j);
        u_pending += t;
        if (t2 <= t1) {
          active.push_back(pick);
          is_active[pick] = 1;
          VectorXd next(mu.size() + 1);
          next.head(mu.size()) = mu;
          next(mu.size()) = u_pending;
          mu = next;
          added = true;
          break;
        }
      }
      // drop the blocking constraint and retry
      is_active[active[blocker]] = 0;
      active.erase(active.begin() + blocker);
      VectorXd next(mu.size() - 1);
      for (int j = 0, w = 0; j < static_cast<int>(mu.size()); ++j) {
        if (j == blocker) continue;
        next(w++) = mu(j);
      }
      mu = next;
    }
  }

  for (int j = 0; j < static_cast<int>(active.size()); ++j) {
    const Row& r = rows[active[j]];
    const double m_orig = mu(j) / r.scale;
    if (r.is_upper)
      mu_upper(r.source) += m_orig;
    else
      mu_lower(r.source) += m_orig;
  }
  sol.iterations = iter;
  return finish(SolveStatus::Optimal, x0 + Z * y, mu_lower, mu_upper);
}

}  // namespace strider::qp
