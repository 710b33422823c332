#pragma once

#include "strider/types.hpp"

#include <json.hpp>

#include <limits>
#include <string>
#include <vector>

namespace strider::qp {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Names one scalar slot per variable, e.g. "gamma", "p2.x", "xi4.y".
struct VariableLayout {
  std::vector<std::string> names;

  int size() const { return static_cast<int>(names.size()); }
  int index_of(const std::string& name) const;
};

/// min 0.5 x'Hx + g'x  s.t.  A_eq x = b_eq,  lower <= A_in x <= upper.
struct QpProblem {
  Eigen::MatrixXd hessian;
  Eigen::VectorXd linear_cost;
  Eigen::MatrixXd eq_matrix;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ineq_matrix;
  Eigen::VectorXd ineq_lower;
  Eigen::VectorXd ineq_upper;
  VariableLayout layout;

  int num_vars() const { return static_cast<int>(hessian.rows()); }
  nlohmann::json to_json() const;
};

enum class SolveStatus { Optimal, Infeasible, MaxIter };

inline const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    default: return "max_iter";
  }
}

struct QpSolution {
  Eigen::VectorXd values;
  SolveStatus status = SolveStatus::MaxIter;
  double objective = 0.0;
  double kkt_residual = kInf;
  int iterations = 0;
  double regularization = 0.0;  // Hessian jitter applied, 0 in the usual case

  nlohmann::json to_json() const;
};

struct SolverOptions {
  int max_iterations = 200;
  double feasibility_tol = 1e-8;
};

/// Dense convex QP solve: equality constraints are eliminated through an
/// orthonormal nullspace basis, then a dual active-set iteration handles the
/// inequalities. Deterministic for fixed inputs.
QpSolution solve_qp(const QpProblem& problem, const SolverOptions& options = {});

}  // namespace strider::qp
