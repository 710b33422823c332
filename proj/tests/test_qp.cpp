#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "strider/qp.hpp"

#include "oracles.hpp"

#include <random>

using namespace strider;
using namespace strider::qp;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

QpProblem box_problem(const MatrixXd& h, const VectorXd& g, const VectorXd& lo,
                      const VectorXd& hi) {
  const int n = static_cast<int>(h.rows());
  QpProblem p;
  p.hessian = h;
  p.linear_cost = g;
  p.eq_matrix.resize(0, n);
  p.eq_rhs.resize(0);
  p.ineq_matrix = MatrixXd::Identity(n, n);
  p.ineq_lower = lo;
  p.ineq_upper = hi;
  return p;
}

}  // namespace

TEST_CASE("box projection") {
  // min ||x - c||^2, 0 <= x <= 1, c = (2, 0.5) -> x = (1, 0.5)
  MatrixXd h = 2.0 * MatrixXd::Identity(2, 2);
  VectorXd g(2);
  g << -4.0, -1.0;
  const QpSolution s =
      solve_qp(box_problem(h, g, VectorXd::Zero(2), VectorXd::Ones(2)));
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.values(0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.values(1) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(s.kkt_residual < 1e-7);
}

TEST_CASE("equality-only QP matches the closed-form KKT solve") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const int me = 1 + static_cast<int>(rng() % (n - 1));
    QpProblem p;
    p.hessian = oracles::random_spd(rng, n, 0.2);
    p.linear_cost = VectorXd::NullaryExpr(n, [&](Eigen::Index) { return oracles::unif(rng, -1, 1); });
    p.eq_matrix = MatrixXd::NullaryExpr(me, n, [&](Eigen::Index, Eigen::Index) {
      return oracles::unif(rng, -1, 1);
    });
    p.eq_rhs = VectorXd::NullaryExpr(me, [&](Eigen::Index) { return oracles::unif(rng, -1, 1); });
    p.ineq_matrix.resize(0, n);
    p.ineq_lower.resize(0);
    p.ineq_upper.resize(0);

    const QpSolution s = solve_qp(p);
    REQUIRE(s.status == SolveStatus::Optimal);

    MatrixXd kkt = MatrixXd::Zero(n + me, n + me);
    kkt.topLeftCorner(n, n) = p.hessian;
    kkt.topRightCorner(n, me) = p.eq_matrix.transpose();
    kkt.bottomLeftCorner(me, n) = p.eq_matrix;
    VectorXd rhs(n + me);
    rhs.head(n) = -p.linear_cost;
    rhs.tail(me) = p.eq_rhs;
    const VectorXd ref = kkt.fullPivLu().solve(rhs).head(n);
    CHECK((s.values - ref).lpNorm<Eigen::Infinity>() < 1e-9);
  }
}

TEST_CASE("random PD box QPs against projected gradient") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 19);  // up to 20
    const MatrixXd h = oracles::random_spd(rng, n, 0.05);
    const VectorXd g =
        VectorXd::NullaryExpr(n, [&](Eigen::Index) { return oracles::unif(rng, -2, 2); });
    VectorXd lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      lo(i) = oracles::unif(rng, -1.0, 0.0);
      hi(i) = lo(i) + oracles::unif(rng, 0.2, 2.0);
    }
    const QpSolution s = solve_qp(box_problem(h, g, lo, hi));
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.kkt_residual < 1e-7);
    const VectorXd ref = oracles::projected_gradient_box(h, g, lo, hi);
    const double obj_ref = 0.5 * ref.dot(h * ref) + g.dot(ref);
    CHECK(s.objective <= obj_ref + 1e-6);
    CHECK(std::abs(s.objective - obj_ref) < 1e-6);
  }
}

TEST_CASE("general polytope QPs against exhaustive active-set enumeration") {
  std::mt19937_64 rng(2024);
  int solved = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);  // 2..4
    QpProblem p;
    p.hessian = oracles::random_spd(rng, n, 0.3);
    p.linear_cost =
        VectorXd::NullaryExpr(n, [&](Eigen::Index) { return oracles::unif(rng, -1, 1); });
    const int me = static_cast<int>(rng() % 2);
    p.eq_matrix = MatrixXd::NullaryExpr(me, n, [&](Eigen::Index, Eigen::Index) {
      return oracles::unif(rng, -1, 1);
    });
    p.eq_rhs =
        VectorXd::NullaryExpr(me, [&](Eigen::Index) { return oracles::unif(rng, -0.3, 0.3); });
    const int mi = 3 + static_cast<int>(rng() % 4);
    p.ineq_matrix = MatrixXd::NullaryExpr(mi, n, [&](Eigen::Index, Eigen::Index) {
      return oracles::unif(rng, -1, 1);
    });
    p.ineq_lower = VectorXd::Constant(mi, -kInf);
    p.ineq_upper =
        VectorXd::NullaryExpr(mi, [&](Eigen::Index) { return oracles::unif(rng, 0.1, 1.0); });

    const QpSolution s = solve_qp(p);
    const oracles::EnumResult ref = oracles::enumerate_qp(p);
    if (s.status == SolveStatus::Infeasible) {
      CHECK(!ref.found);
      continue;
    }
    REQUIRE(s.status == SolveStatus::Optimal);
    REQUIRE(ref.found);
    CHECK(std::abs(s.objective - ref.objective) < 1e-7);
    CHECK(s.kkt_residual < 1e-7);
    ++solved;
  }
  CHECK(solved > 80);
}

TEST_CASE("infeasible problems are reported, not silently solved") {
  QpProblem p;
  p.hessian = MatrixXd::Identity(1, 1);
  p.linear_cost = VectorXd::Zero(1);
  p.eq_matrix.resize(0, 1);
  p.eq_rhs.resize(0);
  p.ineq_matrix.resize(2, 1);
  p.ineq_matrix << 1.0, 1.0;
  p.ineq_lower.resize(2);
  p.ineq_upper.resize(2);
  // x <= -1 and x >= 1 simultaneously
  p.ineq_lower << -kInf, 1.0;
  p.ineq_upper << -1.0, kInf;
  CHECK(solve_qp(p).status == SolveStatus::Infeasible);

  // inconsistent equalities
  QpProblem q;
  q.hessian = MatrixXd::Identity(2, 2);
  q.linear_cost = VectorXd::Zero(2);
  q.eq_matrix.resize(2, 2);
  q.eq_matrix << 1, 1, 1, 1;
  q.eq_rhs.resize(2);
  q.eq_rhs << 0.0, 1.0;
  q.ineq_matrix.resize(0, 2);
  q.ineq_lower.resize(0);
  q.ineq_upper.resize(0);
  CHECK(solve_qp(q).status == SolveStatus::Infeasible);
}

TEST_CASE("determinism: identical inputs give identical outputs") {
  std::mt19937_64 rng(8);
  const MatrixXd h = oracles::random_spd(rng, 6, 0.1);
  const VectorXd g =
      VectorXd::NullaryExpr(6, [&](Eigen::Index) { return oracles::unif(rng, -1, 1); });
  const QpProblem p = box_problem(h, g, VectorXd::Constant(6, -0.5), VectorXd::Constant(6, 0.5));
  const QpSolution a = solve_qp(p);
  const QpSolution b = solve_qp(p);
  REQUIRE(a.status == SolveStatus::Optimal);
  CHECK((a.values - b.values).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(a.objective == b.objective);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("problem and solution serialize to json") {
  MatrixXd h = 2.0 * MatrixXd::Identity(2, 2);
  VectorXd g(2);
  g << -4.0, -1.0;
  const QpProblem p = box_problem(h, g, VectorXd::Zero(2), VectorXd::Ones(2));
  const nlohmann::json pj = p.to_json();
  CHECK(pj["hessian"][0][0] == 2.0);
  CHECK(pj["ineq_lower"][0] == 0.0);
  const nlohmann::json sj = solve_qp(p).to_json();
  CHECK(sj["status"] == "optimal");
  CHECK(sj["values"].size() == 2);
}
