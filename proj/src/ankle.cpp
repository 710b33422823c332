#include "strider/ankle.hpp"

#include "strider/dcm.hpp"

#include <cmath>

namespace strider {

Vec3 dcm_tracking_law(const Vec3& dcm, const Vec3& dcm_ref, const Vec3& vrp_ref,
                      const Vec3& gain_diag, double b) {
  if (!(gain_diag.minCoeff() > 0.0))
    throw std::domain_error("dcm_tracking_law: gains must be positive");
  Vec3 v = vrp_ref;
  for (int i = 0; i < 3; ++i)
    v(i) += (1.0 + b * gain_diag(i)) * (dcm(i) - dcm_ref(i));
  return v;
}

Vec3 clamp_vrp_to_support(const Vec3& v_cmd, const geom::Polygon& support, double delta_z) {
  const Vec2 q = geom::project_point(support, v_cmd.head<2>());
  return Vec3(q.x(), q.y(), delta_z);
}

CorrectableSet correctable_set(const PhasePlan& plan, const FootGeometry& foot, double t,
                               int phases_ahead, const ModelParams& params) {
  if (plan.phases.empty() || phases_ahead < 1)
    throw std::domain_error("correctable_set: empty preview");
  const int depth = std::min<int>(phases_ahead, plan.n_phases());

  CorrectableSet set;
  set.phases_used = depth;
  double carry = 1.0;
  for (int k = 0; k < depth; ++k) {
    const double tk = (k == 0) ? t : 0.0;
    const PhaseCoefficients c = in_phase_coefficients(tk, plan.phases[k].duration, params.b);
    // Scaled sum of origin-centered rectangles; signs fold into the extents.
    const double w = std::abs(c.alpha) + std::abs(c.beta);
    set.half_x += carry * w * foot.half_length;
    set.half_y += carry * w * foot.half_width;
    carry *= c.gamma;  // remaining-error set at the preview end is {0}
  }
  set.half_planes = {{Vec2(1, 0), set.half_x},
                     {Vec2(-1, 0), set.half_x},
                     {Vec2(0, 1), set.half_y},
                     {Vec2(0, -1), set.half_y}};
  return set;
}

ErrorSplit split_error(const Vec3& error, const CorrectableSet& set) {
  ErrorSplit out;
  if (set.contains(error)) {
    out.ankle = error;
    out.step = Vec3::Zero();
    return out;
  }

  // Projection onto the half-plane set as a tiny QP.
  const int m = static_cast<int>(set.half_planes.size());
  qp::QpProblem p;
  p.hessian = Eigen::MatrixXd::Identity(2, 2);
  p.linear_cost = -error.head<2>();
  p.eq_matrix.resize(0, 2);
  p.eq_rhs.resize(0);
  p.ineq_matrix.resize(m, 2);
  p.ineq_lower = Eigen::VectorXd::Constant(m, -qp::kInf);
  p.ineq_upper.resize(m);
  for (int i = 0; i < m; ++i) {
    p.ineq_matrix.row(i) = set.half_planes[i].normal.transpose();
    p.ineq_upper(i) = set.half_planes[i].offset;
  }
  const qp::QpSolution s = qp::solve_qp(p);
  if (s.status != qp::SolveStatus::Optimal)
    throw std::runtime_error("split_error: projection QP failed");
  out.ankle = Vec3(s.values(0), s.values(1), error.z());
  out.step = error - out.ankle;
  return out;
}

}  // namespace strider
