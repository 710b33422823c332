#include "strider/planner.hpp"

#include <algorithm>
#include <cmath>

namespace strider {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<geom::HalfPlane> region_half_planes_relative(const StepRegion& region) {
  constexpr double kHalfPi = 1.5707963267948966;
  if (std::abs(region.theta) > kHalfPi + 1e-12)
    throw std::domain_error("rotate_region: |theta| exceeds pi/2");
  if (region.theta == 0.0) return geom::to_half_planes(region.vertices);
  const geom::Polygon rotated =
      geom::rotate_about(region.vertices, region.theta, Vec2::Zero());
  return geom::to_half_planes(rotated);
}

std::vector<geom::HalfPlane> rotate_region(const StepRegion& region) {
  std::vector<geom::HalfPlane> planes = region_half_planes_relative(region);
  for (geom::HalfPlane& h : planes) h.offset += h.normal.dot(region.stance_foot.head<2>());
  return planes;
}

TimingBounds TimingBounds::make(double t_min, double t_max, double t_0) {
  if (!(t_min > 0.0 && t_min <= t_0 && t_0 <= t_max))
    throw std::domain_error("TimingBounds: need 0 < t_min <= t_0 <= t_max");
  TimingBounds b;
  b.t_min = t_min;
  b.t_max = t_max;
  b.t_0 = t_0;
  return b;
}

std::pair<double, double> TimingBounds::gamma_bounds(double b) const {
  return {std::exp(t_min / b), std::exp(t_max / b)};
}

DsLinearization linearize_ds_coefficients(double t_0, double b) {
  if (!(t_0 > 0.0)) throw std::domain_error("linearize_ds_coefficients: t_0 must be > 0");
  if (!(b > 0.0)) throw std::domain_error("linearize_ds_coefficients: b must be > 0");
  DsLinearization lin;
  lin.gamma_c = std::exp(t_0 / b);
  lin.gamma_l = lin.gamma_c / b;
  lin.beta_c = b / t_0 + 1.0 - lin.gamma_c * b / t_0;
  lin.beta_l = -b / (t_0 * t_0) + lin.gamma_c * b / (t_0 * t_0) - lin.gamma_l * b / t_0;
  lin.alpha_c = 1.0 - lin.beta_c - lin.gamma_c;
  lin.alpha_l = -lin.beta_l - lin.gamma_l;
  return lin;
}

GatedTiming apply_timing(const AdjustAction& action, const ErrorSplit& split,
                         const GaitParams& gait) {
  GatedTiming t;
  t.eta = split.step.isZero(0.0) ? 0.0 : 1.0;
  t.f = std::clamp(gait.f_nom + t.eta * action.f_hat, gait.f_min, gait.f_max);
  t.r = std::clamp(gait.r_nom + t.eta * action.r_hat, gait.r_min, gait.r_max);
  return t;
}

namespace {

// Variable slots: [timing?][adjustable feet xy...][dcm waypoints 1..n_wp-1 xy...]
struct VarMap {
  bool has_timing = false;
  int first_adjustable = 1;
  int n_feet = 0;
  int n_wp = 0;

  static VarMap make(const PhasePlan& plan, bool timing) {
    VarMap m;
    m.has_timing = timing;
    m.first_adjustable = plan.initial_kind == PhaseKind::SingleSupport ? 1 : 2;
    m.n_feet = plan.n_feet();
    m.n_wp = plan.n_waypoints();
    return m;
  }

  int n_adjustable() const { return n_feet - first_adjustable; }
  int timing_index() const { return 0; }
  int foot_x(int j) const { return (has_timing ? 1 : 0) + 2 * (j - first_adjustable); }
  int xi_x(int k) const { return (has_timing ? 1 : 0) + 2 * n_adjustable() + 2 * (k - 1); }
  int total() const { return (has_timing ? 1 : 0) + 2 * n_adjustable() + 2 * (n_wp - 1); }
  bool foot_is_variable(int j) const { return j >= first_adjustable; }

  qp::VariableLayout layout(const char* timing_name) const {
    qp::VariableLayout l;
    if (has_timing) l.names.push_back(timing_name);
    for (int j = first_adjustable; j < n_feet; ++j) {
      l.names.push_back("p" + std::to_string(j) + ".x");
      l.names.push_back("p" + std::to_string(j) + ".y");
    }
    for (int k = 1; k < n_wp; ++k) {
      l.names.push_back("xi" + std::to_string(k) + ".x");
      l.names.push_back("xi" + std::to_string(k) + ".y");
    }
    return l;
  }
};

struct RowSet {
  std::vector<VectorXd> rows;
  std::vector<double> lo, hi;

  void add(VectorXd row, double l, double h) {
    rows.push_back(std::move(row));
    lo.push_back(l);
    hi.push_back(h);
  }
};

// Equality rows for phases 1..end: the recursion over waypoints with fixed
// nominal durations; feet enter as variables or constants.
void append_chain(const PhasePlan& plan, const VarMap& m, const ModelParams& params,
                  RowSet& eq) {
  const int n = m.total();
  for (int k = 1; k < plan.n_phases(); ++k) {
    const PhaseCoefficients c = end_of_phase_coefficients(plan.phases[k].duration, params.b);
    const int m0 = plan.foot_index_for_waypoint(k);
    const int m1 = plan.foot_index_for_waypoint(k + 1);
    for (int axis = 0; axis < 2; ++axis) {
      VectorXd row = VectorXd::Zero(n);
      double rhs = 0.0;
      row(m.xi_x(k + 1) + axis) = 1.0;
      row(m.xi_x(k) + axis) = -c.gamma;
      auto foot_term = [&](int j, double w) {
        if (w == 0.0) return;
        if (m.foot_is_variable(j))
          row(m.foot_x(j) + axis) -= w;
        else
          rhs += w * plan.foot_positions[j](axis);
      };
      if (m0 == m1) {
        foot_term(m0, c.alpha + c.beta);
      } else {
        foot_term(m0, c.alpha);
        foot_term(m1, c.beta);
      }
      eq.add(std::move(row), rhs, rhs);
    }
  }
}

void append_regions(const PhasePlan& plan, const VarMap& m,
                    const std::vector<StepRegion>& regions, RowSet& in) {
  const int n = m.total();
  const int jb = m.first_adjustable;
  for (size_t idx = 0; idx < regions.size(); ++idx) {
    const int j = jb + static_cast<int>(idx);
    const std::vector<geom::HalfPlane> planes = region_half_planes_relative(regions[idx]);
    for (const geom::HalfPlane& h : planes) {
      VectorXd row = VectorXd::Zero(n);
      double offset = h.offset;
      row(m.foot_x(j)) = h.normal.x();
      row(m.foot_x(j) + 1) = h.normal.y();
      if (m.foot_is_variable(j - 1)) {
        row(m.foot_x(j - 1)) -= h.normal.x();
        row(m.foot_x(j - 1) + 1) -= h.normal.y();
      } else {
        offset += h.normal.dot(plan.foot_positions[j - 1].head<2>());
      }
      in.add(std::move(row), -qp::kInf, offset);
    }
  }
}

void add_cost(MatrixXd& hess, VectorXd& lin, int index, double weight, double target) {
  hess(index, index) += 2.0 * weight;
  lin(index) -= 2.0 * weight * target;
}

qp::QpProblem materialize(const VarMap& m, const char* timing_name, MatrixXd hess,
                          VectorXd lin, const RowSet& eq, const RowSet& in) {
  qp::QpProblem p;
  const int n = m.total();
  p.hessian = std::move(hess);
  p.linear_cost = std::move(lin);
  p.eq_matrix.resize(eq.rows.size(), n);
  p.eq_rhs.resize(eq.rows.size());
  for (size_t i = 0; i < eq.rows.size(); ++i) {
    p.eq_matrix.row(static_cast<Eigen::Index>(i)) = eq.rows[i].transpose();
    p.eq_rhs(static_cast<Eigen::Index>(i)) = eq.lo[i];
  }
  p.ineq_matrix.resize(in.rows.size(), n);
  p.ineq_lower.resize(in.rows.size());
  p.ineq_upper.resize(in.rows.size());
  for (size_t i = 0; i < in.rows.size(); ++i) {
    p.ineq_matrix.row(static_cast<Eigen::Index>(i)) = in.rows[i].transpose();
    p.ineq_lower(static_cast<Eigen::Index>(i)) = in.lo[i];
    p.ineq_upper(static_cast<Eigen::Index>(i)) = in.hi[i];
  }
  p.layout = m.layout(timing_name);
  return p;
}

void add_step_and_terminal_cost(const PhasePlan& plan, const VarMap& m,
                                const std::vector<Vec3>& footsteps_d,
                                const Vec3& terminal_dcm_d, const QpWeights& w,
                                MatrixXd& hess, VectorXd& lin) {
  for (int j = m.first_adjustable; j < m.n_feet; ++j) {
    add_cost(hess, lin, m.foot_x(j), w.w_step, footsteps_d[j].x());
    add_cost(hess, lin, m.foot_x(j) + 1, w.w_step, footsteps_d[j].y());
  }
  const int kt = m.n_wp - 1;
  add_cost(hess, lin, m.xi_x(kt), w.w_terminal, terminal_dcm_d.x());
  add_cost(hess, lin, m.xi_x(kt) + 1, w.w_terminal, terminal_dcm_d.y());
}

}  // namespace

qp::QpProblem assemble_ss_qp(const Vec3& xi_1, const PhasePlan& plan,
                             const std::vector<StepRegion>& regions, const SsNominal& nominal,
                             const QpWeights& weights, const TimingBounds& bounds,
                             const ModelParams& params, bool optimize_timing) {
  plan.validate();
  if (plan.initial_kind != PhaseKind::SingleSupport)
    throw std::domain_error("assemble_ss_qp: plan does not start in single support");
  const VarMap m = VarMap::make(plan, optimize_timing);
  if (static_cast<int>(regions.size()) != m.n_adjustable())
    throw std::domain_error("assemble_ss_qp: one region per adjustable footstep required");
  if (static_cast<int>(nominal.footsteps_d.size()) != plan.n_feet())
    throw std::domain_error("assemble_ss_qp: nominal footstep count mismatch");

  const int n = m.total();
  MatrixXd hess = MatrixXd::Zero(n, n);
  VectorXd lin = VectorXd::Zero(n);
  RowSet eq, in;

  // First phase: xi_wp1 = (1 - gamma) p0 + gamma xi_1, exact in gamma.
  const Vec3& p0 = plan.foot_positions[plan.foot_index_for_waypoint(0)];
  if (optimize_timing) {
    for (int axis = 0; axis < 2; ++axis) {
      VectorXd row = VectorXd::Zero(n);
      row(m.xi_x(1) + axis) = 1.0;
      row(m.timing_index()) = -(xi_1(axis) - p0(axis));
      eq.add(std::move(row), p0(axis), p0(axis));
    }
    const auto [glo, ghi] = bounds.gamma_bounds(params.b);
    VectorXd row = VectorXd::Zero(n);
    row(m.timing_index()) = 1.0;
    in.add(std::move(row), glo, ghi);
    add_cost(hess, lin, m.timing_index(), weights.w_time, nominal.gamma_d);
  } else {
    const double g0 = nominal.gamma_d;
    for (int axis = 0; axis < 2; ++axis) {
      VectorXd row = VectorXd::Zero(n);
      row(m.xi_x(1) + axis) = 1.0;
      const double rhs = (1.0 - g0) * p0(axis) + g0 * xi_1(axis);
      eq.add(std::move(row), rhs, rhs);
    }
  }

  append_chain(plan, m, params, eq);
  append_regions(plan, m, regions, in);
  add_step_and_terminal_cost(plan, m, nominal.footsteps_d, nominal.terminal_dcm_d, weights,
                             hess, lin);
  return materialize(m, "gamma", std::move(hess), std::move(lin), eq, in);
}

qp::QpProblem assemble_ds_qp(const Vec3& xi_1, const Vec3& v_1, const PhasePlan& plan,
                             const std::vector<StepRegion>& regions, const DsNominal& nominal,
                             const QpWeights& weights, const TimingBounds& bounds,
                             double trust_delta, const ModelParams& params,
                             bool optimize_timing) {
  plan.validate();
  if (plan.initial_kind != PhaseKind::DoubleSupport)
    throw std::domain_error("assemble_ds_qp: plan does not start in double support");
  const VarMap m = VarMap::make(plan, optimize_timing);
  if (static_cast<int>(regions.size()) != m.n_adjustable())
    throw std::domain_error("assemble_ds_qp: one region per adjustable footstep required");
  if (static_cast<int>(nominal.footsteps_d.size()) != plan.n_feet())
    throw std::domain_error("assemble_ds_qp: nominal footstep count mismatch");

  const int n = m.total();
  MatrixXd hess = MatrixXd::Zero(n, n);
  VectorXd lin = VectorXd::Zero(n);
  RowSet eq, in;

  // First phase: the VRP interpolates from v_1 to the already-planted foot,
  // so only the remaining time is unknown.
  const Vec3& p1 = plan.foot_positions[plan.foot_index_for_waypoint(1)];
  if (optimize_timing) {
    const DsLinearization l = linearize_ds_coefficients(nominal.t_0, params.b);
    for (int axis = 0; axis < 2; ++axis) {
      const double kc = l.alpha_c * v_1(axis) + l.beta_c * p1(axis) + l.gamma_c * xi_1(axis);
      const double kl = l.alpha_l * v_1(axis) + l.beta_l * p1(axis) + l.gamma_l * xi_1(axis);
      VectorXd row = VectorXd::Zero(n);
      row(m.xi_x(1) + axis) = 1.0;
      row(m.timing_index()) = -kl;
      const double rhs = kc - kl * nominal.t_0;
      eq.add(std::move(row), rhs, rhs);
    }
    const double tlo = std::max(bounds.t_min, nominal.t_0 - trust_delta);
    const double thi = std::min(bounds.t_max, nominal.t_0 + trust_delta);
    VectorXd row = VectorXd::Zero(n);
    row(m.timing_index()) = 1.0;
    in.add(std::move(row), tlo, thi);
    add_cost(hess, lin, m.timing_index(), weights.w_time, nominal.t_0);
  } else {
    const PhaseCoefficients c =
        end_of_phase_coefficients(plan.phases[0].duration, params.b);
    for (int axis = 0; axis < 2; ++axis) {
      VectorXd row = VectorXd::Zero(n);
      row(m.xi_x(1) + axis) = 1.0;
      const double rhs =
          c.alpha * v_1(axis) + c.beta * p1(axis) + c.gamma * xi_1(axis);
      eq.add(std::move(row), rhs, rhs);
    }
  }

  append_chain(plan, m, params, eq);
  append_regions(plan, m, regions, in);
  add_step_and_terminal_cost(plan, m, nominal.footsteps_d, nominal.terminal_dcm_d, weights,
                             hess, lin);
  return materialize(m, "T", std::move(hess), std::move(lin), eq, in);
}

Planner::Planner(PlannerConfig config) : config_(std::move(config)) {
  if (config_.gait.preview_feet < 2)
    throw std::domain_error("Planner: preview_feet must be >= 2");
}

Vec3 Planner::stride(Side side) const {
  const GaitParams& g = config_.gait;
  const double speed = g.v_ref.head<2>().norm();
  Vec2 dir(1.0, 0.0);
  if (speed > 1e-12) dir = g.v_ref.head<2>() / speed;
  const Vec2 lat(-dir.y(), dir.x());
  const double step_len = speed * g.pair_period(g.f_nom);
  const Vec2 d = step_len * dir + side_sign(side) * g.step_width * lat;
  return Vec3(d.x(), d.y(), 0.0);
}

namespace {

struct FeetChain {
  std::vector<Vec3> positions;
  std::vector<Side> sides;
};

}  // namespace

PhasePlan Planner::nominal_preview(const GaitContext& gait, double f, double r) const {
  const GaitParams& gp = config_.gait;
  const double t_ss = gp.t_ss(f, r);
  const double t_ds = gp.t_ds(f, r);
  const double total = gait.kind == PhaseKind::SingleSupport ? t_ss : t_ds;
  const double t_rem = std::max(total - gait.elapsed, config_.min_remaining);

  PhasePlan plan;
  plan.initial_kind = gait.kind;
  const int n_feet = gp.preview_feet;
  const int n_phases =
      gait.kind == PhaseKind::SingleSupport ? 2 * n_feet - 1 : 2 * n_feet - 2;

  Side stance = gait.support;
  PhaseKind kind = gait.kind;
  for (int i = 0; i < n_phases; ++i) {
    TransitionPhase ph;
    ph.kind = kind;
    ph.side = stance;
    ph.duration = i == 0 ? t_rem : (kind == PhaseKind::SingleSupport ? t_ss : t_ds);
    plan.phases.push_back(ph);
    if (kind == PhaseKind::DoubleSupport) stance = other_side(stance);
    kind = kind == PhaseKind::SingleSupport ? PhaseKind::DoubleSupport
                                            : PhaseKind::SingleSupport;
  }

  plan.foot_sides.resize(n_feet);
  plan.foot_positions.resize(n_feet);
  plan.foot_sides[0] = gait.support;
  plan.foot_positions[0] = gait.foot(gait.support);
  int first_nominal = 1;
  if (gait.kind == PhaseKind::DoubleSupport) {
    plan.foot_sides[1] = other_side(gait.support);
    plan.foot_positions[1] = gait.foot(plan.foot_sides[1]);
    first_nominal = 2;
  }
  for (int j = first_nominal; j < n_feet; ++j) {
    plan.foot_sides[j] = other_side(plan.foot_sides[j - 1]);
    plan.foot_positions[j] = plan.foot_positions[j - 1] + stride(plan.foot_sides[j]);
  }

  const Vec3 lift(0.0, 0.0, config_.model.delta_z);
  plan.vrp_waypoints.resize(plan.n_waypoints());
  plan.vrp_waypoints[0] = gait.current_vrp;
  for (int k = 1; k < plan.n_waypoints(); ++k)
    plan.vrp_waypoints[k] = plan.foot_positions[plan.foot_index_for_waypoint(k)] + lift;
  plan.dcm_waypoints.clear();
  return plan;
}

PlanResult Planner::plan_step(const DcmState& state, const GaitContext& gait,
                              const AdjustAction& action) const {
  return plan_step_with_dump(state, gait, action, nullptr);
}

PlanResult Planner::plan_step_with_dump(const DcmState& state, const GaitContext& gait,
                                        const AdjustAction& action, QpDump* dump) const {
  const GaitParams& gp = config_.gait;
  const ModelParams& model = config_.model;
  const Vec3 lift(0.0, 0.0, model.delta_z);

  PlanResult res;

  // 1. Nominal preview and desired DCM start point.
  PhasePlan nominal = nominal_preview(gait, gp.f_nom, gp.r_nom);
  const int n_feet = nominal.n_feet();
  const Vec3 terminal_d =
      0.5 * (nominal.foot_positions[n_feet - 2] + nominal.foot_positions[n_feet - 1]) + lift;
  nominal = backward_recursion(nominal, terminal_d, model);
  const Vec3 xi_1d = nominal.dcm_waypoints[0];

  // 2. Ankle/step decomposition of the tracking error.
  const CorrectableSet set =
      correctable_set(nominal, config_.foot, 0.0, config_.ankle_preview_phases, model);
  Vec3 error = state.dcm - xi_1d;
  error.z() = 0.0;
  res.split = split_error(error, set);

  // 3. Timing gate.
  GatedTiming gt;
  if (config_.mode == TimingMode::RlGated) {
    gt = apply_timing(action, res.split, gp);
  } else {
    gt.f = gp.f_nom;
    gt.r = gp.r_nom;
    gt.eta = res.split.step.isZero(0.0) ? 0.0 : 1.0;
  }
  res.f = gt.f;
  res.r = gt.r;
  res.eta = gt.eta;

  const bool retimed = gt.f != gp.f_nom || gt.r != gp.r_nom;
  PhasePlan plan = retimed ? nominal_preview(gait, gt.f, gt.r) : nominal;
  plan.dcm_waypoints.clear();
  // The gate rescales durations only; footstep geometry stays nominal.
  plan.foot_positions = nominal.foot_positions;
  plan.foot_sides = nominal.foot_sides;

  const Vec3 xi_1 = xi_1d + res.split.step;
  const Vec3 v_1 = gait.current_vrp;
  const double t_rem_plan = plan.phases[0].duration;

  // 4. Bounds on the remaining time, widened to always admit the nominal.
  const double t_total_nom =
      gait.kind == PhaseKind::SingleSupport ? gp.t_ss(gp.f_nom, gp.r_nom)
                                            : gp.t_ds(gp.f_nom, gp.r_nom);
  double t_lo = std::max(config_.min_remaining, config_.t_min_factor * t_total_nom - gait.elapsed);
  double t_hi = std::max(config_.t_max_factor * t_total_nom - gait.elapsed,
                         2.0 * config_.min_remaining);
  t_lo = std::min(t_lo, t_rem_plan);
  t_hi = std::max(t_hi, t_rem_plan);

  // 5. Footstep regions: the imminent step gets the commanded rotation.
  const int first_adj = gait.kind == PhaseKind::SingleSupport ? 1 : 2;
  auto make_regions = [&](double theta) {
    std::vector<StepRegion> regions;
    for (int j = first_adj; j < n_feet; ++j) {
      StepRegion r;
      const Vec3 center = stride(plan.foot_sides[j]);
      r.vertices = geom::rectangle(center.head<2>(), config_.region_half_x,
                                   config_.region_half_y);
      r.theta = j == first_adj ? theta : 0.0;
      r.stance_foot = plan.foot_positions[j - 1];
      regions.push_back(std::move(r));
    }
    return regions;
  };

  const bool optimize_timing = config_.mode == TimingMode::ModelBased;
  auto assemble = [&](double theta, double lo, double hi) {
    const TimingBounds bounds = TimingBounds::make(std::min(lo, t_rem_plan),
                                                   std::max(hi, t_rem_plan), t_rem_plan);
    if (gait.kind == PhaseKind::SingleSupport) {
      SsNominal nom;
      nom.footsteps_d = plan.foot_positions;
      nom.gamma_d = std::exp(t_rem_plan / model.b);
      nom.terminal_dcm_d = terminal_d;
      return assemble_ss_qp(xi_1, plan, make_regions(theta), nom, config_.weights, bounds,
                            model, optimize_timing);
    }
    DsNominal nom;
    nom.footsteps_d = plan.foot_positions;
    nom.t_0 = t_rem_plan;
    nom.terminal_dcm_d = terminal_d;
    return assemble_ds_qp(xi_1, v_1, plan, make_regions(theta), nom, config_.weights, bounds,
                          config_.trust_factor * t_rem_plan, model, optimize_timing);
  };

  res.theta_applied = action.theta;
  qp::QpProblem problem = assemble(action.theta, t_lo, t_hi);
  qp::QpSolution sol = qp::solve_qp(problem, config_.solver);
  if (sol.status != qp::SolveStatus::Optimal && action.theta != 0.0) {
    res.fallback_dropped_theta = true;
    res.theta_applied = 0.0;
    problem = assemble(0.0, t_lo, t_hi);
    sol = qp::solve_qp(problem, config_.solver);
  }
  if (sol.status != qp::SolveStatus::Optimal) {
    res.fallback_relaxed_bounds = true;
    problem = assemble(res.theta_applied, 0.5 * t_lo, 2.0 * t_hi);
    sol = qp::solve_qp(problem, config_.solver);
  }
  res.qp_status = sol.status;
  res.qp_kkt = sol.kkt_residual;
  if (dump) {
    dump->problem = problem;
    dump->solution = sol;
  }

  res.nominal_plan = nominal;
  res.terminal_dcm_nominal = terminal_d;
  res.vrp_ref = v_1;
  res.dcm_ref = xi_1;

  const VarMap vm = VarMap::make(plan, optimize_timing);
  PhasePlan out = plan;
  if (sol.status != qp::SolveStatus::Optimal) {
    // Keep the feed-forward preview if the solver gave up entirely.
    res.infeasible = true;
    out = forward_recursion(out, xi_1, model);
    out.vrp_waypoints[0] = v_1;
    res.plan = out;
    res.t_rem = t_rem_plan;
    res.v2 = out.vrp_waypoints[1];
    res.terminal_dcm = out.dcm_waypoints.back();
    if (vm.n_adjustable() > 0) res.next_footstep = out.foot_positions[first_adj];
    return res;
  }

  double t_rem_opt = t_rem_plan;
  if (optimize_timing) {
    const double tv = sol.values(vm.timing_index());
    t_rem_opt = gait.kind == PhaseKind::SingleSupport ? model.b * std::log(tv) : tv;
  }
  out.phases[0].duration = std::max(t_rem_opt, config_.min_remaining);
  for (int j = first_adj; j < n_feet; ++j)
    out.foot_positions[j] =
        Vec3(sol.values(vm.foot_x(j)), sol.values(vm.foot_x(j) + 1), 0.0);
  out.vrp_waypoints.resize(out.n_waypoints());
  out.vrp_waypoints[0] = v_1;
  for (int k = 1; k < out.n_waypoints(); ++k)
    out.vrp_waypoints[k] = out.foot_positions[out.foot_index_for_waypoint(k)] + lift;
  out.dcm_waypoints.assign(out.n_waypoints(), Vec3::Zero());
  out.dcm_waypoints[0] = xi_1;
  for (int k = 1; k < out.n_waypoints(); ++k)
    out.dcm_waypoints[k] =
        Vec3(sol.values(vm.xi_x(k)), sol.values(vm.xi_x(k) + 1), model.delta_z);

  res.plan = out;
  res.t_rem = out.phases[0].duration;
  res.v2 = out.vrp_waypoints[1];
  res.terminal_dcm = out.dcm_waypoints.back();
  if (vm.n_adjustable() > 0) res.next_footstep = out.foot_positions[first_adj];
  return res;
}

}  // namespace strider
