#pragma once

#include "strider/ankle.hpp"
#include "strider/dcm.hpp"
#include "strider/geometry.hpp"
#include "strider/qp.hpp"
#include "strider/types.hpp"

#include <optional>
#include <vector>

namespace strider {

/// Convex footstep region in the stance-foot frame plus a rotation angle
/// about the stance foot.
struct StepRegion {
  geom::Polygon vertices;        // relative to the stance foot, ground plane
  double theta = 0.0;            // rad, |theta| <= pi/2
  Vec3 stance_foot = Vec3::Zero();
};

/// Half planes of the rotated region in the stance-foot frame (constraints on
/// the landing offset p - stance).
std::vector<geom::HalfPlane> region_half_planes_relative(const StepRegion& region);

/// Same region as world-frame half planes on the landing position.
std::vector<geom::HalfPlane> rotate_region(const StepRegion& region);

/// Bounds on the remaining duration of the current phase.
struct TimingBounds {
  double t_min = 0.1;
  double t_max = 1.6;
  double t_0 = 0.56;  // nominal remaining time / linearization point

  static TimingBounds make(double t_min, double t_max, double t_0);
  std::pair<double, double> gamma_bounds(double b) const;
};

/// Value and slope of each interpolation coefficient at t_0, for the affine
/// approximation coeff(T) ~ c + l * (T - t_0).
struct DsLinearization {
  double alpha_c = 0.0, alpha_l = 0.0;
  double beta_c = 0.0, beta_l = 0.0;
  double gamma_c = 0.0, gamma_l = 0.0;
};

DsLinearization linearize_ds_coefficients(double t_0, double b);

enum class TimingMode { ModelBased, RlGated };

struct QpWeights {
  double w_time = 1.0;      // on gamma (SS) or T (DS)
  double w_step = 10.0;     // per footstep coordinate
  double w_terminal = 100.0;
};

struct GaitParams {
  double f_nom = 1.25;      // step pairs (one SS + one DS) per second
  double r_nom = 0.70;      // SS share of a pair
  double step_width = 0.20; // lateral distance between footstep rows
  Vec3 v_ref = Vec3(0.3, 0.0, 0.0);
  int preview_feet = 4;
  double f_min = 0.2, f_max = 4.0;
  double r_min = 0.05, r_max = 0.95;

  double pair_period(double f) const { return 1.0 / f; }
  double t_ss(double f, double r) const { return r / f; }
  double t_ds(double f, double r) const { return (1.0 - r) / f; }
};

struct PlannerConfig {
  ModelParams model;
  GaitParams gait;
  FootGeometry foot;
  QpWeights weights;
  double t_min_factor = 0.2;
  double t_max_factor = 2.0;
  double trust_factor = 0.15;    // DS trust region as a fraction of t_0
  double region_half_x = 0.20;   // footstep region rectangle half extents
  double region_half_y = 0.15;
  TimingMode mode = TimingMode::ModelBased;
  int ankle_preview_phases = 2;
  double min_remaining = 2e-3;   // floor on the remaining phase time, s
  qp::SolverOptions solver;
};

/// Gait bookkeeping the planner replans from each tick.
struct GaitContext {
  PhaseKind kind = PhaseKind::SingleSupport;
  Side support = Side::Right;    // SS: stance foot; DS: foot transitioning from
  double elapsed = 0.0;
  Vec3 left_foot = Vec3(0.0, 0.10, 0.0);
  Vec3 right_foot = Vec3(0.0, -0.10, 0.0);
  Vec3 current_vrp = Vec3(0.0, -0.10, 0.80);  // VRP waypoint at the preview start

  const Vec3& foot(Side s) const { return s == Side::Left ? left_foot : right_foot; }
};

struct GatedTiming {
  double f = 0.0;
  double r = 0.0;
  double eta = 0.0;
};

/// Step-timing gate: frequency and support-ratio deltas apply only when the
/// error split leaves a nonzero step component.
GatedTiming apply_timing(const AdjustAction& action, const ErrorSplit& split,
                         const GaitParams& gait);

struct SsNominal {
  std::vector<Vec3> footsteps_d;  // per plan foot index, nominal positions
  double gamma_d = 1.0;
  Vec3 terminal_dcm_d = Vec3::Zero();
};

struct DsNominal {
  std::vector<Vec3> footsteps_d;
  double t_0 = 0.0;
  Vec3 terminal_dcm_d = Vec3::Zero();
};

/// Single-support QP: variables are gamma (optional), the previewed
/// footsteps and the DCM waypoints; the first-phase dynamics is exact in
/// gamma because the DCM start point enters as a constant.
qp::QpProblem assemble_ss_qp(const Vec3& xi_1, const PhasePlan& plan,
                             const std::vector<StepRegion>& regions, const SsNominal& nominal,
                             const QpWeights& weights, const TimingBounds& bounds,
                             const ModelParams& params, bool optimize_timing);

/// Double-support QP: the remaining time enters the first-phase constraint
/// through coefficients linearized about t_0 (or exactly, when timing is not
/// optimized); all later phases use their fixed nominal durations.
qp::QpProblem assemble_ds_qp(const Vec3& xi_1, const Vec3& v_1, const PhasePlan& plan,
                             const std::vector<StepRegion>& regions, const DsNominal& nominal,
                             const QpWeights& weights, const TimingBounds& bounds,
                             double trust_delta, const ModelParams& params,
                             bool optimize_timing);

struct PlanResult {
  PhasePlan plan;            // optimized preview; phases[0].duration is the remaining time
  PhasePlan nominal_plan;    // nominal preview with DCM waypoints from the backward pass
  Vec3 vrp_ref = Vec3::Zero();
  Vec3 dcm_ref = Vec3::Zero();
  Vec3 v2 = Vec3::Zero();    // VRP waypoint ending the current phase
  double t_rem = 0.0;
  double f = 0.0, r = 0.0, eta = 0.0;
  double theta_applied = 0.0;
  ErrorSplit split;
  Vec3 terminal_dcm = Vec3::Zero();
  Vec3 terminal_dcm_nominal = Vec3::Zero();
  std::optional<Vec3> next_footstep;  // first adjustable landing target
  bool fallback_dropped_theta = false;
  bool fallback_relaxed_bounds = false;
  bool infeasible = false;
  qp::SolveStatus qp_status = qp::SolveStatus::Optimal;
  double qp_kkt = 0.0;
};

class Planner {
 public:
  explicit Planner(PlannerConfig config);

  const PlannerConfig& config() const { return config_; }

  /// One replanning tick: nominal preview, error split, action application,
  /// QP solve with fallbacks, reference update.
  PlanResult plan_step(const DcmState& state, const GaitContext& gait,
                       const AdjustAction& action) const;

  /// Nominal preview plan for the given timing; first-phase duration is the
  /// remaining time under that timing.
  PhasePlan nominal_preview(const GaitContext& gait, double f, double r) const;

  /// Nominal landing displacement from the previous foot for a step onto
  /// `side`.
  Vec3 stride(Side side) const;

  /// Dump of the last assembled problem/solution for diagnostics.
  struct QpDump {
    qp::QpProblem problem;
    qp::QpSolution solution;
  };
  PlanResult plan_step_with_dump(const DcmState& state, const GaitContext& gait,
                                 const AdjustAction& action, QpDump* dump) const;

 private:
  PlannerConfig config_;
};

}  // namespace strider
