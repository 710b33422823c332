#include "strider/rl.hpp"

#include <cmath>

namespace strider {

Eigen::VectorXd Observation::to_vector() const {
  Eigen::VectorXd v(kDim);
  v << dcm_error_ankle, dcm_error_step, t_rem_norm, phase_flag, swing_foot_flag,
      swing_foot_rel, com_vel, v_ref;
  return v;
}

Observation build_observation(const DcmState& state, const GaitContext& gait,
                              const PlanResult& plan, const Vec3& v_ref) {
  Observation obs;
  obs.dcm_error_ankle = plan.split.ankle;
  obs.dcm_error_step = plan.split.step;
  const double total = gait.elapsed + plan.t_rem;
  obs.t_rem_norm = total > 0.0 ? plan.t_rem / total : 1.0;
  obs.phase_flag = gait.kind == PhaseKind::SingleSupport ? 1.0 : -1.0;
  // the foot that moves next: the swing foot in SS, the trailing foot in DS
  const Side swing =
      gait.kind == PhaseKind::SingleSupport ? other_side(gait.support) : gait.support;
  obs.swing_foot_flag = swing == Side::Left ? 1.0 : -1.0;
  const Side stance = other_side(swing);
  obs.swing_foot_rel = gait.foot(swing) - gait.foot(stance);
  obs.com_vel = state.com_vel;
  obs.v_ref = v_ref;
  return obs;
}

RewardBreakdown compute_reward(const AdjustAction& action, const PlanResult& plan, bool fell,
                               bool collided, const RewardTable& t) {
  RewardBreakdown r;
  r.r_freq = t.w_freq * std::exp(-t.lambda_freq * std::abs(action.f_hat));
  r.r_ss = t.w_ss * std::exp(-t.lambda_ss * std::abs(action.r_hat));
  r.r_reg = t.w_reg * std::exp(-t.lambda_reg * std::abs(action.theta));
  const double d = (plan.terminal_dcm - plan.terminal_dcm_nominal).norm();
  r.r_dcm = t.w_dcm * std::exp(-t.lambda_dcm * d);
  r.r_fall = fell ? -t.fall_penalty : 0.0;
  r.r_colli = collided ? -t.collision_penalty : 0.0;
  r.total = r.r_freq + r.r_ss + r.r_reg + r.r_dcm + r.r_fall + r.r_colli;
  return r;
}

}  // namespace strider
