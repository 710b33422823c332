#pragma once

#include "strider/planner.hpp"

namespace strider {

/// Policy input assembled from the planner state. Flags are exactly +1/-1.
struct Observation {
  Vec3 dcm_error_ankle = Vec3::Zero();
  Vec3 dcm_error_step = Vec3::Zero();
  double t_rem_norm = 1.0;       // remaining / total phase time
  double phase_flag = 1.0;       // +1 single support, -1 double support
  double swing_foot_flag = 1.0;  // +1 left foot, -1 right foot
  Vec3 swing_foot_rel = Vec3::Zero();
  Vec3 com_vel = Vec3::Zero();
  Vec3 v_ref = Vec3::Zero();

  static constexpr int kDim = 18;
  Eigen::VectorXd to_vector() const;
};

/// Observation at a decision boundary, from the most recent replanning
/// result. The swing-foot flag names the foot that moves next.
Observation build_observation(const DcmState& state, const GaitContext& gait,
                              const PlanResult& plan, const Vec3& v_ref);

struct RewardTable {
  double w_freq = 2.0, lambda_freq = 1.0;
  double w_ss = 1.0, lambda_ss = 5.0;
  double w_reg = 0.1, lambda_reg = 2.0;
  double w_dcm = 10.0, lambda_dcm = 1.0;
  double fall_penalty = 200.0;
  double collision_penalty = 200.0;
};

struct RewardBreakdown {
  double r_freq = 0.0;
  double r_ss = 0.0;
  double r_reg = 0.0;
  double r_dcm = 0.0;
  double r_fall = 0.0;
  double r_colli = 0.0;
  double total = 0.0;
};

/// Exponential proximity rewards on the applied action and the terminal-DCM
/// distance, plus fall/self-collision penalties.
RewardBreakdown compute_reward(const AdjustAction& action, const PlanResult& plan, bool fell,
                               bool collided, const RewardTable& table);

}  // namespace strider
