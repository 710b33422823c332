#pragma once

#include "strider/policy.hpp"
#include "strider/trace.hpp"

#include <optional>
#include <vector>

namespace strider {

/// External push, applied at the CoM for a fixed window.
struct Push {
  Vec3 force = Vec3::Zero();  // N
  double start = 0.0;         // s
  double duration = 0.1;      // s
};

/// Where in the gait cycle a triggered push fires.
struct PhaseBucket {
  PhaseKind kind = PhaseKind::DoubleSupport;
  bool second_half = false;
};

inline const char* bucket_name(const PhaseBucket& b) {
  if (b.kind == PhaseKind::DoubleSupport) return b.second_half ? "DS2" : "DS1";
  return b.second_half ? "SS2" : "SS1";
}

/// One-shot push released when the gait first passes the requested phase
/// fraction after `after_time`.
struct TriggeredPush {
  PhaseBucket bucket;
  Vec3 force = Vec3::Zero();
  double duration = 0.1;
  double after_time = 2.0;
};

struct SimConfig {
  double dt = 1e-3;
  double policy_period = 0.02;
  double episode_length = 20.0;
  double push_duration = 0.1;
  double push_interval = 1.5;
  double fall_radius = 1.0;      // m, on ||(dcm - vrp)_xy||
  double fall_speed = 3.0;       // m/s, on ||com_vel||
  double swing_apex = 0.05;      // m
  double swing_vmax = 5.0;       // m/s
  double ground_clearance = 0.015;  // feet below this height can collide
  Vec3 tracking_gain = Vec3(4.0, 4.0, 4.0);
  bool terminate_on_collision = true;

  int policy_ticks() const;
  void validate() const;
};

struct SimState {
  double time = 0.0;
  DcmState dcm_state;
  GaitContext gait;
  Vec3 swing_liftoff = Vec3::Zero();
  double swing_progress = 0.0;
  SimStatus status = SimStatus::Walking;
};

/// Semi-implicit Euler step of the point-mass dynamics under the commanded
/// VRP and an external force; recomputes the DCM and advances time.
SimState step_dynamics(SimState state, const Vec3& vrp_cmd, const Vec3& push_force,
                       const ModelParams& params, double dt);

/// Moves the swing foot along a cycloidal interpolant toward the target,
/// rate limited so mid-swing retargets stay continuous. Lands exactly on the
/// target at the end of the phase.
SimState advance_swing(SimState state, const Vec3& target, double phase_time, double T,
                       const SimConfig& cfg);

/// Leg-crossing proxy: the leg lines cross beyond their shared hip point, or
/// the foot rectangles overlap near the ground.
bool check_self_collision(const SimState& state, const FootGeometry& foot,
                          double ground_clearance);

/// Divergence proxy: DCM offset from the commanded VRP or CoM speed beyond
/// threshold (strict inequalities).
bool check_fall(const SimState& state, double fall_radius, double fall_speed);

struct EpisodeResult {
  SimStatus status = SimStatus::Walking;
  double total_reward = 0.0;
  double end_time = 0.0;
  int decisions = 0;
  int footsteps = 0;
  int planner_fallbacks = 0;
};

/// Closed-loop point-mass simulation: replans at the tick rate, queries the
/// policy at the decision rate, injects pushes, and detects falls.
class Simulator {
 public:
  Simulator(const PlannerConfig& planner_cfg, const SimConfig& sim_cfg,
            const RewardTable& rewards = {});

  void reset();

  const Observation& observation() const { return obs_; }
  const SimState& state() const { return state_; }
  const PlanResult& last_plan() const { return plan_; }
  const Planner& planner() const { return planner_; }
  const SimConfig& config() const { return cfg_; }
  double time() const { return state_.time; }

  void set_pushes(std::vector<Push> pushes);
  void set_trigger(const TriggeredPush& trigger);
  bool trigger_fired() const { return trigger_fired_; }
  double trigger_time() const { return trigger_time_; }

  struct StepResult {
    double reward = 0.0;
    bool done = false;
    RewardBreakdown breakdown;
  };
  /// Advances one policy period under a latched action.
  StepResult env_step(const AdjustAction& action);

  EpisodeResult run_episode(AdjustPolicy& policy, EpisodeTrace* trace = nullptr);

 private:
  void tick(const AdjustAction& action);
  void refresh_observation();
  Vec3 active_push_force() const;
  geom::Polygon support_polygon() const;
  void maybe_fire_trigger();

  Planner planner_;
  SimConfig cfg_;
  RewardTable rewards_;
  FootGeometry foot_;
  SimState state_;
  PlanResult plan_;
  Observation obs_;
  std::vector<Push> pushes_;
  std::optional<TriggeredPush> trigger_;
  bool trigger_fired_ = false;
  double trigger_time_ = -1.0;
  long tick_index_ = 0;
  bool fell_in_interval_ = false;
  bool collided_in_interval_ = false;
  double total_reward_ = 0.0;
  int footstep_count_ = 0;
  int fallback_count_ = 0;
  EpisodeTrace* sink_ = nullptr;
  std::vector<FootstepEvent> footsteps_;
};

}  // namespace strider
