#include "strider/sim.hpp"

#include <cmath>

namespace strider {

int SimConfig::policy_ticks() const {
  const double ratio = policy_period / dt;
  const int n = static_cast<int>(std::lround(ratio));
  return std::max(n, 1);
}

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw std::domain_error("SimConfig: dt must be > 0");
  const double ratio = policy_period / dt;
  if (std::abs(ratio - std::lround(ratio)) > 1e-9)
    throw std::domain_error("SimConfig: policy_period must be an integer multiple of dt");
  if (!(episode_length > 0.0)) throw std::domain_error("SimConfig: episode_length must be > 0");
  if (!(push_duration > 0.0)) throw std::domain_error("SimConfig: push_duration must be > 0");
}

SimState step_dynamics(SimState state, const Vec3& vrp_cmd, const Vec3& push_force,
                       const ModelParams& params, double dt) {
  if (!(dt > 0.0)) throw std::domain_error("step_dynamics: dt must be > 0");
  const Vec3 accel =
      (state.dcm_state.com - vrp_cmd) / (params.b * params.b) + push_force / params.mass;
  state.dcm_state.com_vel += dt * accel;
  state.dcm_state.com += dt * state.dcm_state.com_vel;
  state.dcm_state.dcm = state.dcm_state.com + params.b * state.dcm_state.com_vel;
  state.dcm_state.vrp = vrp_cmd;
  state.time += dt;
  return state;
}

SimState advance_swing(SimState state, const Vec3& target, double phase_time, double T,
                       const SimConfig& cfg) {
  if (state.gait.kind != PhaseKind::SingleSupport)
    throw std::domain_error("advance_swing: not in single support");
  const double s = std::clamp(T > 0.0 ? phase_time / T : 1.0, 0.0, 1.0);
  const double c = s - std::sin(2.0 * M_PI * s) / (2.0 * M_PI);
  Vec3 desired = state.swing_liftoff + c * (target - state.swing_liftoff);
  desired.z() = cfg.swing_apex * std::sin(M_PI * s);

  const Side swing = other_side(state.gait.support);
  Vec3& foot = swing == Side::Left ? state.gait.left_foot : state.gait.right_foot;
  Vec3 delta = desired - foot;
  const double max_step = cfg.swing_vmax * cfg.dt;
  const double len = delta.norm();
  if (len > max_step) delta *= max_step / len;
  foot += delta;
  state.swing_progress = s;
  if (phase_time >= T) {
    foot = target;
    foot.z() = 0.0;
  }
  return state;
}

bool check_self_collision(const SimState& state, const FootGeometry& foot,
                          double ground_clearance) {
  const Vec2 com = state.dcm_state.com.head<2>();
  const Vec2 left = state.gait.left_foot.head<2>();
  const Vec2 right = state.gait.right_foot.head<2>();
  if (geom::segments_cross(left, com, right, com)) return true;
  const bool left_low = state.gait.left_foot.z() < ground_clearance;
  const bool right_low = state.gait.right_foot.z() < ground_clearance;
  if (left_low && right_low) {
    const Vec2 half(foot.half_length, foot.half_width);
    if (geom::rects_overlap(left, half, right, half)) return true;
  }
  return false;
}

bool check_fall(const SimState& state, double fall_radius, double fall_speed) {
  const double offset =
      (state.dcm_state.dcm.head<2>() - state.dcm_state.vrp.head<2>()).norm();
  if (offset > fall_radius) return true;
  return state.dcm_state.com_vel.norm() > fall_speed;
}

Simulator::Simulator(const PlannerConfig& planner_cfg, const SimConfig& sim_cfg,
                     const RewardTable& rewards)
    : planner_(planner_cfg), cfg_(sim_cfg), rewards_(rewards), foot_(planner_cfg.foot) {
  cfg_.validate();
  reset();
}

void Simulator::reset() {
  const GaitParams& gait = planner_.config().gait;
  const double w = 0.5 * gait.step_width;
  state_ = SimState{};
  state_.gait.kind = PhaseKind::SingleSupport;
  state_.gait.support = Side::Right;
  state_.gait.elapsed = 0.0;
  state_.gait.left_foot = Vec3(0.0, w, 0.0);
  state_.gait.right_foot = Vec3(0.0, -w, 0.0);
  state_.gait.current_vrp =
      state_.gait.right_foot + Vec3(0, 0, planner_.config().model.delta_z);
  state_.swing_liftoff = state_.gait.left_foot;

  // start on the nominal trajectory: CoM at the desired DCM start, at rest
  DcmState seed;
  seed.dcm = state_.gait.current_vrp;
  seed.com = seed.dcm;
  const PlanResult probe = planner_.plan_step(seed, state_.gait, {});
  const Vec3 xi0 = probe.nominal_plan.dcm_waypoints[0];
  state_.dcm_state.com = xi0;
  state_.dcm_state.com_vel = Vec3::Zero();
  state_.dcm_state.dcm = xi0;
  state_.dcm_state.vrp = state_.gait.current_vrp;

  pushes_.clear();
  trigger_.reset();
  trigger_fired_ = false;
  trigger_time_ = -1.0;
  tick_index_ = 0;
  fell_in_interval_ = false;
  collided_in_interval_ = false;
  total_reward_ = 0.0;
  footstep_count_ = 0;
  fallback_count_ = 0;
  footsteps_.clear();
  sink_ = nullptr;

  plan_ = planner_.plan_step(state_.dcm_state, state_.gait, {});
  refresh_observation();
}

void Simulator::set_pushes(std::vector<Push> pushes) { pushes_ = std::move(pushes); }

void Simulator::set_trigger(const TriggeredPush& trigger) {
  trigger_ = trigger;
  trigger_fired_ = false;
  trigger_time_ = -1.0;
}

Vec3 Simulator::active_push_force() const {
  Vec3 f = Vec3::Zero();
  for (const Push& p : pushes_) {
    const long start = std::lround(p.start / cfg_.dt);
    const long count = std::max<long>(std::lround(p.duration / cfg_.dt), 1);
    if (tick_index_ >= start && tick_index_ < start + count) f += p.force;
  }
  return f;
}

geom::Polygon Simulator::support_polygon() const {
  const Vec2 half(foot_.half_length, foot_.half_width);
  if (state_.gait.kind == PhaseKind::SingleSupport) {
    const Vec3& stance = state_.gait.foot(state_.gait.support);
    return geom::rectangle(stance.head<2>(), half.x(), half.y());
  }
  std::vector<Vec2> corners;
  for (const Vec3* f : {&state_.gait.left_foot, &state_.gait.right_foot})
    for (const Vec2& v : geom::rectangle(f->head<2>(), half.x(), half.y()))
      corners.push_back(v);
  return geom::convex_hull(corners);
}

void Simulator::maybe_fire_trigger() {
  if (!trigger_ || trigger_fired_) return;
  if (state_.time < trigger_->after_time) return;
  if (state_.gait.kind != trigger_->bucket.kind) return;
  const double total = state_.gait.elapsed + plan_.t_rem;
  const double frac = trigger_->bucket.second_half ? 0.75 : 0.25;
  // fire exactly on the crossing; a phase already past the mark waits for
  // the next one of its kind
  const double mark = frac * total;
  if (state_.gait.elapsed >= mark && state_.gait.elapsed < mark + 1.5 * cfg_.dt) {
    pushes_.push_back({trigger_->force, state_.time, trigger_->duration});
    trigger_fired_ = true;
    trigger_time_ = state_.time;
  }
}

void Simulator::tick(const AdjustAction& action) {
  plan_ = planner_.plan_step(state_.dcm_state, state_.gait, action);
  if (plan_.infeasible) ++fallback_count_;
  maybe_fire_trigger();

  Vec3 v_cmd = dcm_tracking_law(state_.dcm_state.dcm, plan_.dcm_ref, plan_.vrp_ref,
                                cfg_.tracking_gain, planner_.config().model.b);
  v_cmd = clamp_vrp_to_support(v_cmd, support_polygon(), planner_.config().model.delta_z);

  state_ = step_dynamics(state_, v_cmd, active_push_force(), planner_.config().model, cfg_.dt);
  ++tick_index_;

  const double honored = state_.gait.elapsed + plan_.t_rem;
  if (state_.gait.kind == PhaseKind::SingleSupport && plan_.next_footstep)
    state_ = advance_swing(state_, *plan_.next_footstep, state_.gait.elapsed + cfg_.dt,
                           honored, cfg_);
  state_.gait.elapsed += cfg_.dt;

  // reference VRP advances along the replanned first interval
  const double s = std::min(cfg_.dt / plan_.t_rem, 1.0);
  state_.gait.current_vrp = (1.0 - s) * plan_.vrp_ref + s * plan_.v2;

  const Vec3 lift(0, 0, planner_.config().model.delta_z);
  const bool due = state_.gait.elapsed + 1e-12 >= honored ||
                   plan_.t_rem <= planner_.config().min_remaining + 1e-12;
  if (due) {
    if (state_.gait.kind == PhaseKind::SingleSupport) {
      const Side swing = other_side(state_.gait.support);
      Vec3& foot = swing == Side::Left ? state_.gait.left_foot : state_.gait.right_foot;
      if (plan_.next_footstep) foot = *plan_.next_footstep;
      foot.z() = 0.0;
      footsteps_.push_back({footstep_count_++, swing, foot, state_.time});
      state_.gait.kind = PhaseKind::DoubleSupport;  // same support label: the from-foot
      state_.gait.elapsed = 0.0;
      state_.gait.current_vrp = state_.gait.foot(state_.gait.support) + lift;
      state_.swing_progress = 0.0;
    } else {
      const Side new_stance = other_side(state_.gait.support);
      state_.gait.kind = PhaseKind::SingleSupport;
      state_.gait.support = new_stance;
      state_.gait.elapsed = 0.0;
      state_.gait.current_vrp = state_.gait.foot(new_stance) + lift;
      state_.swing_liftoff = state_.gait.foot(other_side(new_stance));
      state_.swing_progress = 0.0;
    }
  }

  if (state_.status == SimStatus::Walking) {
    if (check_fall(state_, cfg_.fall_radius, cfg_.fall_speed)) {
      state_.status = SimStatus::Fallen;
      fell_in_interval_ = true;
    } else if (check_self_collision(state_, foot_, cfg_.ground_clearance)) {
      state_.status = SimStatus::SelfCollision;
      collided_in_interval_ = true;
    }
  }

  if (sink_) {
    TraceRow row;
    row.time = state_.time;
    row.com = state_.dcm_state.com;
    row.dcm = state_.dcm_state.dcm;
    row.vrp_cmd = state_.dcm_state.vrp;
    row.left_foot = state_.gait.left_foot;
    row.right_foot = state_.gait.right_foot;
    row.phase = state_.gait.kind;
    row.support = state_.gait.support;
    row.action = action;
    row.status = state_.status;
    row.dcm_ref = plan_.dcm_ref;
    row.vrp_ref = plan_.vrp_ref;
    row.t_rem = plan_.t_rem;
    row.eta = plan_.eta;
    sink_->rows.push_back(row);
  }
}

void Simulator::refresh_observation() {
  obs_ = build_observation(state_.dcm_state, state_.gait, plan_,
                           planner_.config().gait.v_ref);
}

Simulator::StepResult Simulator::env_step(const AdjustAction& action) {
  fell_in_interval_ = false;
  collided_in_interval_ = false;
  const int n = cfg_.policy_ticks();
  for (int i = 0; i < n; ++i) {
    if (state_.status != SimStatus::Walking) break;
    if (state_.time >= cfg_.episode_length - 0.5 * cfg_.dt) break;
    tick(action);
  }
  StepResult out;
  out.breakdown = compute_reward(action, plan_, fell_in_interval_, collided_in_interval_,
                                 rewards_);
  out.reward = out.breakdown.total;
  total_reward_ += out.reward;
  const bool terminal =
      state_.status == SimStatus::Fallen ||
      (cfg_.terminate_on_collision && state_.status == SimStatus::SelfCollision);
  out.done = terminal || state_.time >= cfg_.episode_length - 0.5 * cfg_.dt;
  if (sink_ && !sink_->rows.empty()) sink_->rows.back().reward = out.reward;
  refresh_observation();
  return out;
}

EpisodeResult Simulator::run_episode(AdjustPolicy& policy, EpisodeTrace* trace) {
  // keep any configured pushes/trigger; restart the dynamic state
  std::vector<Push> pushes = pushes_;
  std::optional<TriggeredPush> trigger = trigger_;
  reset();
  pushes_ = std::move(pushes);
  trigger_ = trigger;
  sink_ = trace;
  if (trace) {
    trace->dt = cfg_.dt;
    trace->rows.clear();
    trace->footsteps.clear();
  }

  EpisodeResult result;
  while (true) {
    const AdjustAction a = policy.act(obs_);
    const StepResult sr = env_step(a);
    ++result.decisions;
    if (sr.done) break;
  }
  result.status = state_.status;
  result.total_reward = total_reward_;
  result.end_time = state_.time;
  result.footsteps = footstep_count_;
  result.planner_fallbacks = fallback_count_;
  if (trace) {
    trace->footsteps = footsteps_;
    trace->final_status = state_.status;
    trace->total_reward = total_reward_;
    trace->end_time = state_.time;
    sink_ = nullptr;
  }
  return result;
}

}  // namespace strider
