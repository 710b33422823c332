#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace strider {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

enum class Side { Left, Right };

inline Side other_side(Side s) { return s == Side::Left ? Side::Right : Side::Left; }
inline const char* side_name(Side s) { return s == Side::Left ? "left" : "right"; }
inline double side_sign(Side s) { return s == Side::Left ? 1.0 : -1.0; }

enum class PhaseKind { SingleSupport, DoubleSupport };

inline const char* phase_name(PhaseKind k) {
  return k == PhaseKind::SingleSupport ? "SS" : "DS";
}

/// Template-model constants. b is the time constant of the DCM dynamics and
/// is derived from the average CoM height.
struct ModelParams {
  double delta_z = 0.80;   // m
  double gravity = 9.81;   // m/s^2
  double mass = 40.0;      // kg
  double b = std::sqrt(0.80 / 9.81);  // s

  static ModelParams make(double delta_z, double gravity, double mass) {
    if (!(delta_z > 0.0)) throw std::domain_error("ModelParams: delta_z must be > 0");
    if (!(gravity > 0.0)) throw std::domain_error("ModelParams: gravity must be > 0");
    if (!(mass > 0.0)) throw std::domain_error("ModelParams: mass must be > 0");
    ModelParams p;
    p.delta_z = delta_z;
    p.gravity = gravity;
    p.mass = mass;
    p.b = std::sqrt(delta_z / gravity);
    return p;
  }
};

/// Dynamic state of the point-mass template model.
struct DcmState {
  Vec3 com = Vec3::Zero();      // x
  Vec3 com_vel = Vec3::Zero();  // xdot
  Vec3 dcm = Vec3::Zero();      // xi = x + b*xdot
  Vec3 vrp = Vec3::Zero();      // current commanded VRP

  static DcmState from_com(const Vec3& com, const Vec3& com_vel, const ModelParams& p) {
    DcmState s;
    s.com = com;
    s.com_vel = com_vel;
    s.dcm = com + p.b * com_vel;
    s.vrp = Vec3(com.x(), com.y(), p.delta_z);
    return s;
  }
};

/// One single- or double-support interval. For SS, `side` is the stance foot;
/// for DS, the foot the robot transitions from.
struct TransitionPhase {
  PhaseKind kind = PhaseKind::SingleSupport;
  double duration = 0.0;  // s
  Side side = Side::Left;
};

/// Interpolation coefficients of the piecewise DCM solution at one time
/// instant within a phase of horizon T. alpha and beta weigh the VRP
/// endpoints, gamma the DCM anchor.
struct PhaseCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 1.0;
  double at_time = 0.0;
  double horizon = 0.0;
};

/// Previewed footstep/waypoint plan. Waypoints are one more than phases;
/// adjacent phases share their junction waypoint. `initial_kind` fixes the
/// waypoint-to-foot index mapping (the pairing differs depending on whether
/// the plan starts in single or double support).
struct PhasePlan {
  PhaseKind initial_kind = PhaseKind::SingleSupport;
  std::vector<TransitionPhase> phases;
  std::vector<Vec3> foot_positions;
  std::vector<Side> foot_sides;
  std::vector<Vec3> vrp_waypoints;
  std::vector<Vec3> dcm_waypoints;

  int n_phases() const { return static_cast<int>(phases.size()); }
  int n_waypoints() const { return n_phases() + 1; }
  int n_feet() const { return static_cast<int>(foot_positions.size()); }

  /// Foot index backing waypoint k (0-based). Starting in SS the waypoints
  /// pair on one foot as (0,1),(2,3),...; starting in DS as (1,2),(3,4),...
  int foot_index_for_waypoint(int k) const {
    if (k < 0 || k >= n_waypoints()) throw std::out_of_range("waypoint index");
    return initial_kind == PhaseKind::SingleSupport ? k / 2 : (k + 1) / 2;
  }

  /// Sanity checks: alternation, counts, positive durations.
  void validate() const {
    if (phases.empty()) throw std::domain_error("PhasePlan: no phases");
    if (phases.front().kind != initial_kind)
      throw std::domain_error("PhasePlan: initial_kind mismatch");
    for (int i = 0; i < n_phases(); ++i) {
      if (!(phases[i].duration > 0.0))
        throw std::domain_error("PhasePlan: non-positive phase duration");
      if (i > 0 && phases[i].kind == phases[i - 1].kind)
        throw std::domain_error("PhasePlan: phases must alternate SS/DS");
    }
    if (static_cast<int>(vrp_waypoints.size()) != n_waypoints() && !vrp_waypoints.empty())
      throw std::domain_error("PhasePlan: waypoint count mismatch");
    const int need = foot_index_for_waypoint(n_waypoints() - 1) + 1;
    if (n_feet() < need) throw std::domain_error("PhasePlan: too few foot positions");
    if (foot_sides.size() != foot_positions.size())
      throw std::domain_error("PhasePlan: foot side count mismatch");
  }
};

/// Policy output: step-frequency delta, single-support-ratio delta and the
/// footstep-region rotation about the stance foot.
struct AdjustAction {
  double f_hat = 0.0;    // 1/s
  double r_hat = 0.0;    // dimensionless
  double theta = 0.0;    // rad, |theta| <= pi/2
};

inline void require_finite(const Vec3& v, const char* what) {
  if (!v.allFinite()) throw std::domain_error(std::string(what) + ": non-finite value");
}

}  // namespace strider
