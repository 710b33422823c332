#pragma once

#include "strider/types.hpp"

#include <utility>

namespace strider {

/// DCM from CoM state: xi = x + b*xdot.
Vec3 compute_dcm(const Vec3& com, const Vec3& com_vel, const ModelParams& params);

/// Full-phase coefficients mapping (v_start, v_end, dcm_start) to the DCM at
/// the end of a phase of duration T under linearly interpolated VRP.
PhaseCoefficients end_of_phase_coefficients(double T, double b);

/// Coefficients at time t in [0, T] mapping (v_start, v_end, dcm_end) to the
/// DCM at t — the terminal-anchored solution used when recursing backward.
PhaseCoefficients in_phase_coefficients(double t, double T, double b);

/// Coefficients at time t in [0, T] mapping (v_start, v_end, dcm_start) to
/// the DCM at t — the start-anchored solution used for reference evaluation.
PhaseCoefficients from_start_coefficients(double t, double T, double b);

/// Fills dcm_waypoints from the terminal one backward. Requires populated
/// vrp_waypoints; the last DCM waypoint becomes terminal_dcm.
PhasePlan backward_recursion(PhasePlan plan, const Vec3& terminal_dcm, const ModelParams& params);

/// Derives vrp_waypoints from foot positions, then fills dcm_waypoints
/// forward from initial_dcm over the phase chain.
PhasePlan forward_recursion(PhasePlan plan, const Vec3& initial_dcm, const ModelParams& params);

/// Reference VRP and DCM at sample time t_s into the current interval of
/// remaining duration t_rem, from the interval endpoints v1 -> v2 and the
/// DCM start point xi1.
std::pair<Vec3, Vec3> evaluate_reference(const Vec3& v1, const Vec3& v2, const Vec3& xi1,
                                         double t_rem, double t_s, double b);

}  // namespace strider
