#include "strider/dcm.hpp"

#include <cmath>

namespace strider {

Vec3 compute_dcm(const Vec3& com, const Vec3& com_vel, const ModelParams& params) {
  return com + params.b * com_vel;
}

PhaseCoefficients end_of_phase_coefficients(double T, double b) {
  if (!(T > 0.0)) throw std::domain_error("end_of_phase_coefficients: T must be > 0");
  if (!(b > 0.0)) throw std::domain_error("end_of_phase_coefficients: b must be > 0");
  const double x = T / b;
  const double em = std::expm1(x);  // e^{T/b} - 1, keeps the T -> 0 limit exact
  PhaseCoefficients c;
  c.alpha = em / x - (em + 1.0);
  c.beta = 1.0 - em / x;
  c.gamma = em + 1.0;
  c.at_time = T;
  c.horizon = T;
  return c;
}

PhaseCoefficients in_phase_coefficients(double t, double T, double b) {
  if (!(T > 0.0)) throw std::domain_error("in_phase_coefficients: T must be > 0");
  if (!(b > 0.0)) throw std::domain_error("in_phase_coefficients: b must be > 0");
  if (t < 0.0 || t > T) throw std::domain_error("in_phase_coefficients: t outside [0, T]");
  const double u = (T - t) / b;
  const double one_minus_e = -std::expm1(-u);  // 1 - e^{(t-T)/b}
  const double c = b / T;
  PhaseCoefficients out;
  out.gamma = std::exp(-u);
  out.alpha = (1.0 - t / T) - c * one_minus_e;
  out.beta = (1.0 + c) * one_minus_e - (T - t) / T;
  out.at_time = t;
  out.horizon = T;
  return out;
}

PhaseCoefficients from_start_coefficients(double t, double T, double b) {
  if (!(T > 0.0)) throw std::domain_error("from_start_coefficients: T must be > 0");
  if (!(b > 0.0)) throw std::domain_error("from_start_coefficients: b must be > 0");
  if (t < 0.0 || t > T) throw std::domain_error("from_start_coefficients: t outside [0, T]");
  const double em = std::expm1(t / b);  // e^{t/b} - 1
  const double c = b / T;
  PhaseCoefficients out;
  out.gamma = em + 1.0;
  out.beta = t / T - c * em;
  out.alpha = -em * (1.0 - c) - t / T;
  out.at_time = t;
  out.horizon = T;
  return out;
}

PhasePlan backward_recursion(PhasePlan plan, const Vec3& terminal_dcm, const ModelParams& params) {
  if (plan.phases.empty()) throw std::domain_error("backward_recursion: empty plan");
  if (static_cast<int>(plan.vrp_waypoints.size()) != plan.n_waypoints())
    throw std::domain_error("backward_recursion: vrp_waypoints not populated");
  require_finite(terminal_dcm, "backward_recursion terminal_dcm");

  plan.dcm_waypoints.assign(plan.n_waypoints(), Vec3::Zero());
  plan.dcm_waypoints.back() = terminal_dcm;
  for (int k = plan.n_phases() - 1; k >= 0; --k) {
    const PhaseCoefficients c = in_phase_coefficients(0.0, plan.phases[k].duration, params.b);
    plan.dcm_waypoints[k] = c.alpha * plan.vrp_waypoints[k] +
                            c.beta * plan.vrp_waypoints[k + 1] +
                            c.gamma * plan.dcm_waypoints[k + 1];
  }
  return plan;
}

PhasePlan forward_recursion(PhasePlan plan, const Vec3& initial_dcm, const ModelParams& params) {
  plan.validate();
  require_finite(initial_dcm, "forward_recursion initial_dcm");

  const Vec3 lift(0.0, 0.0, params.delta_z);
  plan.vrp_waypoints.resize(plan.n_waypoints());
  for (int k = 0; k < plan.n_waypoints(); ++k)
    plan.vrp_waypoints[k] = plan.foot_positions[plan.foot_index_for_waypoint(k)] + lift;

  plan.dcm_waypoints.assign(plan.n_waypoints(), Vec3::Zero());
  plan.dcm_waypoints[0] = initial_dcm;
  for (int k = 0; k < plan.n_phases(); ++k) {
    const PhaseCoefficients c = end_of_phase_coefficients(plan.phases[k].duration, params.b);
    plan.dcm_waypoints[k + 1] = c.alpha * plan.vrp_waypoints[k] +
                                c.beta * plan.vrp_waypoints[k + 1] +
                                c.gamma * plan.dcm_waypoints[k];
  }
  return plan;
}

std::pair<Vec3, Vec3> evaluate_reference(const Vec3& v1, const Vec3& v2, const Vec3& xi1,
                                         double t_rem, double t_s, double b) {
  if (!(t_rem > 0.0)) throw std::domain_error("evaluate_reference: t_rem must be > 0");
  if (t_s < 0.0 || t_s > t_rem)
    throw std::domain_error("evaluate_reference: t_s outside [0, t_rem]");
  const double s = t_s / t_rem;
  const Vec3 vrp_ref = (1.0 - s) * v1 + s * v2;
  if (t_s == 0.0) return {vrp_ref, xi1};
  const PhaseCoefficients c = from_start_coefficients(t_s, t_rem, b);
  const Vec3 dcm_ref = c.alpha * v1 + c.beta * v2 + c.gamma * xi1;
  return {vrp_ref, dcm_ref};
}

}  // namespace strider
