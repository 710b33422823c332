#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "strider/dcm.hpp"

#include "oracles.hpp"

#include <random>

using namespace strider;

namespace {

const ModelParams kParams = ModelParams::make(0.8, 9.81, 40.0);

PhasePlan random_plan(std::mt19937_64& rng, int n_phases, PhaseKind first) {
  PhasePlan plan;
  plan.initial_kind = first;
  PhaseKind kind = first;
  Side stance = Side::Right;
  for (int i = 0; i < n_phases; ++i) {
    TransitionPhase ph;
    ph.kind = kind;
    ph.side = stance;
    ph.duration = oracles::unif(rng, 0.15, 0.7);
    plan.phases.push_back(ph);
    if (kind == PhaseKind::DoubleSupport) stance = other_side(stance);
    kind = kind == PhaseKind::SingleSupport ? PhaseKind::DoubleSupport
                                            : PhaseKind::SingleSupport;
  }
  const int n_feet = plan.foot_index_for_waypoint(plan.n_waypoints() - 1) + 1;
  Vec3 p(0, -0.1, 0);
  Side side = first == PhaseKind::SingleSupport ? Side::Right : Side::Right;
  for (int j = 0; j < n_feet; ++j) {
    plan.foot_positions.push_back(p);
    plan.foot_sides.push_back(side);
    side = other_side(side);
    p += Vec3(oracles::unif(rng, 0.0, 0.3), side == Side::Left ? 0.2 : -0.2, 0.0);
  }
  return plan;
}

}  // namespace

TEST_CASE("dcm definition") {
  // zero velocity: DCM coincides with the CoM
  CHECK(compute_dcm(Vec3(0, 0, 0.8), Vec3::Zero(), kParams) == Vec3(0, 0, 0.8));

  // direct evaluation with b = 0.2856
  ModelParams p = kParams;
  p.b = 0.2856;
  const Vec3 xi = compute_dcm(Vec3(1, 0, 0.8), Vec3(0.5, 0, 0), p);
  CHECK(xi.x() == doctest::Approx(1.1428).epsilon(1e-12));
  CHECK(xi.y() == 0.0);
  CHECK(xi.z() == 0.8);

  CHECK(kParams.b == doctest::Approx(0.28556862458541289).epsilon(1e-15));
}

TEST_CASE("end-of-phase coefficients match high-precision references") {
  struct Ref {
    double T, b, alpha, beta, gamma;
  };
  // Frozen from a 40-digit evaluation of the closed forms.
  const Ref refs[] = {
      {0.2, 0.2, -1.0, -0.718281828459045235, 2.71828182845904524},
      {0.3, 0.25, -1.38668615378942458, -0.933430768947122908, 3.32011692273654749},
      {0.4, 0.28556862458541289, -1.87485556713929933, -1.1832412667742336, 4.05809683391353294},
      {0.5, 0.3, -2.71779602018801175, -1.57669403028201762, 5.29449005047002937},
      {0.7, 0.35, -4.19452804946532511, -2.19452804946532511, 7.38905609893065023},
      {0.9, 0.4, -5.71540879797695873, -2.77232703838156699, 9.48773583635852572},
      {1.0, 0.45, -5.52529789367673837, -2.70251645846278594, 9.2278143521395243},
      {0.25, 0.45, -0.405672801093233765, -0.337236197540224029, 1.74290899863345779},
      {1.2, 0.3, -41.1986125248581793, -12.3995375082860598, 54.5981500331442391},
      {0.15, 0.22, -0.543847396137071061, -0.433622469283490951, 1.97746986542056201},
      {0.56, 0.28556862458541289, -3.99249191231420838, -2.11393621881442187, 7.10642813112863024},
      {0.24, 0.28556862458541289, -0.749873883253661725, -0.56748578176325556, 2.31735966501691728},
  };
  for (const Ref& r : refs) {
    const PhaseCoefficients c = end_of_phase_coefficients(r.T, r.b);
    CHECK(c.alpha == doctest::Approx(r.alpha).epsilon(1e-13));
    CHECK(c.beta == doctest::Approx(r.beta).epsilon(1e-13));
    CHECK(c.gamma == doctest::Approx(r.gamma).epsilon(1e-13));
    CHECK(std::abs(c.alpha + c.beta + c.gamma - 1.0) < 1e-12);
  }
}

TEST_CASE("end-of-phase coefficients: zero-horizon limit and errors") {
  const PhaseCoefficients c = end_of_phase_coefficients(1e-6, 0.28556862458541289);
  CHECK(std::abs(c.gamma - 1.0) < 1e-4);
  CHECK(std::abs(c.alpha) < 1e-4);
  CHECK(std::abs(c.beta) < 1e-4);
  CHECK_THROWS_AS(end_of_phase_coefficients(0.0, 0.3), std::domain_error);
  CHECK_THROWS_AS(end_of_phase_coefficients(0.4, -0.1), std::domain_error);
}

TEST_CASE("coefficient identity over random samples") {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 1000; ++i) {
    const double T = oracles::unif(rng, 0.05, 1.2);
    const double b = oracles::unif(rng, 0.2, 0.45);
    const double t = oracles::unif(rng, 0.0, T);
    const PhaseCoefficients in = in_phase_coefficients(t, T, b);
    CHECK(std::abs(in.alpha + in.beta + in.gamma - 1.0) < 1e-12);
    CHECK(in.gamma > 0.0);
    const PhaseCoefficients fs = from_start_coefficients(t, T, b);
    CHECK(std::abs(fs.alpha + fs.beta + fs.gamma - 1.0) < 1e-12);
    const PhaseCoefficients eop = end_of_phase_coefficients(T, b);
    CHECK(std::abs(eop.alpha + eop.beta + eop.gamma - 1.0) < 1e-12);
  }
}

TEST_CASE("in-phase coefficients: boundaries and the forward/backward swap") {
  const double b = kParams.b;
  const PhaseCoefficients at_end = in_phase_coefficients(0.4, 0.4, b);
  CHECK(at_end.alpha == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(at_end.beta == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(at_end.gamma == doctest::Approx(1.0));

  // Solving the start-anchored form for the end point inverts the
  // terminal-anchored coefficients at t = 0.
  const PhaseCoefficients c0 = in_phase_coefficients(0.0, 0.4, b);
  const PhaseCoefficients eop = end_of_phase_coefficients(0.4, b);
  CHECK(-c0.alpha / c0.gamma == doctest::Approx(eop.alpha).epsilon(1e-12));
  CHECK(-c0.beta / c0.gamma == doctest::Approx(eop.beta).epsilon(1e-12));
  CHECK(1.0 / c0.gamma == doctest::Approx(eop.gamma).epsilon(1e-12));

  CHECK_THROWS_AS(in_phase_coefficients(-0.01, 0.4, b), std::domain_error);
  CHECK_THROWS_AS(in_phase_coefficients(0.41, 0.4, b), std::domain_error);
}

TEST_CASE("closed forms agree with RK4 integration of the dynamics") {
  std::mt19937_64 rng(777);
  for (int i = 0; i < 40; ++i) {
    const double T = oracles::unif(rng, 0.2, 1.0);
    const double b = oracles::unif(rng, 0.2, 0.45);
    const Vec3 v0(oracles::unif(rng, -0.5, 0.5), oracles::unif(rng, -0.5, 0.5), 0.8);
    const Vec3 vT(oracles::unif(rng, -0.5, 0.5), oracles::unif(rng, -0.5, 0.5), 0.8);
    const Vec3 xiT(oracles::unif(rng, -0.5, 0.5), oracles::unif(rng, -0.5, 0.5), 0.8);
    const double t = oracles::unif(rng, 0.0, T);

    // terminal-anchored: integrate backward from xi(T)
    const PhaseCoefficients c = in_phase_coefficients(t, T, b);
    const Vec3 closed = c.alpha * v0 + c.beta * vT + c.gamma * xiT;
    const Vec3 rk = oracles::rk4_dcm(xiT, T, t, 10000, b, v0, vT, T);
    CHECK((closed - rk).lpNorm<Eigen::Infinity>() < 1e-6);

    // start-anchored form evaluated from the phase-start DCM must agree
    const PhaseCoefficients f = from_start_coefficients(t, T, b);
    const PhaseCoefficients c0 = in_phase_coefficients(0.0, T, b);
    const Vec3 start = c0.alpha * v0 + c0.beta * vT + c0.gamma * xiT;
    const Vec3 closed_fwd = f.alpha * v0 + f.beta * vT + f.gamma * start;
    CHECK((closed_fwd - closed).lpNorm<Eigen::Infinity>() < 1e-9);
  }
}

TEST_CASE("backward recursion: equilibrium and ODE oracle") {
  const Vec3 v(0.1, 0.2, 0.8);
  PhasePlan plan;
  plan.initial_kind = PhaseKind::SingleSupport;
  plan.phases = {{PhaseKind::SingleSupport, 0.4, Side::Right}};
  plan.foot_positions = {Vec3(0.1, 0.2, 0.0)};
  plan.foot_sides = {Side::Right};
  plan.vrp_waypoints = {v, v};
  const PhasePlan out = backward_recursion(plan, v, kParams);
  CHECK((out.dcm_waypoints[0] - v).norm() == doctest::Approx(0.0));
  CHECK((out.dcm_waypoints[1] - v).norm() == doctest::Approx(0.0));

  // two phases with distinct VRPs against RK4 run backward in time
  PhasePlan two;
  two.initial_kind = PhaseKind::SingleSupport;
  two.phases = {{PhaseKind::SingleSupport, 0.45, Side::Right},
                {PhaseKind::DoubleSupport, 0.25, Side::Right}};
  two.foot_positions = {Vec3(0, -0.1, 0), Vec3(0.25, 0.1, 0)};
  two.foot_sides = {Side::Right, Side::Left};
  const Vec3 va(0, -0.1, 0.8), vb(0.25, 0.1, 0.8);
  two.vrp_waypoints = {va, va, vb};
  const Vec3 terminal(0.2, 0.05, 0.8);
  const PhasePlan got = backward_recursion(two, terminal, kParams);
  Vec3 xi = oracles::rk4_dcm(terminal, 0.25, 0.0, 2500, kParams.b, va, vb, 0.25);
  xi = oracles::rk4_dcm(xi, 0.45, 0.0, 4500, kParams.b, va, va, 0.45);
  CHECK((got.dcm_waypoints[0] - xi).lpNorm<Eigen::Infinity>() < 1e-6);

  PhasePlan empty;
  CHECK_THROWS_AS(backward_recursion(empty, terminal, kParams), std::domain_error);
}

TEST_CASE("forward recursion: stationary case and single-step evaluation") {
  PhasePlan plan;
  plan.initial_kind = PhaseKind::SingleSupport;
  plan.phases = {{PhaseKind::SingleSupport, 0.4, Side::Right}};
  plan.foot_positions = {Vec3(0.0, 0.1, 0.0)};
  plan.foot_sides = {Side::Right};
  const Vec3 vrp = Vec3(0.0, 0.1, 0.0) + Vec3(0, 0, kParams.delta_z);
  PhasePlan out = forward_recursion(plan, vrp, kParams);
  CHECK((out.dcm_waypoints[1] - vrp).norm() == doctest::Approx(0.0).epsilon(1e-12));

  // one SS phase: xi_2 = (1 - gamma) v + gamma xi_1
  const Vec3 xi1 = vrp + Vec3(0.03, -0.02, 0.0);
  out = forward_recursion(plan, xi1, kParams);
  const double gamma = end_of_phase_coefficients(0.4, kParams.b).gamma;
  const Vec3 expect = (1.0 - gamma) * vrp + gamma * xi1;
  CHECK((out.dcm_waypoints[1] - expect).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK(gamma == doctest::Approx(4.05809683391353294).epsilon(1e-13));
}

TEST_CASE("round trip: backward then forward reproduces all waypoints") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int n_phases = 2 + static_cast<int>(rng() % 7);  // up to 8
    const PhaseKind first =
        (rng() % 2 == 0) ? PhaseKind::SingleSupport : PhaseKind::DoubleSupport;
    PhasePlan plan = random_plan(rng, n_phases, first);
    // VRP waypoints from the foot mapping, as the forward pass derives them
    const Vec3 lift(0, 0, kParams.delta_z);
    plan.vrp_waypoints.resize(plan.n_waypoints());
    for (int k = 0; k < plan.n_waypoints(); ++k)
      plan.vrp_waypoints[k] = plan.foot_positions[plan.foot_index_for_waypoint(k)] + lift;
    const Vec3 terminal = plan.vrp_waypoints.back() + Vec3(0.05, -0.03, 0.0);
    const PhasePlan back = backward_recursion(plan, terminal, kParams);
    const PhasePlan forth = forward_recursion(back, back.dcm_waypoints[0], kParams);
    for (int k = 0; k < plan.n_waypoints(); ++k) {
      CHECK((forth.dcm_waypoints[k] - back.dcm_waypoints[k]).lpNorm<Eigen::Infinity>() <
            1e-9);
      CHECK((forth.vrp_waypoints[k] - back.vrp_waypoints[k]).lpNorm<Eigen::Infinity>() <
            1e-12);
    }
  }
}

TEST_CASE("divergence away from a held VRP") {
  const double b = kParams.b;
  const Vec3 v(0.0, 0.0, 0.8);
  const Vec3 xi0(0.1, -0.04, 0.8);
  double prev = (xi0 - v).norm();
  for (int i = 1; i <= 20; ++i) {
    const double t = 0.05 * i;
    auto [vr, dr] = evaluate_reference(v, v, xi0, 1.0, t, b);
    CHECK((dr - v).norm() > prev);
    prev = (dr - v).norm();
    (void)vr;
  }
}

TEST_CASE("evaluate_reference endpoints and midpoint") {
  const double b = kParams.b;
  const Vec3 v1(0.0, -0.1, 0.8), v2(0.2, 0.1, 0.8);
  const Vec3 xi1(0.05, -0.05, 0.8);
  const double t_rem = 0.3;

  auto [vr0, dr0] = evaluate_reference(v1, v2, xi1, t_rem, 0.0, b);
  CHECK((vr0 - v1).norm() == 0.0);
  CHECK((dr0 - xi1).norm() == 0.0);

  auto [vr1, dr1] = evaluate_reference(v1, v2, xi1, t_rem, t_rem, b);
  CHECK((vr1 - v2).lpNorm<Eigen::Infinity>() < 1e-12);
  const PhaseCoefficients eop = end_of_phase_coefficients(t_rem, b);
  const Vec3 expect = eop.alpha * v1 + eop.beta * v2 + eop.gamma * xi1;
  CHECK((dr1 - expect).lpNorm<Eigen::Infinity>() < 1e-12);

  auto [vrm, drm] = evaluate_reference(v1, v1, xi1, t_rem, t_rem / 2, b);
  CHECK((vrm - v1).lpNorm<Eigen::Infinity>() < 1e-15);
  (void)drm;

  CHECK_THROWS_AS(evaluate_reference(v1, v2, xi1, 0.3, 0.31, b), std::domain_error);
}

TEST_CASE("reference trajectory matches RK4 at interior sample times") {
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 25; ++i) {
    const double b = oracles::unif(rng, 0.2, 0.45);
    const double T = oracles::unif(rng, 0.2, 0.8);
    const double ts = oracles::unif(rng, 0.0, T);
    const Vec3 v1(oracles::unif(rng, -0.3, 0.3), oracles::unif(rng, -0.3, 0.3), 0.8);
    const Vec3 v2(oracles::unif(rng, -0.3, 0.3), oracles::unif(rng, -0.3, 0.3), 0.8);
    const Vec3 xi1(oracles::unif(rng, -0.3, 0.3), oracles::unif(rng, -0.3, 0.3), 0.8);
    auto [vr, dr] = evaluate_reference(v1, v2, xi1, T, ts, b);
    const Vec3 rk = oracles::rk4_dcm(xi1, 0.0, ts, 8000, b, v1, v2, T);
    CHECK((dr - rk).lpNorm<Eigen::Infinity>() < 1e-6);
    (void)vr;
  }
}
