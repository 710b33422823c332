#pragma once

#include "strider/geometry.hpp"
#include "strider/qp.hpp"
#include "strider/types.hpp"

namespace strider {

/// Rectangular foot, half length l (x) and half width w (y).
struct FootGeometry {
  double half_length = 0.105;
  double half_width = 0.045;
};

/// Set of DCM errors the VRP shift inside the support can absorb over the
/// preview, as half planes in the ground plane. Contains the origin.
struct CorrectableSet {
  std::vector<geom::HalfPlane> half_planes;
  int phases_used = 0;
  // Half extents of the set; the scaled sum of symmetric foot rectangles is
  // itself an axis-aligned rectangle.
  double half_x = 0.0;
  double half_y = 0.0;

  bool contains(const Vec3& error, double tol = 1e-12) const {
    return geom::contains(half_planes, error.head<2>(), tol);
  }
};

struct ErrorSplit {
  Vec3 ankle = Vec3::Zero();
  Vec3 step = Vec3::Zero();
};

/// VRP command before support clamping: v_ref + (I + b K) (dcm - dcm_ref),
/// K a positive diagonal gain.
Vec3 dcm_tracking_law(const Vec3& dcm, const Vec3& dcm_ref, const Vec3& vrp_ref,
                      const Vec3& gain_diag, double b);

/// Projects the commanded VRP onto the support polygon (ground plane) and
/// pins its height to delta_z.
Vec3 clamp_vrp_to_support(const Vec3& v_cmd, const geom::Polygon& support, double delta_z);

/// Correctable DCM-error set at time t inside the plan's first phase,
/// recursing over up to phases_ahead transition phases with a zero terminal
/// set.
CorrectableSet correctable_set(const PhasePlan& plan, const FootGeometry& foot, double t,
                               int phases_ahead, const ModelParams& params);

/// Splits a DCM error into the projection onto the correctable set (ankle)
/// and the remainder (step). step is exactly zero iff the error lies inside.
ErrorSplit split_error(const Vec3& error, const CorrectableSet& set);

}  // namespace strider
