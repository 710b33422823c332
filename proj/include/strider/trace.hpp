#pragma once

#include "strider/types.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace strider {

enum class SimStatus { Walking, Fallen, SelfCollision };

inline const char* status_name(SimStatus s) {
  switch (s) {
    case SimStatus::Walking: return "walking";
    case SimStatus::Fallen: return "fallen";
    default: return "self_collision";
  }
}

struct TraceRow {
  double time = 0.0;
  Vec3 com = Vec3::Zero();
  Vec3 dcm = Vec3::Zero();
  Vec3 vrp_cmd = Vec3::Zero();
  Vec3 left_foot = Vec3::Zero();
  Vec3 right_foot = Vec3::Zero();
  PhaseKind phase = PhaseKind::SingleSupport;
  Side support = Side::Right;
  AdjustAction action;
  double reward = 0.0;  // filled on decision boundaries
  SimStatus status = SimStatus::Walking;
  Vec3 dcm_ref = Vec3::Zero();
  Vec3 vrp_ref = Vec3::Zero();
  double t_rem = 0.0;
  double eta = 0.0;
};

struct FootstepEvent {
  int index = 0;
  Side side = Side::Left;
  Vec3 position = Vec3::Zero();
  double time = 0.0;
};

constexpr int kTraceSchemaVersion = 1;

struct EpisodeTrace {
  int schema_version = kTraceSchemaVersion;
  std::string config_hash;
  uint64_t seed = 0;
  double dt = 1e-3;
  std::vector<TraceRow> rows;
  std::vector<FootstepEvent> footsteps;
  SimStatus final_status = SimStatus::Walking;
  double total_reward = 0.0;
  double end_time = 0.0;

  void write_jsonl(std::ostream& out) const;
  static EpisodeTrace read_jsonl(std::istream& in);
  void write_csv(std::ostream& out) const;
};

}  // namespace strider
