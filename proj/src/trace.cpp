#include "strider/trace.hpp"

#include "strider/util.hpp"

#include <ostream>
#include <istream>

namespace strider {

namespace {

nlohmann::json vec_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

Vec3 json_vec(const nlohmann::json& a) {
  return Vec3(a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>());
}

int status_code(SimStatus s) { return static_cast<int>(s); }

}  // namespace

void EpisodeTrace::write_jsonl(std::ostream& out) const {
  nlohmann::json header;
  header["record"] = "header";
  header["schema_version"] = schema_version;
  header["config_hash"] = config_hash;
  header["seed"] = seed;
  header["dt"] = dt;
  header["final_status"] = status_name(final_status);
  header["total_reward"] = total_reward;
  header["end_time"] = end_time;
  out << header.dump() << "\n";
  for (const FootstepEvent& f : footsteps) {
    nlohmann::json j;
    j["record"] = "footstep";
    j["index"] = f.index;
    j["side"] = side_name(f.side);
    j["position"] = vec_json(f.position);
    j["time"] = f.time;
    out << j.dump() << "\n";
  }
  for (const TraceRow& r : rows) {
    nlohmann::json j;
    j["record"] = "tick";
    j["time"] = r.time;
    j["com"] = vec_json(r.com);
    j["dcm"] = vec_json(r.dcm);
    j["vrp_cmd"] = vec_json(r.vrp_cmd);
    j["left_foot"] = vec_json(r.left_foot);
    j["right_foot"] = vec_json(r.right_foot);
    j["phase"] = phase_name(r.phase);
    j["support"] = side_name(r.support);
    j["action"] = {r.action.f_hat, r.action.r_hat, r.action.theta};
    j["reward"] = r.reward;
    j["status"] = status_code(r.status);
    j["dcm_ref"] = vec_json(r.dcm_ref);
    j["vrp_ref"] = vec_json(r.vrp_ref);
    j["t_rem"] = r.t_rem;
    j["eta"] = r.eta;
    out << j.dump() << "\n";
  }
}

EpisodeTrace EpisodeTrace::read_jsonl(std::istream& in) {
  EpisodeTrace trace;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    const std::string record = j.at("record").get<std::string>();
    if (record == "header") {
      const int version = j.at("schema_version").get<int>();
      if (version != kTraceSchemaVersion)
        throw std::runtime_error("trace schema version mismatch: file has " +
                                 std::to_string(version) + ", reader expects " +
                                 std::to_string(kTraceSchemaVersion));
      trace.schema_version = version;
      trace.config_hash = j.value("config_hash", "");
      trace.seed = j.at("seed").get<uint64_t>();
      trace.dt = j.at("dt").get<double>();
      const std::string st = j.at("final_status").get<std::string>();
      trace.final_status = st == "walking" ? SimStatus::Walking
                           : st == "fallen" ? SimStatus::Fallen
                                            : SimStatus::SelfCollision;
      trace.total_reward = j.at("total_reward").get<double>();
      trace.end_time = j.at("end_time").get<double>();
      have_header = true;
    } else if (record == "footstep") {
      FootstepEvent f;
      f.index = j.at("index").get<int>();
      f.side = j.at("side").get<std::string>() == "left" ? Side::Left : Side::Right;
      f.position = json_vec(j.at("position"));
      f.time = j.at("time").get<double>();
      trace.footsteps.push_back(f);
    } else if (record == "tick") {
      TraceRow r;
      r.time = j.at("time").get<double>();
      r.com = json_vec(j.at("com"));
      r.dcm = json_vec(j.at("dcm"));
      r.vrp_cmd = json_vec(j.at("vrp_cmd"));
      r.left_foot = json_vec(j.at("left_foot"));
      r.right_foot = json_vec(j.at("right_foot"));
      r.phase = j.at("phase").get<std::string>() == "SS" ? PhaseKind::SingleSupport
                                                         : PhaseKind::DoubleSupport;
      r.support = j.at("support").get<std::string>() == "left" ? Side::Left : Side::Right;
      const auto& a = j.at("action");
      r.action = {a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>()};
      r.reward = j.at("reward").get<double>();
      r.status = static_cast<SimStatus>(j.at("status").get<int>());
      r.dcm_ref = json_vec(j.at("dcm_ref"));
      r.vrp_ref = json_vec(j.at("vrp_ref"));
      r.t_rem = j.at("t_rem").get<double>();
      r.eta = j.at("eta").get<double>();
      trace.rows.push_back(r);
    }
  }
  if (!have_header) throw std::runtime_error("trace stream has no header record");
  return trace;
}

void EpisodeTrace::write_csv(std::ostream& out) const {
  out << "# schema=" << schema_version << " config_hash=" << config_hash << " seed=" << seed
      << "\n";
  out << "time,com_x,com_y,com_z,dcm_x,dcm_y,dcm_z,vrp_cmd_x,vrp_cmd_y,vrp_cmd_z,"
         "left_x,left_y,left_z,right_x,right_y,right_z,phase,support,"
         "action_f,action_r,action_theta,reward,status,"
         "dcm_ref_x,dcm_ref_y,dcm_ref_z,vrp_ref_x,vrp_ref_y,vrp_ref_z,t_rem,eta\n";
  auto v = [&](const Vec3& x) {
    return format_double(x.x()) + "," + format_double(x.y()) + "," + format_double(x.z());
  };
  for (const TraceRow& r : rows) {
    out << format_double(r.time) << "," << v(r.com) << "," << v(r.dcm) << ","
        << v(r.vrp_cmd) << "," << v(r.left_foot) << "," << v(r.right_foot) << ","
        << phase_name(r.phase) << "," << side_name(r.support) << ","
        << format_double(r.action.f_hat) << "," << format_double(r.action.r_hat) << ","
        << format_double(r.action.theta) << "," << format_double(r.reward) << ","
        << status_code(r.status) << "," << v(r.dcm_ref) << "," << v(r.vrp_ref) << ","
        << format_double(r.t_rem) << "," << format_double(r.eta) << "\n";
  }
}

}  // namespace strider
