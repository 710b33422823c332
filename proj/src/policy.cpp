#include "strider/policy.hpp"

#include "strider/util.hpp"

#include <cmath>
#include <fstream>

namespace strider {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need at least two layer sizes");
  int off = 0;
  for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
    w_off_.push_back(off);
    off += sizes_[l + 1] * sizes_[l];
    b_off_.push_back(off);
    off += sizes_[l + 1];
  }
  theta_ = VectorXd::Zero(off);
}

Eigen::Map<const MatrixXd> Mlp::weight(int l) const {
  return {theta_.data() + w_off_[l], sizes_[l + 1], sizes_[l]};
}

Eigen::Map<const VectorXd> Mlp::bias(int l) const {
  return {theta_.data() + b_off_[l], sizes_[l + 1]};
}

void Mlp::init(std::mt19937_64& rng, double last_layer_scale) {
  const int layers = static_cast<int>(sizes_.size()) - 1;
  for (int l = 0; l < layers; ++l) {
    const double bound = std::sqrt(6.0 / (sizes_[l] + sizes_[l + 1])) *
                         (l == layers - 1 ? last_layer_scale : 1.0);
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (int i = 0; i < sizes_[l + 1] * sizes_[l]; ++i) theta_(w_off_[l] + i) = dist(rng);
    for (int i = 0; i < sizes_[l + 1]; ++i) theta_(b_off_[l] + i) = 0.0;
  }
}

MatrixXd Mlp::forward(const MatrixXd& x, Cache* cache) const {
  if (x.rows() != sizes_.front()) throw std::invalid_argument("Mlp::forward: bad input dim");
  const int layers = static_cast<int>(sizes_.size()) - 1;
  if (cache) {
    cache->acts.clear();
    cache->acts.push_back(x);
  }
  MatrixXd a = x;
  for (int l = 0; l < layers; ++l) {
    MatrixXd z = (weight(l) * a).colwise() + bias(l);
    if (l + 1 < layers) z = z.array().tanh();
    a = std::move(z);
    if (cache) cache->acts.push_back(a);
  }
  return a;
}

void Mlp::backward(const Cache& cache, const MatrixXd& dout,
                   Eigen::Ref<VectorXd> grad, MatrixXd* dinput) const {
  const int layers = static_cast<int>(sizes_.size()) - 1;
  if (static_cast<int>(cache.acts.size()) != layers + 1)
    throw std::invalid_argument("Mlp::backward: cache mismatch");
  MatrixXd delta = dout;  // d(loss)/d(pre-activation) for the output layer
  for (int l = layers - 1; l >= 0; --l) {
    const MatrixXd& a_in = cache.acts[l];
    Eigen::Map<MatrixXd> gw(grad.data() + w_off_[l], sizes_[l + 1], sizes_[l]);
    Eigen::Map<VectorXd> gb(grad.data() + b_off_[l], sizes_[l + 1]);
    gw.noalias() += delta * a_in.transpose();
    gb.noalias() += delta.rowwise().sum();
    if (l > 0) {
      // propagate through the tanh of the previous layer
      MatrixXd da = weight(l).transpose() * delta;
      const MatrixXd& a_prev = cache.acts[l];
      delta = da.array() * (1.0 - a_prev.array().square());
    } else if (dinput) {
      *dinput = weight(0).transpose() * delta;
    }
  }
}

void Adam::step(Eigen::Ref<VectorXd> theta, const VectorXd& grad) {
  if (m.size() != theta.size()) {
    m = VectorXd::Zero(theta.size());
    v = VectorXd::Zero(theta.size());
  }
  ++steps;
  m = beta1 * m + (1.0 - beta1) * grad;
  v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(steps));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(steps));
  const VectorXd denom = (v / bc2).cwiseSqrt() + VectorXd::Constant(theta.size(), eps);
  theta -= (lr / bc1) * m.cwiseQuotient(denom);
}

PolicyParams PolicyParams::make(int obs_dim, int hidden, std::mt19937_64& rng) {
  PolicyParams p;
  p.actor = Mlp({obs_dim, hidden, hidden, 3});
  p.critic = Mlp({obs_dim, hidden, hidden, 1});
  p.actor.init(rng, 0.01);
  p.critic.init(rng, 1.0);
  p.log_std = VectorXd::Constant(3, -0.7);
  p.obs_schema = observation_schema();
  return p;
}

AdjustAction PolicyParams::squash(const Eigen::Vector3d& u) const {
  AdjustAction a;
  a.f_hat = f_scale * std::tanh(u(0));
  a.r_hat = r_scale * std::tanh(u(1));
  a.theta = theta_max * std::tanh(u(2));
  return a;
}

namespace {

nlohmann::json vec_json(const VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

VectorXd json_vec(const nlohmann::json& a) {
  VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  return v;
}

}  // namespace

std::string observation_schema() {
  static const std::string fields =
      "dcm_error_ankle[3],dcm_error_step[3],t_rem_norm,phase_flag,swing_foot_flag,"
      "swing_foot_rel[3],com_vel[3],v_ref[3]";
  return fnv1a64_hex(fields);
}

nlohmann::json PolicyParams::to_json() const {
  nlohmann::json j;
  j["kind"] = "strider-policy";
  j["schema_version"] = 1;
  j["obs_dim"] = actor.in_dim();
  j["act_dim"] = actor.out_dim();
  j["hidden"] = std::vector<int>(actor.sizes().begin() + 1, actor.sizes().end() - 1);
  j["activation"] = "tanh";
  j["obs_schema"] = obs_schema;
  j["squash"] = {{"theta_max", theta_max}, {"f_scale", f_scale}, {"r_scale", r_scale}};
  j["log_std"] = vec_json(log_std);
  j["actor"] = vec_json(actor.params());
  j["critic"] = vec_json(critic.params());
  return j;
}

PolicyParams PolicyParams::from_json(const nlohmann::json& j) {
  if (j.value("kind", "") != "strider-policy")
    throw std::runtime_error("policy checkpoint: unrecognized kind");
  if (j.value("schema_version", 0) != 1)
    throw std::runtime_error("policy checkpoint: unsupported schema_version " +
                             std::to_string(j.value("schema_version", 0)) + ", expected 1");
  PolicyParams p;
  const int obs_dim = j.at("obs_dim").get<int>();
  const int act_dim = j.at("act_dim").get<int>();
  std::vector<int> actor_sizes{obs_dim};
  for (int h : j.at("hidden").get<std::vector<int>>()) actor_sizes.push_back(h);
  std::vector<int> critic_sizes = actor_sizes;
  actor_sizes.push_back(act_dim);
  critic_sizes.push_back(1);
  p.actor = Mlp(actor_sizes);
  p.critic = Mlp(critic_sizes);
  const VectorXd actor_theta = json_vec(j.at("actor"));
  const VectorXd critic_theta = json_vec(j.at("critic"));
  if (actor_theta.size() != p.actor.num_params() ||
      critic_theta.size() != p.critic.num_params())
    throw std::runtime_error("policy checkpoint: parameter count mismatch");
  p.actor.params() = actor_theta;
  p.critic.params() = critic_theta;
  p.log_std = json_vec(j.at("log_std"));
  p.theta_max = j.at("squash").at("theta_max").get<double>();
  p.f_scale = j.at("squash").at("f_scale").get<double>();
  p.r_scale = j.at("squash").at("r_scale").get<double>();
  p.obs_schema = j.at("obs_schema").get<std::string>();
  if (p.obs_schema != observation_schema())
    throw std::runtime_error("policy checkpoint: observation schema mismatch (checkpoint " +
                             p.obs_schema + ", runtime " + observation_schema() + ")");
  return p;
}

void PolicyParams::save(const std::string& path, const std::string& config_hash,
                        uint64_t seed) const {
  nlohmann::json j = to_json();
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write policy checkpoint: " + path);
  out << j.dump();
  out << "\n";
}

PolicyParams PolicyParams::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read policy checkpoint: " + path);
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

PolicySample policy_act(const PolicyParams& params, const Observation& obs,
                        bool deterministic, std::mt19937_64* rng) {
  const VectorXd x = obs.to_vector();
  const VectorXd mean = params.actor.forward(x);
  const VectorXd value = params.critic.forward(x);
  PolicySample s;
  s.value = value(0);
  Eigen::Vector3d u = mean.head<3>();
  if (!deterministic) {
    if (!rng) throw std::invalid_argument("policy_act: stochastic mode needs a generator");
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < 3; ++i) u(i) += std::exp(params.log_std(i)) * normal(*rng);
  }
  s.raw = u;
  double lp = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double sd = std::exp(params.log_std(i));
    const double z = (u(i) - mean(i)) / sd;
    lp += -0.5 * z * z - params.log_std(i) - 0.5 * std::log(2.0 * M_PI);
  }
  s.log_prob = lp;
  s.action = params.squash(u);
  return s;
}

}  // namespace strider
