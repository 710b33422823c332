#pragma once

#include "strider/rl.hpp"

#include <json.hpp>

#include <random>
#include <string>
#include <vector>

namespace strider {

/// Fully connected net, tanh hidden activations, linear output. Parameters
/// live in one flat vector so the optimizer can treat them uniformly.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<int> sizes);

  void init(std::mt19937_64& rng, double last_layer_scale = 1.0);

  int num_params() const { return static_cast<int>(theta_.size()); }
  const Eigen::VectorXd& params() const { return theta_; }
  Eigen::VectorXd& params() { return theta_; }
  const std::vector<int>& sizes() const { return sizes_; }
  int in_dim() const { return sizes_.front(); }
  int out_dim() const { return sizes_.back(); }

  struct Cache {
    std::vector<Eigen::MatrixXd> acts;  // acts[0] = input, acts[L] = output
  };

  /// x is in_dim x batch; returns out_dim x batch.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Cache* cache = nullptr) const;

  /// Accumulates d(loss)/d(theta) given d(loss)/d(output); returns
  /// d(loss)/d(input) when requested.
  void backward(const Cache& cache, const Eigen::MatrixXd& dout,
                Eigen::Ref<Eigen::VectorXd> grad, Eigen::MatrixXd* dinput = nullptr) const;

 private:
  std::vector<int> sizes_;
  std::vector<int> w_off_, b_off_;
  Eigen::VectorXd theta_;

  Eigen::Map<const Eigen::MatrixXd> weight(int l) const;
  Eigen::Map<const Eigen::VectorXd> bias(int l) const;
};

struct Adam {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  Eigen::VectorXd m, v;
  long steps = 0;

  void step(Eigen::Ref<Eigen::VectorXd> theta, const Eigen::VectorXd& grad);
};

/// Actor-critic parameters: squashed diagonal-Gaussian actor and a value
/// head, plus the action squashing scales.
struct PolicyParams {
  Mlp actor;   // obs -> pre-squash action mean
  Mlp critic;  // obs -> value
  Eigen::VectorXd log_std;  // state independent
  double theta_max = 1.5707963267948966;
  double f_scale = 0.6;
  double r_scale = 0.25;
  std::string obs_schema;

  static PolicyParams make(int obs_dim, int hidden, std::mt19937_64& rng);

  nlohmann::json to_json() const;
  static PolicyParams from_json(const nlohmann::json& j);
  void save(const std::string& path, const std::string& config_hash, uint64_t seed) const;
  static PolicyParams load(const std::string& path);

  AdjustAction squash(const Eigen::Vector3d& u) const;
};

struct PolicySample {
  AdjustAction action;
  Eigen::Vector3d raw = Eigen::Vector3d::Zero();  // pre-squash sample
  double log_prob = 0.0;
  double value = 0.0;
};

/// Forward pass of the policy. Deterministic mode returns the distribution
/// mean; stochastic mode samples with the caller's generator.
PolicySample policy_act(const PolicyParams& params, const Observation& obs,
                        bool deterministic, std::mt19937_64* rng);

/// Identifier of the observation layout baked into checkpoints.
std::string observation_schema();

/// Action source queried at the policy rate.
struct AdjustPolicy {
  virtual ~AdjustPolicy() = default;
  virtual AdjustAction act(const Observation& obs) = 0;
};

struct ZeroPolicy final : AdjustPolicy {
  AdjustAction act(const Observation&) override { return {}; }
};

struct ConstantPolicy final : AdjustPolicy {
  AdjustAction action;
  explicit ConstantPolicy(AdjustAction a) : action(a) {}
  AdjustAction act(const Observation&) override { return action; }
};

class MlpPolicy final : public AdjustPolicy {
 public:
  MlpPolicy(PolicyParams params, bool deterministic, uint64_t seed = 0)
      : params_(std::move(params)), deterministic_(deterministic), rng_(seed) {}

  AdjustAction act(const Observation& obs) override {
    return policy_act(params_, obs, deterministic_, &rng_).action;
  }

  const PolicyParams& params() const { return params_; }

 private:
  PolicyParams params_;
  bool deterministic_;
  std::mt19937_64 rng_;
};

}  // namespace strider
