// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cellsleep {

enum class AgentKind { Ppo, Sarsa, Random };

std::string to_string(AgentKind kind);
AgentKind parse_agent_kind(const std::string& name);  // throws ConfigError

/// Shape of a policy's parameter vector.
///  - Ppo: tanh MLP trunk (inputs -> hidden...) with a linear logit head over
///    `actions` and a linear scalar value head.
///  - Sarsa: linear Q, one weight row of `inputs` per action, no bias.
///  - Random: no parameters.
struct Architecture {
  AgentKind kind = AgentKind::Ppo;
  int inputs = 0;
  std::vector<int> hidden;
  int actions = 0;
  std::string activation = "tanh";

  std::size_t parameter_count() const;
  /// "kind=ppo inputs=60 hidden=64,64 actions=12 activation=tanh"
  std::string descriptor() const;
  static Architecture parse(const std::string& descriptor);
  bool operator==(const Architecture&) const = default;
};

struct PolicyParameters {
  Architecture arch;
  std::vector<double> values;

  /// Throws std::invalid_argument on a length mismatch or non-finite value.
  void validate() const;
  bool operator==(const PolicyParameters&) const = default;
};

/// Orthogonal init (gain 1, logit head 0.01), zero biases.
PolicyParameters init_actor_critic(int inputs, std::vector<int> hidden,
                                   int actions, std::uint64_t seed);

PolicyParameters init_linear_q(int inputs, int actions);

PolicyParameters make_random_policy(int inputs, int actions);

struct PolicyOutput {
  std::vector<double> logits;
  double value = 0.0;
};

/// Activations kept for the backward pass.
struct ForwardCache {
  std::vector<std::vector<double>> layers;  // input, then each hidden output
  PolicyOutput out;
};

/// Actor-critic forward/backward over a flat parameter vector.
class ActorCritic {
 public:
  explicit ActorCritic(const PolicyParameters& params);

  ForwardCache forward(std::span<const double> observation) const;

  /// Adds d(loss)/d(params) to `grad` given the loss gradient w.r.t. the
  /// logits and the value.
  void backward(const ForwardCache& cache, std::span<const double> dlogits,
                double dvalue, std::span<double> grad) const;

 private:
  struct Dense {
    int in = 0;
    int out = 0;
    std::size_t w = 0;  // offset of the row-major out x in weights
    std::size_t b = 0;  // offset of the bias
  };

  const PolicyParameters& params_;
  std::vector<Dense> trunk_;
  Dense logit_;
  Dense value_;
};

/// Logits and state value. Throws std::invalid_argument on a dimension
/// mismatch.
PolicyOutput policy_forward(const PolicyParameters& params,
                            std::span<const double> observation);

/// Q(s, a) for every action of a linear-Q policy.
std::vector<double> q_values(const PolicyParameters& params,
                             std::span<const double> observation);

}  // namespace cellsleep
