// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cellsleep/policy_net.hpp"
#include "cellsleep/rng.hpp"

namespace cellsleep {

struct PpoHyper {
  double learning_rate = 1e-5;
  int batch_size = 64;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_epsilon = 0.2;
  double value_coeff = 0.5;
  double entropy_coeff = 0.01;
  int epochs_per_batch = 4;
  int rollout_length = 2048;
  std::vector<int> hidden{64, 64};

  void validate() const;  // throws ConfigError
  bool operator==(const PpoHyper&) const = default;
};

struct Transition {
  std::vector<double> observation;
  std::vector<std::uint8_t> mask;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_observation;
  bool done = false;
  double log_prob = 0.0;  // under the behavior policy
  double value = 0.0;     // V(observation) under the behavior policy
};

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

/// Generalized advantage estimation. `values` carries one extra bootstrap
/// entry; a done step never bootstraps.
GaeResult gae(std::span<const double> rewards, std::span<const double> values,
              std::span<const std::uint8_t> dones, double gamma, double lambda);

/// One training sample: a transition with its (normalized) advantage and
/// return target.
struct PpoSample {
  const Transition* transition = nullptr;
  double advantage = 0.0;
  double ret = 0.0;
};

struct LossStats {
  double total = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
};

/// Minibatch loss
///   -mean(min(rho A, clip(rho, 1 +- eps) A)) + c_v mean((V - R)^2)
///   - c_e mean(H)
/// and its exact gradient, written into `grad` (resized and zeroed).
LossStats ppo_loss_and_grad(const PolicyParameters& params,
                            std::span<const PpoSample> batch,
                            const PpoHyper& hyper, std::vector<double>& grad);

class AdamOptimizer {
 public:
  explicit AdamOptimizer(std::size_t size, double beta1 = 0.9,
                         double beta2 = 0.999, double epsilon = 1e-8);
  /// Descends along `grad`.
  void step(std::span<double> params, std::span<const double> grad, double lr);
  std::int64_t steps() const { return t_; }

 private:
  double beta1_, beta2_, epsilon_;
  std::vector<double> m_, v_;
  std::int64_t t_ = 0;
};

struct PpoStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;        // mean over minibatches
  double first_clip_fraction = 0.0;  // first minibatch of the first epoch
  double approx_kl = 0.0;
  int minibatches = 0;
};

/// Runs epochs_per_batch shuffled minibatch passes of clipped-surrogate
/// gradient steps over the batch. Advantages are normalized over the whole
/// batch. Throws NumericError (leaving `params` untouched) when a loss or
/// gradient turns non-finite.
PpoStats ppo_update(PolicyParameters& params, AdamOptimizer& optimizer,
                    std::span<const Transition> batch, const PpoHyper& hyper,
                    Rng& rng);

}  // namespace cellsleep
