// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cellsleep/errors.hpp"
#include "cellsleep/policy.hpp"

namespace cellsleep {

void PpoHyper::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("ppo.learning_rate", "must be > 0");
  if (batch_size < 1) throw ConfigError("ppo.batch_size", "must be >= 1");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw ConfigError("ppo.gamma", "must be in [0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0))
    throw ConfigError("ppo.gae_lambda", "must be in [0, 1]");
  if (!(clip_epsilon > 0.0)) throw ConfigError("ppo.clip_epsilon", "must be > 0");
  if (!(value_coeff >= 0.0)) throw ConfigError("ppo.value_coeff", "must be >= 0");
  if (!(entropy_coeff >= 0.0))
    throw ConfigError("ppo.entropy_coeff", "must be >= 0");
  if (epochs_per_batch < 1)
    throw ConfigError("ppo.epochs_per_batch", "must be >= 1");
  if (rollout_length < 1) throw ConfigError("ppo.rollout_length", "must be >= 1");
  if (hidden.empty()) throw ConfigError("ppo.hidden", "needs at least one layer");
  for (int h : hidden)
    if (h < 1) throw ConfigError("ppo.hidden", "layer sizes must be >= 1");
}

GaeResult gae(std::span<const double> rewards, std::span<const double> values,
              std::span<const std::uint8_t> dones, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n + 1 || dones.size() != n)
    throw std::invalid_argument("gae: need |values| = |rewards| + 1 = |dones| + 1");
  GaeResult r;
  r.advantages.assign(n, 0.0);
  r.returns.assign(n, 0.0);
  double next_adv = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double nonterminal = dones[t] ? 0.0 : 1.0;
    const double delta = rewards[t] + gamma * values[t + 1] * nonterminal - values[t];
    next_adv = delta + gamma * lambda * nonterminal * next_adv;
    r.advantages[t] = next_adv;
    r.returns[t] = next_adv + values[t];
  }
  return r;
}

LossStats ppo_loss_and_grad(const PolicyParameters& params,
                            std::span<const PpoSample> batch,
                            const PpoHyper& hyper, std::vector<double>& grad) {
  if (batch.empty()) throw std::invalid_argument("ppo_loss_and_grad: empty batch");
  grad.assign(params.values.size(), 0.0);
  const ActorCritic net(params);
  const double m = static_cast<double>(batch.size());
  const double eps = hyper.clip_epsilon;
  LossStats s;
  std::vector<double> dlogits;
  for (const PpoSample& sample : batch) {
    const Transition& t = *sample.transition;
    const ForwardCache cache = net.forward(t.observation);
    const auto logp = masked_log_softmax(cache.out.logits, t.mask);
    const double a = sample.advantage;
    const double ratio = std::exp(logp[t.action] - t.log_prob);
    const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
    s.policy_loss -= std::min(ratio * a, clipped * a);
    const bool active = a >= 0.0 ? ratio <= 1.0 + eps : ratio >= 1.0 - eps;
    if (std::abs(ratio - 1.0) > eps) s.clip_fraction += 1.0;
    s.approx_kl += t.log_prob - logp[t.action];

    double entropy = 0.0;
    for (std::size_t j = 0; j < logp.size(); ++j)
      if (t.mask[j]) entropy -= std::exp(logp[j]) * logp[j];
    s.entropy += entropy;

    const double verr = cache.out.value - sample.ret;
    s.value_loss += verr * verr;

    dlogits.assign(logp.size(), 0.0);
    const double pg = active ? ratio * a : 0.0;
    for (std::size_t j = 0; j < logp.size(); ++j) {
      if (!t.mask[j]) continue;
      const double pj = std::exp(logp[j]);
      const double onehot = static_cast<int>(j) == t.action ? 1.0 : 0.0;
      dlogits[j] = (-pg * (onehot - pj) +
                    hyper.entropy_coeff * pj * (logp[j] + entropy)) / m;
    }
    net.backward(cache, dlogits, 2.0 * hyper.value_coeff * verr / m, grad);
  }
  s.policy_loss /= m;
  s.value_loss /= m;
  s.entropy /= m;
  s.clip_fraction /= m;
  s.approx_kl /= m;
  s.total = s.policy_loss + hyper.value_coeff * s.value_loss -
            hyper.entropy_coeff * s.entropy;
  return s;
}

AdamOptimizer::AdamOptimizer(std::size_t size, double beta1, double beta2,
                             double epsilon)
    : beta1_(beta1), beta2_(beta2), epsilon_(epsilon), m_(size, 0.0), v_(size, 0.0) {}

void AdamOptimizer::step(std::span<double> params, std::span<const double> grad,
                         double lr) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    throw std::invalid_argument("AdamOptimizer: size mismatch");
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    params[i] -= lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + epsilon_);
  }
}

PpoStats ppo_update(PolicyParameters& params, AdamOptimizer& optimizer,
                    std::span<const Transition> batch, const PpoHyper& hyper,
                    Rng& rng) {
  if (batch.empty()) throw std::invalid_argument("ppo_update: empty batch");
  const std::size_t n = batch.size();

  std::vector<double> rewards(n), values(n + 1, 0.0);
  std::vector<std::uint8_t> dones(n);
  for (std::size_t i = 0; i < n; ++i) {
    rewards[i] = batch[i].reward;
    values[i] = batch[i].value;
    dones[i] = batch[i].done ? 1 : 0;
  }
  if (!batch.back().done)
    values[n] = policy_forward(params, batch.back().next_observation).value;
  GaeResult g = gae(rewards, values, dones, hyper.gamma, hyper.gae_lambda);

  const double mean = std::accumulate(g.advantages.begin(), g.advantages.end(), 0.0) / n;
  double var = 0.0;
  for (double a : g.advantages) var += (a - mean) * (a - mean);
  const double sd = std::max(std::sqrt(var / n), 1e-8);

  std::vector<PpoSample> samples(n);
  for (std::size_t i = 0; i < n; ++i)
    samples[i] = {&batch[i], (g.advantages[i] - mean) / sd, g.returns[i]};

  const std::vector<double> original = params.values;
  const AdamOptimizer optimizer_backup = optimizer;
  PpoStats stats;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<PpoSample> mb;
  std::vector<double> grad;
  const auto bs = static_cast<std::size_t>(hyper.batch_size);
  for (int epoch = 0; epoch < hyper.epochs_per_batch; ++epoch) {
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    for (std::size_t start = 0; start < n; start += bs) {
      mb.clear();
      for (std::size_t i = start; i < std::min(n, start + bs); ++i)
        mb.push_back(samples[order[i]]);
      const LossStats ls = ppo_loss_and_grad(params, mb, hyper, grad);
      bool finite = std::isfinite(ls.total);
      for (double x : grad) finite = finite && std::isfinite(x);
      if (!finite) {
        params.values = original;
        optimizer = optimizer_backup;
        throw NumericError("ppo_update: non-finite loss or gradient in epoch " +
                           std::to_string(epoch) + " (policy loss " +
                           std::to_string(ls.policy_loss) + ", value loss " +
                           std::to_string(ls.value_loss) + ")");
      }
      optimizer.step(params.values, grad, hyper.learning_rate);
      if (stats.minibatches == 0) stats.first_clip_fraction = ls.clip_fraction;
      ++stats.minibatches;
      stats.policy_loss += ls.policy_loss;
      stats.value_loss += ls.value_loss;
      stats.entropy += ls.entropy;
      stats.clip_fraction += ls.clip_fraction;
      stats.approx_kl += ls.approx_kl;
    }
  }
  const double k = stats.minibatches;
  stats.policy_loss /= k;
  stats.value_loss /= k;
  stats.entropy /= k;
  stats.clip_fraction /= k;
  stats.approx_kl /= k;
  return stats;
}

}  // namespace cellsleep
