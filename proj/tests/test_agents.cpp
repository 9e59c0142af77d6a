// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cellsleep/errors.hpp"
#include "cellsleep/policy.hpp"
#include "cellsleep/policy_net.hpp"
#include "cellsleep/ppo.hpp"
#include "cellsleep/rollout.hpp"
#include "cellsleep/sarsa.hpp"
#include "cellsleep/train.hpp"

using namespace cellsleep;

namespace {

std::vector<double> random_vec(Rng& rng, int n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

// Toy batch from the given parameters, with behavior log-probs perturbed so
// the ratios spread around 1 and exercise both clip branches.
std::vector<Transition> toy_batch(const PolicyParameters& p, Rng& rng, int n, double jitter) {
  std::vector<Transition> batch;
  const int in = p.arch.inputs, k = p.arch.actions;
  for (int i = 0; i < n; ++i) {
    Transition t;
    t.observation = random_vec(rng, in);
    t.mask.assign(k, 1);
    if (k > 2) t.mask[rng.below(k)] = 0;
    std::vector<double> logits = policy_forward(p, t.observation).logits;
    const auto logp = masked_log_softmax(logits, t.mask);
    do t.action = static_cast<int>(rng.below(k));
    while (!t.mask[t.action]);
    t.log_prob = logp[t.action] + rng.uniform(-jitter, jitter);
    t.reward = rng.uniform(-1, 1);
    t.value = policy_forward(p, t.observation).value;
    t.next_observation = random_vec(rng, in);
    t.done = true;
    batch.push_back(std::move(t));
  }
  return batch;
}

double loss_at(const PolicyParameters& p, std::span<const PpoSample> s, const PpoHyper& h) {
  std::vector<double> g;
  return ppo_loss_and_grad(p, s, h, g).total;
}

}  // namespace

TEST_CASE("architecture descriptor round trip and sizes") {
  Architecture a{AgentKind::Ppo, 60, {64, 64}, 12, "tanh"};
  CHECK(a.descriptor() == "kind=ppo inputs=60 hidden=64,64 actions=12 activation=tanh");
  CHECK(Architecture::parse(a.descriptor()) == a);
  // 60*64+64 + 64*64+64 + 64*12+12 + 64+1
  CHECK(a.parameter_count() == 8909u);
  Architecture q{AgentKind::Sarsa, 60, {}, 12, "tanh"};
  CHECK(q.parameter_count() == 720u);
  CHECK_THROWS_AS(Architecture::parse("kind=ppo inputs=x"), ConfigError);
  CHECK(parse_agent_kind("sarsa") == AgentKind::Sarsa);
  CHECK_THROWS_AS(parse_agent_kind("dqn"), ConfigError);
}

TEST_CASE("policy forward") {
  PolicyParameters zero = init_actor_critic(6, {8, 8}, 4, 1);
  std::fill(zero.values.begin(), zero.values.end(), 0.0);
  const std::vector<double> obs{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const auto out = policy_forward(zero, obs);
  CHECK(out.logits == std::vector<double>(4, 0.0));
  CHECK(out.value == 0.0);
  const std::vector<std::uint8_t> mask(4, 1);
  for (double lp : masked_log_softmax(out.logits, mask)) CHECK(lp == doctest::Approx(std::log(0.25)));

  const auto p = init_actor_critic(6, {8, 8}, 4, 7);
  CHECK(policy_forward(p, obs).logits == policy_forward(p, obs).logits);
  CHECK_THROWS_AS(policy_forward(p, std::vector<double>(5, 0.0)), std::invalid_argument);
}

TEST_CASE("orthogonal init") {
  const auto p = init_actor_critic(5, {8}, 3, 3);
  // first layer is 8x5 row-major: its columns are orthonormal
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      double dot = 0.0;
      for (int r = 0; r < 8; ++r) dot += p.values[r * 5 + a] * p.values[r * 5 + b];
      CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-9));
    }
  CHECK(init_actor_critic(5, {8}, 3, 3) == p);
  CHECK(init_actor_critic(5, {8}, 3, 4) != p);
}

TEST_CASE("forward outputs follow their finite-difference derivatives") {
  Rng rng(12);
  const auto p = init_actor_critic(4, {8, 8}, 3, 5);
  const ActorCritic net(p);
  const auto obs = random_vec(rng, 4);
  const auto cache = net.forward(obs);
  // d(value)/d(params) and d(logit_1)/d(params)
  for (int head = 0; head < 2; ++head) {
    std::vector<double> g(p.values.size(), 0.0);
    std::vector<double> dl(3, 0.0);
    double dv = 0.0;
    if (head == 0) dv = 1.0; else dl[1] = 1.0;
    net.backward(cache, dl, dv, g);
    for (std::size_t i = 0; i < p.values.size(); i += 7) {
      auto q = p;
      const double h = 1e-6;
      q.values[i] += h;
      const auto up = policy_forward(q, obs);
      q.values[i] -= 2 * h;
      const auto dn = policy_forward(q, obs);
      const double fd = head == 0 ? (up.value - dn.value) / (2 * h)
                                  : (up.logits[1] - dn.logits[1]) / (2 * h);
      CHECK(std::abs(fd - g[i]) <= std::max(1e-6, 1e-4 * std::abs(fd)));
    }
  }
}

TEST_CASE("action selection") {
  Rng rng(1);
  const std::vector<double> logits{0.3, 2.0, -1.0, 2.0};
  const std::vector<std::uint8_t> one{0, 0, 1, 0};
  for (auto mode : {ActionMode::Sample, ActionMode::Greedy, ActionMode::Epsilon, ActionMode::Random})
    CHECK(select_action(logits, one, mode, rng, 0.5) == 2);
  const std::vector<std::uint8_t> all(4, 1);
  CHECK(select_action(logits, all, ActionMode::Greedy, rng) == 1);  // tie to the lower id
  const std::vector<std::uint8_t> none(4, 0);
  CHECK_THROWS_AS(select_action(logits, none, ActionMode::Greedy, rng), std::invalid_argument);

  const std::vector<double> flat(5, 0.0);
  const std::vector<std::uint8_t> three{1, 0, 1, 0, 1};
  std::vector<int> counts(5, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[select_action(flat, three, ActionMode::Sample, rng)];
  CHECK(counts[1] == 0);
  CHECK(counts[3] == 0);
  for (int j : {0, 2, 4}) CHECK(std::abs(counts[j] / double(n) - 1.0 / 3.0) < 0.01);

  const std::vector<double> peaked{10.0, 50.0, -3.0};
  const std::vector<std::uint8_t> no_mid{1, 0, 1};
  for (int i = 0; i < n; ++i)
    CHECK(select_action(peaked, no_mid, ActionMode::Sample, rng) != 1);
}

TEST_CASE("GAE") {
  {
    const std::vector<double> r{1.0}, v{0.0, 0.0};
    const std::vector<std::uint8_t> d{1};
    CHECK(gae(r, v, d, 0.99, 0.95).advantages[0] == 1.0);
  }
  {
    const std::vector<double> r{0.5, -0.2, 1.0}, v{0.1, 0.4, -0.3, 0.7};
    const std::vector<std::uint8_t> d{0, 0, 0};
    const auto g = gae(r, v, d, 0.9, 0.0);
    for (int t = 0; t < 3; ++t)
      CHECK(g.advantages[t] == doctest::Approx(r[t] + 0.9 * v[t + 1] - v[t]).epsilon(1e-15));
  }
  {
    // hand recursion: delta_1 = 1 - 0.5 = 0.5; delta_0 = 1 + 0.99*0.5 - 0.5 = 0.995;
    // A_0 = 0.995 + 0.99*0.95*0.5 = 1.46525
    const std::vector<double> r{1.0, 1.0}, v{0.5, 0.5, 0.0};
    const std::vector<std::uint8_t> d{0, 1};
    const auto g = gae(r, v, d, 0.99, 0.95);
    CHECK(g.advantages[0] == doctest::Approx(1.46525).epsilon(1e-12));
    CHECK(g.advantages[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(g.returns[0] == doctest::Approx(1.96525).epsilon(1e-12));
  }
}

TEST_CASE("PPO loss gradient matches central differences") {
  Rng rng(derive_seed(6, 6));
  for (int net = 0; net < 5; ++net) {
    const auto p = init_actor_critic(4, {8, 8}, 3, derive_seed(6, net));
    auto q = p;
    for (auto& x : q.values) x += 0.3 * rng.normal();  // move away from the near-zero logit head
    const auto batch = toy_batch(q, rng, 12, 0.4);
    std::vector<PpoSample> samples;
    for (const auto& t : batch) samples.push_back({&t, rng.uniform(-1.5, 1.5), rng.uniform(-1, 1)});
    PpoHyper h;
    h.entropy_coeff = 0.05;
    std::vector<double> grad;
    ppo_loss_and_grad(q, samples, h, grad);
    int checked = 0;
    for (std::size_t i = 0; i < q.values.size(); ++i) {
      const double step = 1e-6;
      auto a = q, b = q;
      a.values[i] += step;
      b.values[i] -= step;
      const double fd = (loss_at(a, samples, h) - loss_at(b, samples, h)) / (2 * step);
      const double tol = std::max(1e-6, 1e-3 * std::max(std::abs(fd), std::abs(grad[i])));
      CHECK(std::abs(fd - grad[i]) <= tol);
      ++checked;
    }
    CHECK(checked == static_cast<int>(q.values.size()));
  }
}

TEST_CASE("PPO with unbounded clip equals vanilla policy gradient") {
  Rng rng(41);
  const auto p0 = init_actor_critic(4, {8, 8}, 3, 9);
  auto behavior = p0;
  for (auto& x : behavior.values) x += 0.2 * rng.normal();
  auto batch = toy_batch(behavior, rng, 16, 0.0);
  for (std::size_t i = 0; i + 1 < batch.size(); ++i) batch[i].done = (i % 4 == 3);

  PpoHyper h;
  h.clip_epsilon = 1e300;
  h.epochs_per_batch = 1;
  h.batch_size = 64;
  h.entropy_coeff = 0.0;
  h.value_coeff = 0.0;
  h.learning_rate = 1e-3;

  // independent vanilla estimator: GAE, normalized, grad of -mean(A log pi)
  const std::size_t n = batch.size();
  std::vector<double> adv(n);
  double next = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double nonterm = batch[t].done ? 0.0 : 1.0;
    const double v_next = t + 1 < n ? batch[t + 1].value : 0.0;
    const double delta = batch[t].reward + h.gamma * v_next * nonterm - batch[t].value;
    next = delta + h.gamma * h.gae_lambda * nonterm * next;
    adv[t] = next;
  }
  const double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / n;
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  const double sd = std::sqrt(var / n);
  std::vector<double> grad(behavior.values.size(), 0.0);
  const ActorCritic net(behavior);
  for (std::size_t t = 0; t < n; ++t) {
    const auto cache = net.forward(batch[t].observation);
    const auto logp = masked_log_softmax(cache.out.logits, batch[t].mask);
    std::vector<double> dl(3, 0.0);
    const double a = (adv[t] - mean) / sd;
    for (int j = 0; j < 3; ++j)
      if (batch[t].mask[j])
        dl[j] = -a * ((j == batch[t].action ? 1.0 : 0.0) - std::exp(logp[j])) / n;
    net.backward(cache, dl, 0.0, grad);
  }
  std::vector<PpoSample> samples;
  for (std::size_t t = 0; t < n; ++t) samples.push_back({&batch[t], (adv[t] - mean) / sd, 0.0});
  std::vector<double> ppo_grad;
  ppo_loss_and_grad(behavior, samples, h, ppo_grad);
  for (std::size_t i = 0; i < grad.size(); ++i)
    CHECK(std::abs(ppo_grad[i] - grad[i]) <= 1e-9 * std::abs(grad[i]) + 1e-18);

  auto expected = behavior;
  AdamOptimizer manual(expected.values.size());
  manual.step(expected.values, grad, h.learning_rate);

  auto got = behavior;
  AdamOptimizer opt(got.values.size());
  Rng shuffle(3);
  ppo_update(got, opt, batch, h, shuffle);
  for (std::size_t i = 0; i < got.values.size(); ++i)
    CHECK(std::abs(got.values[i] - expected.values[i]) <=
          1e-9 * std::max(1e-12, std::abs(expected.values[i] - behavior.values[i])) + 1e-15);
}

TEST_CASE("PPO update properties") {
  Rng rng(8);
  auto p = init_actor_critic(4, {8, 8}, 3, 2);
  SUBCASE("fresh batch has no clipping in the first minibatch") {
    const auto batch = toy_batch(p, rng, 32, 0.0);
    AdamOptimizer opt(p.values.size());
    PpoHyper h;
    h.learning_rate = 1e-3;
    const auto st = ppo_update(p, opt, batch, h, rng);
    CHECK(st.first_clip_fraction == 0.0);
    for (double x : p.values) CHECK(std::isfinite(x));
  }
  SUBCASE("zero advantages and coefficients leave parameters unchanged") {
    auto batch = toy_batch(p, rng, 16, 0.0);
    for (auto& t : batch) {
      t.reward = 0.0;
      t.value = 0.0;
    }
    PpoHyper h;
    h.entropy_coeff = 0.0;
    h.value_coeff = 0.0;
    const auto before = p;
    AdamOptimizer opt(p.values.size());
    ppo_update(p, opt, batch, h, rng);
    CHECK(p == before);
  }
  SUBCASE("non-finite loss restores parameters") {
    auto batch = toy_batch(p, rng, 16, 0.0);
    batch[3].reward = std::numeric_limits<double>::infinity();
    const auto before = p;
    AdamOptimizer opt(p.values.size());
    CHECK_THROWS_AS(ppo_update(p, opt, batch, PpoHyper{}, rng), NumericError);
    CHECK(p == before);
    CHECK(opt.steps() == 0);
  }
}

TEST_CASE("hyperparameter validation") {
  PpoHyper h;
  h.gamma = 1.5;
  CHECK_THROWS_AS(h.validate(), ConfigError);
  h = PpoHyper{};
  h.clip_epsilon = 0.0;
  CHECK_THROWS_AS(h.validate(), ConfigError);
  SarsaHyper s;
  s.epsilon_start = 2.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = SarsaHyper{};
  CHECK(sarsa_epsilon(s, 0, 101) == doctest::Approx(0.3));
  CHECK(sarsa_epsilon(s, 50, 101) == doctest::Approx(0.175));
  CHECK(sarsa_epsilon(s, 100, 101) == doctest::Approx(0.05));
}

TEST_CASE("SARSA update") {
  auto q = init_linear_q(1, 1);
  Transition t;
  t.observation = {1.0};
  t.next_observation = {1.0};
  t.action = 0;
  t.reward = 1.0;
  t.done = true;
  sarsa_update(q, t, -1, 0.01, 0.99);
  CHECK(q_values(q, t.observation)[0] == doctest::Approx(0.01));

  auto z = init_linear_q(3, 2);
  Transition zt;
  zt.observation = {0.2, 0.5, 1.0};
  zt.next_observation = {0.1, 0.1, 0.1};
  zt.action = 1;
  zt.reward = 0.0;
  CHECK(sarsa_update(z, zt, 0, 0.01, 0.99) == 0.0);
  CHECK(z == init_linear_q(3, 2));

  // repeated presentation converges to the reward
  auto c = init_linear_q(3, 2);
  Transition ct = zt;
  ct.reward = 0.7;
  ct.done = true;
  for (int i = 0; i < 5000; ++i) sarsa_update(c, ct, -1, 0.05, 0.99);
  CHECK(q_values(c, ct.observation)[1] == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("training") {
  EnvConfig env;
  TrainOptions o;
  o.seed = 3;
  o.budget_steps = 0;
  for (auto kind : {AgentKind::Ppo, AgentKind::Sarsa, AgentKind::Random}) {
    o.agent = kind;
    const auto r = train(env, o);
    CHECK(r.params == initial_parameters(env, o));
    CHECK(r.curve.empty());
  }
  o.agent = AgentKind::Ppo;
  o.budget_steps = 256;
  o.ppo.rollout_length = 128;
  o.ppo.learning_rate = 1e-3;
  const auto a = train(env, o), b = train(env, o);
  CHECK(a.params == b.params);
  CHECK(a.steps == 256);
  CHECK(a.curve.size() == 2u);
  CHECK(a.params != initial_parameters(env, o));
}

TEST_CASE("random agent curve has no learning trend") {
  EnvConfig env;
  TrainOptions o;
  o.agent = AgentKind::Random;
  o.seed = 17;
  o.ppo.rollout_length = 64;
  o.budget_steps = 64 * 50;
  const auto r = train(env, o);
  REQUIRE(r.curve.size() == 50u);
  // least-squares slope and its t statistic
  const double n = 50;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < 50; ++i) mx += i, my += r.curve[i].mean_reward;
  mx /= n, my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    sxx += (i - mx) * (i - mx);
    sxy += (i - mx) * (r.curve[i].mean_reward - my);
  }
  const double slope = sxy / sxx;
  double sse = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    const double e = r.curve[i].mean_reward - my - slope * (i - mx);
    sse += e * e;
  }
  const double se = std::sqrt(sse / (n - 2) / sxx);
  CHECK(std::abs(slope / se) < 2.68);  // two-sided p > 0.01 at 48 dof
}
