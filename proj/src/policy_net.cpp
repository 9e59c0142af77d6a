// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/policy_net.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cellsleep/errors.hpp"
#include "cellsleep/rng.hpp"

namespace cellsleep {

std::string to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::Ppo: return "ppo";
    case AgentKind::Sarsa: return "sarsa";
    case AgentKind::Random: return "random";
  }
  return "?";
}

AgentKind parse_agent_kind(const std::string& name) {
  if (name == "ppo") return AgentKind::Ppo;
  if (name == "sarsa") return AgentKind::Sarsa;
  if (name == "random") return AgentKind::Random;
  throw ConfigError("agent", "unknown agent kind '" + name + "'");
}

std::size_t Architecture::parameter_count() const {
  switch (kind) {
    case AgentKind::Random: return 0;
    case AgentKind::Sarsa:
      return static_cast<std::size_t>(inputs) * static_cast<std::size_t>(actions);
    case AgentKind::Ppo: {
      std::size_t n = 0;
      int prev = inputs;
      for (int h : hidden) {
        n += static_cast<std::size_t>(prev) * h + h;
        prev = h;
      }
      n += static_cast<std::size_t>(prev) * actions + actions;
      n += static_cast<std::size_t>(prev) + 1;
      return n;
    }
  }
  return 0;
}

std::string Architecture::descriptor() const {
  std::ostringstream os;
  os << "kind=" << to_string(kind) << " inputs=" << inputs << " hidden=";
  for (std::size_t i = 0; i < hidden.size(); ++i)
    os << (i ? "," : "") << hidden[i];
  os << " actions=" << actions << " activation=" << activation;
  return os.str();
}

Architecture Architecture::parse(const std::string& descriptor) {
  Architecture a;
  std::istringstream is(descriptor);
  std::string token;
  bool seen_kind = false, seen_inputs = false, seen_actions = false;
  auto to_int = [](const std::string& s) {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size() || v < 0) throw std::invalid_argument(s);
    return v;
  };
  try {
    while (is >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) throw std::invalid_argument(token);
      const std::string key = token.substr(0, eq);
      const std::string val = token.substr(eq + 1);
      if (key == "kind") {
        a.kind = parse_agent_kind(val);
        seen_kind = true;
      } else if (key == "inputs") {
        a.inputs = to_int(val);
        seen_inputs = true;
      } else if (key == "actions") {
        a.actions = to_int(val);
        seen_actions = true;
      } else if (key == "activation") {
        a.activation = val;
      } else if (key == "hidden") {
        a.hidden.clear();
        std::istringstream hs(val);
        std::string part;
        while (std::getline(hs, part, ','))
          if (!part.empty()) a.hidden.push_back(to_int(part));
      } else {
        throw std::invalid_argument(key);
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("architecture", std::string("bad descriptor token: ") + e.what());
  }
  if (!seen_kind || !seen_inputs || !seen_actions)
    throw ConfigError("architecture", "descriptor missing kind/inputs/actions");
  if (a.activation != "tanh")
    throw ConfigError("architecture", "unsupported activation " + a.activation);
  return a;
}

void PolicyParameters::validate() const {
  if (values.size() != arch.parameter_count())
    throw std::invalid_argument("policy parameters: have " +
                                std::to_string(values.size()) + ", architecture needs " +
                                std::to_string(arch.parameter_count()));
  for (double v : values)
    if (!std::isfinite(v))
      throw std::invalid_argument("policy parameters: non-finite value");
}

namespace {

// Writes an out x in matrix with orthonormal rows (out <= in) or orthonormal
// columns (out > in), scaled by gain.
void orthogonal_fill(std::span<double> w, int out, int in, double gain, Rng& rng) {
  const bool transpose = out > in;
  const int rows = transpose ? in : out;
  const int cols = transpose ? out : in;
  std::vector<double> m(static_cast<std::size_t>(rows) * cols);
  for (double& x : m) x = rng.normal();
  for (int r = 0; r < rows; ++r) {
    double* row = m.data() + static_cast<std::size_t>(r) * cols;
    for (int q = 0; q < r; ++q) {
      const double* prev = m.data() + static_cast<std::size_t>(q) * cols;
      double dot = 0.0;
      for (int c = 0; c < cols; ++c) dot += row[c] * prev[c];
      for (int c = 0; c < cols; ++c) row[c] -= dot * prev[c];
    }
    double norm = 0.0;
    for (int c = 0; c < cols; ++c) norm += row[c] * row[c];
    norm = std::sqrt(norm);
    for (int c = 0; c < cols; ++c) row[c] /= norm;
  }
  for (int o = 0; o < out; ++o)
    for (int i = 0; i < in; ++i)
      w[static_cast<std::size_t>(o) * in + i] =
          gain * (transpose ? m[static_cast<std::size_t>(i) * cols + o]
                            : m[static_cast<std::size_t>(o) * cols + i]);
}

}  // namespace

PolicyParameters init_actor_critic(int inputs, std::vector<int> hidden,
                                   int actions, std::uint64_t seed) {
  if (inputs < 1 || actions < 1)
    throw std::invalid_argument("init_actor_critic: empty input or action space");
  PolicyParameters p;
  p.arch = {AgentKind::Ppo, inputs, std::move(hidden), actions, "tanh"};
  p.values.assign(p.arch.parameter_count(), 0.0);
  Rng rng(seed);
  std::size_t off = 0;
  int prev = inputs;
  auto dense = [&](int out, double gain) {
    orthogonal_fill(std::span(p.values).subspan(off, static_cast<std::size_t>(out) * prev),
                    out, prev, gain, rng);
    off += static_cast<std::size_t>(out) * prev + out;  // biases stay zero
  };
  for (int h : p.arch.hidden) {
    dense(h, 1.0);
    prev = h;
  }
  dense(actions, 0.01);
  dense(1, 1.0);
  return p;
}

PolicyParameters init_linear_q(int inputs, int actions) {
  PolicyParameters p;
  p.arch = {AgentKind::Sarsa, inputs, {}, actions, "tanh"};
  p.values.assign(p.arch.parameter_count(), 0.0);
  return p;
}

PolicyParameters make_random_policy(int inputs, int actions) {
  PolicyParameters p;
  p.arch = {AgentKind::Random, inputs, {}, actions, "tanh"};
  return p;
}

ActorCritic::ActorCritic(const PolicyParameters& params) : params_(params) {
  if (params.arch.kind != AgentKind::Ppo)
    throw std::invalid_argument("ActorCritic: not an actor-critic architecture");
  if (params.values.size() != params.arch.parameter_count())
    throw std::invalid_argument("ActorCritic: parameter count mismatch");
  std::size_t off = 0;
  int prev = params.arch.inputs;
  auto make = [&](int out) {
    Dense d{prev, out, off, off + static_cast<std::size_t>(out) * prev};
    off = d.b + out;
    return d;
  };
  for (int h : params.arch.hidden) {
    trunk_.push_back(make(h));
    prev = h;
  }
  logit_ = make(params.arch.actions);
  value_ = make(1);
}

ForwardCache ActorCritic::forward(std::span<const double> observation) const {
  if (static_cast<int>(observation.size()) != params_.arch.inputs)
    throw std::invalid_argument("policy_forward: observation has " +
                                std::to_string(observation.size()) + " features, expected " +
                                std::to_string(params_.arch.inputs));
  const double* p = params_.values.data();
  ForwardCache c;
  c.layers.emplace_back(observation.begin(), observation.end());
  auto affine = [p](const Dense& d, const std::vector<double>& x) {
    std::vector<double> y(d.out);
    for (int o = 0; o < d.out; ++o) {
      const double* row = p + d.w + static_cast<std::size_t>(o) * d.in;
      double acc = p[d.b + o];
      for (int i = 0; i < d.in; ++i) acc += row[i] * x[i];
      y[o] = acc;
    }
    return y;
  };
  for (const Dense& d : trunk_) {
    auto y = affine(d, c.layers.back());
    for (double& v : y) v = std::tanh(v);
    c.layers.push_back(std::move(y));
  }
  c.out.logits = affine(logit_, c.layers.back());
  c.out.value = affine(value_, c.layers.back())[0];
  return c;
}

void ActorCritic::backward(const ForwardCache& cache,
                           std::span<const double> dlogits, double dvalue,
                           std::span<double> grad) const {
  const double* p = params_.values.data();
  const std::vector<double>& top = cache.layers.back();
  std::vector<double> dh(top.size(), 0.0);

  auto head = [&](const Dense& d, std::span<const double> dy) {
    for (int o = 0; o < d.out; ++o) {
      if (dy[o] == 0.0) continue;
      grad[d.b + o] += dy[o];
      const std::size_t row = d.w + static_cast<std::size_t>(o) * d.in;
      for (int i = 0; i < d.in; ++i) {
        grad[row + i] += dy[o] * top[i];
        dh[i] += dy[o] * p[row + i];
      }
    }
  };
  head(logit_, dlogits);
  const double dv[1] = {dvalue};
  head(value_, dv);

  for (std::size_t l = trunk_.size(); l-- > 0;) {
    const Dense& d = trunk_[l];
    const std::vector<double>& y = cache.layers[l + 1];
    const std::vector<double>& x = cache.layers[l];
    std::vector<double> dx(d.in, 0.0);
    for (int o = 0; o < d.out; ++o) {
      const double dz = dh[o] * (1.0 - y[o] * y[o]);
      if (dz == 0.0) continue;
      grad[d.b + o] += dz;
      const std::size_t row = d.w + static_cast<std::size_t>(o) * d.in;
      for (int i = 0; i < d.in; ++i) {
        grad[row + i] += dz * x[i];
        dx[i] += dz * p[row + i];
      }
    }
    dh = std::move(dx);
  }
}

PolicyOutput policy_forward(const PolicyParameters& params,
                            std::span<const double> observation) {
  return ActorCritic(params).forward(observation).out;
}

std::vector<double> q_values(const PolicyParameters& params,
                             std::span<const double> observation) {
  if (params.arch.kind != AgentKind::Sarsa)
    throw std::invalid_argument("q_values: not a linear-Q architecture");
  const int n = params.arch.inputs;
  if (static_cast<int>(observation.size()) != n)
    throw std::invalid_argument("q_values: observation size mismatch");
  std::vector<double> q(params.arch.actions, 0.0);
  for (int a = 0; a < params.arch.actions; ++a) {
    const double* w = params.values.data() + static_cast<std::size_t>(a) * n;
    for (int i = 0; i < n; ++i) q[a] += w[i] * observation[i];
  }
  return q;
}

}  // namespace cellsleep
