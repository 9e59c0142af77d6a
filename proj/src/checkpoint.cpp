// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include "cellsleep/checkpoint.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "cellsleep/errors.hpp"

namespace cellsleep {
namespace {

constexpr const char* kMagic = "cellsleep-checkpoint";

using Kind = CheckpointError::Kind;

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

template <class T>
T number(const std::string& key, const std::string& s, int base = 10) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw CheckpointError(Kind::CorruptedPayload, "bad header value for " + key);
  return v;
}

}  // namespace

std::string encode_checkpoint(const Checkpoint& ckpt) {
  const auto& p = ckpt.params;
  if (p.values.size() != p.arch.parameter_count())
    throw std::invalid_argument("checkpoint: parameter count does not match architecture");
  std::string payload;
  payload.reserve(p.values.size() * 8);
  for (double v : p.values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) payload.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
  }
  std::ostringstream out;
  out << kMagic << '\n'
      << "version " << kCheckpointVersion << '\n'
      << "arch " << p.arch.descriptor() << '\n'
      << "count " << p.values.size() << '\n'
      << "agent " << to_string(p.arch.kind) << '\n'
      << "seed " << ckpt.seed << '\n'
      << "checksum " << hex(fnv1a(payload)) << '\n'
      << "payload\n";
  return out.str() + payload;
}

Checkpoint decode_checkpoint(const std::string& bytes) {
  std::size_t pos = 0;
  auto next_line = [&]() -> std::string {
    const auto nl = bytes.find('\n', pos);
    if (nl == std::string::npos)
      throw CheckpointError(Kind::CorruptedPayload, "truncated header");
    std::string line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    return line;
  };

  if (next_line() != kMagic)
    throw CheckpointError(Kind::CorruptedPayload, "not a cellsleep checkpoint");
  std::map<std::string, std::string> header;
  for (;;) {
    const std::string line = next_line();
    if (line == "payload") break;
    const auto sp = line.find(' ');
    if (sp == std::string::npos)
      throw CheckpointError(Kind::CorruptedPayload, "malformed header line");
    header[line.substr(0, sp)] = line.substr(sp + 1);
  }
  auto field = [&](const std::string& key) -> const std::string& {
    auto it = header.find(key);
    if (it == header.end())
      throw CheckpointError(Kind::CorruptedPayload, "header lacks " + key);
    return it->second;
  };

  const int version = number<int>("version", field("version"));
  if (version != kCheckpointVersion)
    throw CheckpointError(Kind::VersionMismatch,
                          "format version " + std::to_string(version) +
                              ", expected " + std::to_string(kCheckpointVersion));

  Checkpoint ck;
  try {
    ck.params.arch = Architecture::parse(field("arch"));
  } catch (const ConfigError& e) {
    throw CheckpointError(Kind::CorruptedPayload, e.what());
  }
  AgentKind agent{};
  try {
    agent = parse_agent_kind(field("agent"));
  } catch (const ConfigError& e) {
    throw CheckpointError(Kind::CorruptedPayload, e.what());
  }
  if (agent != ck.params.arch.kind)
    throw CheckpointError(Kind::CorruptedPayload, "agent does not match architecture");
  ck.seed = number<std::uint64_t>("seed", field("seed"));
  const auto count = number<std::size_t>("count", field("count"));
  const auto checksum = number<std::uint64_t>("checksum", field("checksum"), 16);

  if (count != ck.params.arch.parameter_count())
    throw CheckpointError(Kind::CountMismatch,
                          "header declares " + std::to_string(count) +
                              " parameters, architecture needs " +
                              std::to_string(ck.params.arch.parameter_count()));
  const std::string_view payload(bytes.data() + pos, bytes.size() - pos);
  if (payload.size() % 8 != 0)
    throw CheckpointError(Kind::CorruptedPayload, "payload is not a whole number of doubles");
  if (payload.size() / 8 != count)
    throw CheckpointError(Kind::CountMismatch,
                          "header declares " + std::to_string(count) +
                              " parameters, payload holds " +
                              std::to_string(payload.size() / 8));
  if (fnv1a(payload) != checksum)
    throw CheckpointError(Kind::CorruptedPayload, "checksum mismatch");

  ck.params.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b)
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(payload[8 * i + b])) << (8 * b);
    const double v = std::bit_cast<double>(bits);
    if (!std::isfinite(v))
      throw CheckpointError(Kind::CorruptedPayload, "non-finite parameter");
    ck.params.values[i] = v;
  }
  return ck;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const std::string bytes = encode_checkpoint(ckpt);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError(Kind::Io, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError(Kind::Io, "write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError(Kind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_checkpoint(ss.str());
}

}  // namespace cellsleep
