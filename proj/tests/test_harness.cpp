// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cellsleep/checkpoint.hpp"
#include "cellsleep/cli.hpp"
#include "cellsleep/config.hpp"
#include "cellsleep/errors.hpp"
#include "cellsleep/kpi.hpp"
#include "cellsleep/metrics.hpp"

using namespace cellsleep;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("cellsleep_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  args.insert(args.begin(), "cellsleep");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

std::string kpi_csv(int timestamps, int cells) {
  std::ostringstream s;
  s << "timestamp,cell_id,n_ues,prb_dl,tot_thp_dl,tot_interference\n";
  for (int t = 0; t < timestamps; ++t)
    for (int c = 0; c < cells; ++c)
      s << "2024-01-0" << t + 1 << "T00:00," << c << ',' << (c % 5) << ',' << 10 + 7 * c << ','
        << 1e6 * (c + 1) + t << ',' << 1e-9 * (c + 1) << '\n';
  return s.str();
}

}  // namespace

TEST_CASE("empty config gives the full default set") {
  const RunConfig c = parse_config("");
  CHECK(c == RunConfig{});
  CHECK(c.env.traffic.ues == 40);
  CHECK(c.env.power.prb_capacity == 100);
  CHECK(c.env.power.prb_floor == 10);
  CHECK(c.env.traffic.demand_min_bps == 0.01e9);
  CHECK(c.env.traffic.demand_max_bps == 0.1e9);
  CHECK(c.ppo.learning_rate == 1e-5);
  CHECK(c.ppo.batch_size == 64);
  CHECK(c.ppo.gamma == 0.99);
  CHECK(c.ppo.gae_lambda == 0.95);
  CHECK(c.env.topology.neighbor_count == 4);
  CHECK(c.env.topology.cell_radius == 250.0);
  CHECK(c.env.topology.inter_site_distance == 500.0);
  CHECK(c.env.objective.delta == 0.9);
  CHECK(c.env.objective.w_perf == 0.4);
  CHECK(c.env.objective.w_power == 0.6);
  CHECK(c.env.power.eta == 0.3);
  CHECK(c.env.power.p_idle_w == 100.0);
  CHECK(c.env.power.p_max_w == 40.0);
}

TEST_CASE("config validation and merge") {
  CHECK_THROWS_AS(parse_config("[ppo]\ngamma = 1.5\n"), ConfigError);
  try {
    parse_config("[ppo]\ngamma = 1.5\n");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "ppo.gamma");
  }
  try {
    parse_config("[traffic]\nuess = 3\n");
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "traffic.uess");
  }
  CHECK_THROWS_AS(parse_config("[traffic]\nues = many\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("ues = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[traffic\nues = 3\n"), ConfigError);

  RunConfig expected;
  expected.env.traffic.ues = 80;
  CHECK(parse_config("; comment\n[traffic]\nues = 80\n") == expected);

  // derived constants follow their inputs unless set explicitly
  const auto c = parse_config("[power]\np_max_w = 80\n[radio]\nprb_bandwidth_hz = 180000\n");
  CHECK(c.env.power.p_prb_w == 0.8);
  CHECK(c.env.radio.noise_dbm == thermal_noise_dbm(180000, 9.0));
  CHECK(parse_config("[power]\np_max_w = 80\np_prb_w = 0.5\n").env.power.p_prb_w == 0.5);
}

TEST_CASE("config round trip is idempotent") {
  const std::string text =
      "[ppo]\nlearning_rate = 3.3e-4\nhidden = 32, 16\n[env]\nfamily = planted\n"
      "[handover]\nweighting = available_prbs\nenabled = false\n[run]\nseed = 18446744073709551615\n";
  const RunConfig a = parse_config(text);
  const std::string once = serialize_config(a);
  const RunConfig b = parse_config(once);
  CHECK(a == b);
  CHECK(serialize_config(b) == once);
  CHECK(b.ppo.hidden == std::vector<int>{32, 16});
  CHECK(b.seed == 18446744073709551615ull);

  const auto dir = scratch("config");
  spit(dir / "c.ini", once);
  CHECK(load_config(dir / "c.ini") == a);
  CHECK_THROWS_AS(load_config(dir / "missing.ini"), ConfigError);
}

TEST_CASE("KPI ingestion") {
  EnvConfig env;
  std::istringstream in(kpi_csv(2, 12));
  const auto snaps = parse_kpi_csv(in);
  REQUIRE(snaps.size() == 2u);
  CHECK(snaps[0].rows.size() == 12u);

  const auto dir = scratch("kpi");
  spit(dir / "k.csv", kpi_csv(2, 12));
  const auto states = ingest_kpi_csv(dir / "k.csv", env, 1);
  REQUIRE(states.size() == 2u);
  // column sums from the text versus re-summed snapshot aggregates
  std::istringstream raw(kpi_csv(2, 12));
  std::string line;
  std::getline(raw, line);
  double col_thp = 0, col_int = 0;
  long long col_ues = 0, col_prb = 0;
  while (std::getline(raw, line)) {
    std::stringstream ss(line);
    std::string f[6];
    for (auto& x : f) std::getline(ss, x, ',');
    col_ues += std::stoll(f[2]);
    col_prb += std::stoll(f[3]);
    col_thp += std::stod(f[4]);
    col_int += std::stod(f[5]);
  }
  double thp = 0, inter = 0;
  long long ues = 0, prb = 0;
  for (const auto& s : states) {
    CHECK(s.num_cells() == 12);
    CHECK(s.aggregate_mode());
    for (const auto& c : s.network_summary().per_cell) {
      ues += c.n_ues;
      prb += c.tot_prbs;
      thp += c.tot_thp;
      inter += c.tot_interference;
    }
  }
  CHECK(ues == col_ues);
  CHECK(prb == col_prb);
  CHECK(thp == doctest::Approx(col_thp).epsilon(1e-12));
  CHECK(inter == doctest::Approx(col_int).epsilon(1e-12));
}

TEST_CASE("KPI schema and row errors") {
  std::istringstream missing("timestamp,cell_id,n_ues,tot_thp_dl\nt,0,1,5\n");
  try {
    parse_kpi_csv(missing);
    FAIL("missing column accepted");
  } catch (const SchemaError& e) {
    CHECK(e.column() == "prb_dl");
  }
  std::istringstream bad("timestamp,cell_id,n_ues,prb_dl,tot_thp_dl\nt,0,1,5,7\nt,1,x,5,7\n");
  try {
    parse_kpi_csv(bad);
    FAIL("non-numeric cell accepted");
  } catch (const RowError& e) {
    CHECK(e.line() == 3u);
  }
  std::istringstream dup("timestamp,cell_id,n_ues,prb_dl,tot_thp_dl\nt,0,1,5,7\nt,0,1,5,7\n");
  CHECK_THROWS_AS(parse_kpi_csv(dup), RowError);
  std::istringstream neg("timestamp,cell_id,n_ues,prb_dl,tot_thp_dl\nt,0,-1,5,7\n");
  CHECK_THROWS_AS(parse_kpi_csv(neg), RowError);

  // absent cells are inactive, explicit active=0 too
  std::istringstream part("timestamp,cell_id,n_ues,prb_dl,tot_thp_dl,active\nt,0,2,20,1e7,1\nt,3,1,10,5e6,0\nt,5,1,10,5e6,\n");
  const auto snaps = parse_kpi_csv(part);
  EnvConfig env;
  auto layout = std::make_shared<const NetworkLayout>(env.build_layout());
  const auto s = snapshot_to_state(snaps[0], env, layout, 1, false);
  CHECK(s.active_count() == 2);
  CHECK(s.is_active(0));
  CHECK(!s.is_active(3));
  CHECK(s.is_active(5));
}

TEST_CASE("checkpoint round trip") {
  const auto p = init_actor_critic(60, {64, 64}, 12, 42);
  const auto dir = scratch("ckpt");
  save_checkpoint({p, 42}, dir / "a.ckpt");
  const auto back = load_checkpoint(dir / "a.ckpt");
  CHECK(back.seed == 42u);
  CHECK(back.params == p);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> obs(60);
    for (auto& x : obs) x = rng.uniform();
    CHECK(policy_forward(p, obs).logits == policy_forward(back.params, obs).logits);
  }
  // payload is little-endian regardless of host
  const std::string bytes = encode_checkpoint({p, 42});
  const auto start = bytes.find("payload\n") + 8;
  const auto bits = std::bit_cast<std::uint64_t>(p.values[0]);
  for (int b = 0; b < 8; ++b)
    CHECK(static_cast<unsigned char>(bytes[start + b]) == ((bits >> (8 * b)) & 0xff));
}

TEST_CASE("checkpoint error kinds") {
  const auto q = init_linear_q(5, 2);  // 10 parameters
  const std::string good = encode_checkpoint({q, 1});
  auto kind_of = [](const std::string& bytes) {
    try {
      decode_checkpoint(bytes);
    } catch (const CheckpointError& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  CHECK(kind_of(good) == -1);
  CHECK(kind_of(good.substr(0, good.size() - 3)) ==
        static_cast<int>(CheckpointError::Kind::CorruptedPayload));
  CHECK(kind_of(good.substr(0, 20)) == static_cast<int>(CheckpointError::Kind::CorruptedPayload));
  CHECK(kind_of(good.substr(0, good.size() - 8)) ==
        static_cast<int>(CheckpointError::Kind::CountMismatch));
  std::string v2 = good;
  v2.replace(v2.find("version 1"), 9, "version 2");
  CHECK(kind_of(v2) == static_cast<int>(CheckpointError::Kind::VersionMismatch));
  std::string flipped = good;
  flipped[flipped.size() - 1] ^= 0x01;
  CHECK(kind_of(flipped) == static_cast<int>(CheckpointError::Kind::CorruptedPayload));
  CHECK_THROWS_AS(load_checkpoint("/nonexistent/x.ckpt"), CheckpointError);
}

TEST_CASE("empirical CDF") {
  const auto cdf = empirical_cdf({3.0, 1.0, 2.0, 2.0, 5.0});
  REQUIRE(cdf.size() == 4u);
  CHECK(cdf[0].value == 1.0);
  CHECK(cdf[0].cdf == 0.2);
  CHECK(cdf[1].cdf == 0.6);
  CHECK(cdf.back().cdf == 1.0);
  for (std::size_t i = 1; i < cdf.size(); ++i) {
    CHECK(cdf[i].value > cdf[i - 1].value);
    CHECK(cdf[i].cdf > cdf[i - 1].cdf);
  }
  const std::vector<double> sorted{1, 2, 2, 3, 5};
  CHECK(cdf_at(sorted, 2.0) == 0.6);
  CHECK(cdf_at(sorted, 0.0) == 0.0);
}

TEST_CASE("CLI usage and errors") {
  std::string out, err;
  CHECK(cli({}, &out, &err) == kExitUsage);
  CHECK(err.find("Usage") != std::string::npos);
  CHECK(cli({"bogus"}) == kExitUsage);
  CHECK(cli({"train"}) == kExitUsage);
  CHECK(cli({"--help"}, &out) == kExitOk);

  const auto dir = scratch("cli_err");
  spit(dir / "bad.ini", "[ppo]\ngamma = 1.5\n");
  CHECK(cli({"oracle", "--config", (dir / "bad.ini").string()}, &out, &err) == kExitData);
  CHECK(err.find("ppo.gamma") != std::string::npos);
  CHECK(cli({"eval", "--checkpoint", (dir / "none.ckpt").string()}) == kExitData);
}

TEST_CASE("CLI oracle prints 12 scored cells") {
  std::string out;
  REQUIRE(cli({"oracle", "--seed", "3"}, &out) == kExitOk);
  std::istringstream in(out);
  std::string line;
  int rows = 0;
  bool header = false;
  while (std::getline(in, line)) {
    if (line == "cell,objective,g_perf,p_gain,violations") header = true;
    else if (header && !line.empty() && std::isdigit(static_cast<unsigned char>(line[0]))) ++rows;
  }
  CHECK(rows == 12);
}

TEST_CASE("CLI train, eval and ingest produce parseable outputs") {
  const auto dir = scratch("cli_flow");
  const auto t = (dir / "train").string();
  REQUIRE(cli({"train", "--agent", "sarsa", "--steps", "300", "--seed", "2", "--out", t}) == kExitOk);
  CHECK(fs::exists(dir / "train" / "checkpoint.ckpt"));
  check_schema(read_csv(dir / "train" / "training_curve.csv"), "training_curve.csv");
  CHECK(load_config(dir / "train" / "config.ini").seed == 2u);

  const auto e = (dir / "eval").string();
  REQUIRE(cli({"eval", "--checkpoint", t + "/checkpoint.ckpt", "--scenarios", "6", "--seed", "2",
               "--out", e}) == kExitOk);
  for (const char* f : {"gains.csv", "ee_gain_per_cell.csv", "throughput_cdf.csv",
                        "thp_vs_interference.csv", "summary.csv", "scenarios.csv"})
    check_schema(read_csv(dir / "eval" / f), f);
  CHECK(read_csv(dir / "eval" / "gains.csv").rows.size() == 6u);

  const auto cdf = read_csv(dir / "eval" / "throughput_cdf.csv");
  std::string method;
  double last_v = 0, last_c = 0;
  for (const auto& r : cdf.rows) {
    const double v = std::stod(r[1]), c = std::stod(r[2]);
    if (r[0] == method) {
      CHECK(v > last_v);
      CHECK(c > last_c);
    } else if (!method.empty()) {
      CHECK(last_c == 1.0);
    }
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
    method = r[0], last_v = v, last_c = c;
  }
  CHECK(last_c == 1.0);

  spit(dir / "k.csv", kpi_csv(3, 12));
  const auto i = (dir / "ingest").string();
  REQUIRE(cli({"ingest", "--csv", (dir / "k.csv").string(), "--checkpoint",
               t + "/checkpoint.ckpt", "--out", i}) == kExitOk);
  const auto ing = read_csv(dir / "ingest" / "ingest.csv");
  check_schema(ing, "ingest.csv");
  CHECK(ing.rows.size() == 3u);
  REQUIRE(cli({"ingest", "--csv", (dir / "k.csv").string(), "--checkpoint",
               t + "/checkpoint.ckpt", "--out", i, "--redistribute"}) == kExitOk);

  spit(dir / "bad.csv", "timestamp,cell_id,n_ues,tot_thp_dl\n");
  CHECK(cli({"ingest", "--csv", (dir / "bad.csv").string(), "--checkpoint",
             t + "/checkpoint.ckpt", "--out", i}) == kExitData);
}

TEST_CASE("CLI compare is byte-reproducible") {
  const auto dir = scratch("cli_compare");
  const auto out = (dir / "run").string();
  auto run = [&] {
    REQUIRE(cli({"compare", "--steps", "256", "--scenarios", "4", "--seed", "5", "--out", out}) ==
            kExitOk);
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(out))
      if (entry.is_regular_file())
        files[fs::relative(entry.path(), out).string()] = slurp(entry.path());
    return files;
  };
  const auto first = run();
  const auto second = run();
  CHECK(first.size() >= 10u);
  CHECK(first == second);
  const auto summary = read_csv(dir / "run" / "summary.csv");
  check_schema(summary, "summary.csv");
  CHECK(summary.rows.size() == 3u);
  CHECK(fs::exists(dir / "run" / "ppo" / "checkpoint.ckpt"));
  CHECK(fs::exists(dir / "run" / "sarsa" / "training_curve.csv"));
}
