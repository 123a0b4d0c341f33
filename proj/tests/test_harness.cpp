#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "deltalab/harness.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace deltalab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("deltalab_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// small and quick; still crosses t3
const char* kSmall =
    "# quick run\n"
    "q = -3\nv = 3\nx0 = -10\n"
    "L = 40\nN = 2048\ndt = 2e-3\n"
    "t_end = 4.5\nsample_every = 25\n"
    "snapshot_times = 0, 2.5, 4.0\n";

RunConfig small(const fs::path& out) {
  RunConfig c = run_config_from(parse_key_values(kSmall));
  c.output_dir = out;
  return c;
}

}  // namespace

TEST_CASE("key=value parsing") {
  const auto kv = parse_key_values("a = 1\n# c\n\n  b=x,y  \n");
  CHECK(kv.size() == 2);
  CHECK(kv.at("a") == "1");
  CHECK(kv.at("b") == "x,y");
  CHECK_THROWS(parse_key_values("novalue\n"));
  CHECK_THROWS(parse_key_values("=3\n"));
}

TEST_CASE("run config from keys") {
  const RunConfig c = run_config_from(parse_key_values(kSmall));
  CHECK(c.sim.q == -3.0);
  CHECK(c.N == 2048);
  CHECK(c.sim.solver.dt == 2e-3);
  CHECK(c.snapshot_times == std::vector<double>{0.0, 2.5, 4.0});
  CHECK(resolved_end_time(c) == 4.5);
  CHECK(resolved_end_time(run_config_from({})) == doctest::Approx(25.0 / 3.0));
  CHECK(run_config_from({{"scheme", "cn"}}).sim.solver.scheme == Scheme::crank_nicolson_oracle);
  CHECK(run_config_from({{"emit", "outcome,trajectory"}}).emit_snapshots == false);
  CHECK(run_config_from({{"emit", "outcome,trajectory"}}).emit_trajectory == true);
  CHECK_THROWS(run_config_from({{"bogus", "1"}}));
  CHECK_THROWS(run_config_from({{"q", "abc"}}));
  CHECK_THROWS(run_config_from({{"N", "100.5"}}));
  CHECK_THROWS(run_config_from({{"N", "1000"}}));
  CHECK_THROWS(run_config_from({{"scheme", "rk4"}}));
  CHECK_THROWS(run_config_from({{"emit", "pictures"}}));
  CHECK_THROWS(run_config_from({{"sample_every", "0"}}));
}

TEST_CASE("invalid physics is rejected before running") {
  RunConfig c = small({});
  c.sim.x0 = 5.0;
  CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
  c = small({});
  c.snapshot_times = {9.0};
  CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
}

TEST_CASE("run writes the expected files, deterministically") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  RunConfig ca = small(a);
  ca.emit_trajectory = true;
  RunConfig cb = ca;
  cb.output_dir = b;
  const RunResult ra = run_experiment(ca);
  run_experiment(cb);
  for (const char* f : {"snapshot_t0.0000.csv", "snapshot_t2.5000.csv", "snapshot_t4.0000.csv", "conservation.csv",
                        "discrepancy_phase1.csv", "discrepancy_phase3.csv", "trajectory.bin", "outcome.json"}) {
    INFO(f);
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(ra.files.size() == 8);

  std::ifstream snap(a / "snapshot_t2.5000.csv");
  const WaveField w = read_csv(snap);
  CHECK(w.grid == make_grid(40.0, 2048));
  CHECK(l2_distance(w, ra.trajectory.fields[ra.trajectory.nearest(2.5)]) == 0.0);
  CHECK(ra.trajectory.times[ra.trajectory.nearest(2.5)] == 2.5);
  CHECK(slurp(a / "conservation.csv").rfind("t,mass,energy,grad_norm,bound_rhs\n", 0) == 0);
}

TEST_CASE("outcome json is flat, sorted and parses back") {
  const fs::path d = scratch("json");
  const RunResult r = run_experiment(small(d));
  const std::string text = slurp(d / "outcome.json");
  const auto j = nlohmann::json::parse(text);
  REQUIRE(j.is_object());
  std::string prev;
  for (auto it = j.begin(); it != j.end(); ++it) {
    CHECK(!it.value().is_object());
    CHECK(!it.value().is_array());
    CHECK(prev < it.key());
    prev = it.key();
  }
  // key order in the text itself
  CHECK(text.find("\"q\"") < text.find("\"v\""));
  CHECK(j.at("transmitted_fraction").get<double>() == r.report.transmitted_fraction);
  CHECK(j.at("prediction").get<double>() == 0.5);
  CHECK(j.contains("discrepancy_phase1_free_soliton"));
  CHECK(j.contains("energy_bound_pass"));
  CHECK(outcome_json(small(d), r) == text);
}

TEST_CASE("sweep table") {
  CHECK_THROWS(sweep(SweepConfig{}));

  SweepConfig s = sweep_config_from(parse_key_values(std::string(kSmall) + "pairs = -3:3, -1.5:3, -3:0\n"));
  s.base.emit_snapshots = s.base.emit_discrepancies = s.base.emit_conservation = false;
  s.base.output_dir = scratch("sweep");
  s.jobs = 2;
  s.record_runtime = false;
  const auto rows = sweep(s);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].status == "ok");
  CHECK(rows[0].prediction == 0.5);
  CHECK(rows[1].prediction == doctest::Approx(0.8));
  // v = 0 fails validation; the row is kept
  CHECK(rows[2].status.rfind("error", 0) == 0);

  const std::string csv = sweep_csv(rows, false);
  CHECK(csv.rfind(kSweepHeader, 0) == 0);
  const auto back = parse_sweep_csv(csv);
  REQUIRE(back.size() == 3);
  CHECK(back[1].transmitted == doctest::Approx(rows[1].transmitted).epsilon(1e-9));
  CHECK(back[2].status == rows[2].status);
  CHECK(back[0].runtime == 0.0);
  CHECK(sweep_csv(back, false) == csv);

  // same grid, same bytes
  s.jobs = 1;
  CHECK(sweep_csv(sweep(s), false) == csv);
}

TEST_CASE("sweep grid form") {
  const SweepConfig s = sweep_config_from({{"q_values", "-1,-2"}, {"v_values", "2,3,4"}, {"jobs", "3"}});
  CHECK(s.q_values.size() == 2);
  CHECK(s.v_values.size() == 3);
  CHECK(s.jobs == 3);
  CHECK_THROWS(sweep_config_from({{"pairs", "1,2"}}));
  CHECK_THROWS(sweep_config_from({{"jobs", "0"}}));
}

TEST_CASE("verify suites") {
  CHECK_THROWS(verify("nonsense"));
  const auto checks = verify("analytics");
  REQUIRE(!checks.empty());
  for (const auto& c : checks) {
    INFO(c.name << " measured " << c.measured);
    CHECK(c.pass);
  }
  CHECK(checks_csv(checks).rfind("suite,name,status,measured,threshold\n", 0) == 0);
}

TEST_CASE("snapshot from a stored trajectory") {
  const fs::path d = scratch("resnap");
  RunConfig c = small(d);
  c.emit_trajectory = true;
  c.snapshot_times = {2.5};
  run_experiment(c);
  const auto files = snapshot_from_trajectory(d / "trajectory.bin", {2.5}, d / "again");
  REQUIRE(files.size() == 1);
  CHECK(slurp(files[0]) == slurp(d / snapshot_name(2.5)));
  CHECK_THROWS(snapshot_from_trajectory(d / "missing.bin", {1.0}, d));
}

TEST_CASE("command line tool") {
  const char* tool = std::getenv("DELTALAB_TOOL");
  if (!tool) {
    MESSAGE("DELTALAB_TOOL not set, skipping");
    return;
  }
  const fs::path d = scratch("cli");
  {
    std::ofstream f(d / "run.cfg");
    f << kSmall;
  }
  const std::string base = std::string(tool) + " ";
  CHECK(std::system((base + "run --config " + (d / "run.cfg").string() + " --out " + (d / "r").string() +
                     " > /dev/null").c_str()) == 0);
  CHECK(fs::exists(d / "r" / "outcome.json"));
  CHECK(fs::exists(d / "r" / "snapshot_t4.0000.csv"));
  // flag overrides the file
  CHECK(std::system((base + "run --config " + (d / "run.cfg").string() + " --q -1.5 --emit outcome --out " +
                     (d / "r2").string() + " > /dev/null").c_str()) == 0);
  CHECK(nlohmann::json::parse(slurp(d / "r2" / "outcome.json")).at("q").get<double>() == -1.5);
  CHECK(!fs::exists(d / "r2" / "conservation.csv"));
  CHECK(std::system((base + "run --config " + (d / "run.cfg").string() + " --x0 5 --out " + (d / "bad").string() +
                     " > /dev/null 2>&1").c_str()) != 0);
  CHECK(std::system((base + "verify --suite analytics > /dev/null").c_str()) == 0);
  CHECK(std::system((base + "verify --suite nope > /dev/null 2>&1").c_str()) != 0);
  CHECK(std::system((base + "bogus > /dev/null 2>&1").c_str()) != 0);
}
