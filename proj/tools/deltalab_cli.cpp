// deltalab: run | sweep | verify | snapshot
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "deltalab/harness.hpp"

namespace fs = std::filesystem;
using namespace deltalab;

namespace {

struct Overrides {
  std::optional<double> q, v, x0, eps, dt, L, t_end;
  std::optional<int> N, sample_every;
  std::optional<std::string> out, snapshots, scheme, emit;

  void attach(CLI::App* app) {
    app->add_option("--q", q, "delta strength");
    app->add_option("--v", v, "incident velocity");
    app->add_option("--x0", x0, "incident position");
    app->add_option("--eps", eps, "schedule exponent");
    app->add_option("--dt", dt, "time step");
    app->add_option("--L", L, "grid half width");
    app->add_option("--N", N, "grid points");
    app->add_option("--t-end", t_end, "final time");
    app->add_option("--sample-every", sample_every, "stored sample stride");
    app->add_option("--out", out, "output directory");
    app->add_option("--snapshots", snapshots, "comma list of snapshot times");
    app->add_option("--scheme", scheme, "strang or cn");
    app->add_option("--emit", emit, "comma list of outputs");
  }

  void apply(KeyValues& kv) const {
    auto put = [&](const char* k, const auto& o) {
      if (o) {
        std::ostringstream os;
        os.precision(17);
        os << *o;
        kv[k] = os.str();
      }
    };
    put("q", q);
    put("v", v);
    put("x0", x0);
    put("eps", eps);
    put("dt", dt);
    put("L", L);
    put("N", N);
    put("t_end", t_end);
    put("sample_every", sample_every);
    put("output_dir", out);
    put("snapshot_times", snapshots);
    put("scheme", scheme);
    put("emit", emit);
  }
};

KeyValues load(const std::string& config) { return config.empty() ? KeyValues{} : load_key_values(config); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delta-impurity soliton scattering lab"};
  app.require_subcommand(1);

  std::string config;
  Overrides run_ov, sweep_ov;
  auto* run = app.add_subcommand("run", "evolve one incident soliton and measure the outcome");
  run->add_option("--config", config, "key=value config file");
  run_ov.attach(run);

  int jobs = 0;
  auto* sw = app.add_subcommand("sweep", "grid of runs, one csv row each");
  sw->add_option("--config", config, "key=value config file");
  sw->add_option("--jobs", jobs, "parallel workers");
  sweep_ov.attach(sw);

  std::string suite = "all";
  auto* ver = app.add_subcommand("verify", "invariant suites");
  ver->add_option("--suite", suite, "analytics|propagator|solver|phases|all");

  std::string traj, snap_out, snap_times;
  auto* snap = app.add_subcommand("snapshot", "re-emit snapshot csvs from a stored trajectory");
  snap->add_option("trajectory", traj, "trajectory.bin")->required();
  snap->add_option("--times", snap_times, "comma list, default all stored samples");
  snap->add_option("--out", snap_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      KeyValues kv = load(config);
      run_ov.apply(kv);
      RunConfig cfg = run_config_from(kv);
      if (cfg.output_dir.empty()) cfg.output_dir = default_output_root() / "run";
      const RunResult res = run_experiment(cfg);
      if (!res.warning.empty()) std::cerr << "warning: " << res.warning << "\n";
      std::cout << outcome_json(cfg, res);
      for (const auto& f : res.files) std::cerr << "wrote " << f.string() << "\n";
    } else if (*sw) {
      KeyValues kv = load(config);
      sweep_ov.apply(kv);
      if (jobs > 0) kv["jobs"] = std::to_string(jobs);
      SweepConfig cfg = sweep_config_from(kv);
      if (cfg.base.output_dir.empty()) cfg.base.output_dir = default_output_root() / "sweep";
      const auto rows = sweep(cfg);
      const std::string csv = sweep_csv(rows, cfg.record_runtime);
      fs::create_directories(cfg.base.output_dir);
      std::ofstream(cfg.base.output_dir / "sweep.csv", std::ios::binary) << csv;
      std::cout << csv;
    } else if (*ver) {
      const auto checks = verify(suite);
      std::cout << checks_csv(checks);
      for (const auto& c : checks)
        if (!c.pass) return 1;
    } else if (*snap) {
      std::vector<double> times;
      std::stringstream ss(snap_times);
      for (std::string s; std::getline(ss, s, ',');)
        if (!s.empty()) times.push_back(std::stod(s));
      const fs::path out = snap_out.empty() ? fs::path(traj).parent_path() : fs::path(snap_out);
      for (const auto& f : snapshot_from_trajectory(traj, times, out)) std::cout << f.string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
