#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "deltalab/phase_experiments.hpp"

namespace deltalab {

// Flat key=value config. '#' starts a comment, blank lines are skipped.
//
//   q, v, x0, eps          physical parameters
//   L, N, dt, scheme       grid and solver (scheme = strang | cn)
//   sample_every           stored sample stride in steps (default 50)
//   t_end                  final time, 0 = max(t3, settle time, last snapshot)
//   snapshot_times         comma list
//   output_dir             run directory
//   emit                   comma list of snapshots,outcome,discrepancies,conservation,trajectory
//   q_values, v_values     sweep grid
//   pairs                  sweep list of q:v pairs, used instead of the grid
//   jobs                   sweep workers
//   record_runtime         sweep runtime column on/off
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text);
KeyValues load_key_values(const std::filesystem::path& file);

struct RunConfig {
  SimParams sim;
  double L = 60.0;
  int N = 8192;
  int sample_every = 50;
  double t_end = 0.0;
  std::vector<double> snapshot_times;
  std::filesystem::path output_dir;
  bool emit_snapshots = true;
  bool emit_outcome = true;
  bool emit_discrepancies = true;
  bool emit_conservation = true;
  bool emit_trajectory = false;
};

// applies keys on top of `base`; throws on unknown keys or bad values
RunConfig run_config_from(const KeyValues& kv, RunConfig base = {});
double resolved_end_time(const RunConfig& cfg);

// DELTALAB_OUT or ./deltalab_runs
std::filesystem::path default_output_root();

struct RunResult {
  OutcomeReport report;
  std::string warning;
  DriftReport drift;
  EnergyBoundReport energy_bound;
  std::vector<std::filesystem::path> files;
  Trajectory trajectory;
};

RunResult run_experiment(const RunConfig& cfg);

// flat object, sorted keys
std::string outcome_json(const RunConfig& cfg, const RunResult& res);

struct SweepConfig {
  RunConfig base;
  std::vector<double> q_values, v_values;
  std::vector<std::pair<double, double>> pairs;
  int jobs = 1;
  bool record_runtime = true;
};

SweepConfig sweep_config_from(const KeyValues& kv);

struct SweepRow {
  double q = 0, v = 0, eps = 0;
  double transmitted = 0, reflected = 0, trapped_overlap = 0, trapped_window = 0;
  double prediction = 0, abs_error = 0, runtime = 0;
  std::string status = "ok";
};

extern const char* const kSweepHeader;

std::vector<SweepRow> sweep(const SweepConfig& cfg);
std::string sweep_csv(const std::vector<SweepRow>& rows, bool record_runtime = true);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

struct Check {
  std::string suite;
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
};

// suites: analytics, propagator, solver, phases, all
std::vector<Check> verify(const std::string& suite);
std::string checks_csv(const std::vector<Check>& checks);

// re-emit snapshot CSVs from a stored trajectory.bin
std::vector<std::filesystem::path> snapshot_from_trajectory(const std::filesystem::path& trajectory_file,
                                                           const std::vector<double>& times,
                                                           const std::filesystem::path& out_dir);

std::string snapshot_name(double t);

}  // namespace deltalab
