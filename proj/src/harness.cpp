#include "deltalab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "deltalab/linear_propagator.hpp"
#include "deltalab/scattering_analytics.hpp"

namespace deltalab {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || trim(v.substr(pos)).size()) throw std::invalid_argument("config: " + key + " is not a number: '" + v + "'");
  return d;
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw std::invalid_argument("config: " + key + " must be an integer");
  return static_cast<int>(d);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(to_double(key, s));
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config: " + key + " must be a boolean");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << s;
}

const char* scheme_name(Scheme s) { return s == Scheme::crank_nicolson_oracle ? "cn" : "strang"; }

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::stringstream ss(text);
  std::string line;
  int n = 0;
  while (std::getline(ss, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(n) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(n) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues load_key_values(const fs::path& file) {
  std::ifstream f(file);
  if (!f) throw std::runtime_error("cannot open config " + file.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_key_values(ss.str());
}

RunConfig run_config_from(const KeyValues& kv, RunConfig c) {
  static const char* sweep_keys[] = {"q_values", "v_values", "pairs", "jobs", "record_runtime"};
  for (const auto& [k, v] : kv) {
    if (k == "q") c.sim.q = to_double(k, v);
    else if (k == "v") c.sim.v = to_double(k, v);
    else if (k == "x0") c.sim.x0 = to_double(k, v);
    else if (k == "eps") c.sim.eps = to_double(k, v);
    else if (k == "dt") c.sim.solver.dt = to_double(k, v);
    else if (k == "L") c.L = to_double(k, v);
    else if (k == "N") c.N = to_int(k, v);
    else if (k == "sample_every") c.sample_every = to_int(k, v);
    else if (k == "t_end") c.t_end = to_double(k, v);
    else if (k == "snapshot_times") c.snapshot_times = to_doubles(k, v);
    else if (k == "output_dir") c.output_dir = v;
    else if (k == "scheme") {
      if (v == "strang") c.sim.solver.scheme = Scheme::strang_exact_linear;
      else if (v == "cn") c.sim.solver.scheme = Scheme::crank_nicolson_oracle;
      else throw std::invalid_argument("config: scheme must be strang or cn");
    } else if (k == "emit") {
      c.emit_snapshots = c.emit_outcome = c.emit_discrepancies = c.emit_conservation = c.emit_trajectory = false;
      for (const auto& f : split_list(v)) {
        if (f == "snapshots") c.emit_snapshots = true;
        else if (f == "outcome") c.emit_outcome = true;
        else if (f == "discrepancies") c.emit_discrepancies = true;
        else if (f == "conservation") c.emit_conservation = true;
        else if (f == "trajectory") c.emit_trajectory = true;
        else throw std::invalid_argument("config: unknown emit flag " + f);
      }
    } else if (std::find(std::begin(sweep_keys), std::end(sweep_keys), k) == std::end(sweep_keys)) {
      throw std::invalid_argument("config: unknown key " + k);
    }
  }
  c.sim.solver.grid = make_grid(c.L, c.N);
  c.sim.solver.q = c.sim.q;
  if (c.sample_every < 1) throw std::invalid_argument("config: sample_every must be >= 1");
  std::sort(c.snapshot_times.begin(), c.snapshot_times.end());
  return c;
}

double resolved_end_time(const RunConfig& cfg) {
  const auto s = phase_schedule(cfg.sim);
  if (cfg.t_end > 0.0) return cfg.t_end;
  double t = std::max(s.t3, settle_time(cfg.sim));
  if (!cfg.snapshot_times.empty()) t = std::max(t, cfg.snapshot_times.back());
  return t;
}

fs::path default_output_root() {
  if (const char* e = std::getenv("DELTALAB_OUT"); e && *e) return e;
  return "deltalab_runs";
}

std::string snapshot_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_t%.4f.csv", t);
  return buf;
}

RunResult run_experiment(const RunConfig& cfg) {
  RunResult res;
  res.warning = validate(cfg.sim);
  const double t_end = resolved_end_time(cfg);
  for (double t : cfg.snapshot_times)
    if (t < 0.0 || t > t_end) throw std::invalid_argument("snapshot time " + fmt(t) + " outside [0, t_end]");

  res.trajectory = simulate(cfg.sim, t_end, cfg.sample_every, cfg.snapshot_times);
  const Trajectory& tr = res.trajectory;
  res.report = measure_outcome(cfg.sim, tr);
  res.drift = conservation_drift(cfg.sim.q, tr);
  res.energy_bound = energy_bound_check(cfg.sim.q, tr);

  if (cfg.output_dir.empty()) return res;
  fs::create_directories(cfg.output_dir);
  const auto sch = phase_schedule(cfg.sim);
  const Grid& g = tr.grid;

  if (cfg.emit_snapshots) {
    for (double t : cfg.snapshot_times) {
      const fs::path p = cfg.output_dir / snapshot_name(t);
      std::ofstream f(p, std::ios::binary);
      write_csv(f, tr.fields[tr.nearest(t)]);
      res.files.push_back(p);
    }
  }
  if (cfg.emit_conservation) {
    std::ostringstream os;
    os << "t,mass,energy,grad_norm,bound_rhs\n";
    char buf[160];
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const auto c = conserved(cfg.sim.q, tr.fields[i]);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", tr.times[i], c.mass, c.energy,
                    res.energy_bound.lhs[i], res.energy_bound.rhs[i]);
      os << buf;
    }
    res.files.push_back(cfg.output_dir / "conservation.csv");
    write_text(res.files.back(), os.str());
  }
  if (cfg.emit_discrepancies) {
    auto curve = [&](const std::string& name, double ta, double tb, auto approx) {
      std::ostringstream os;
      os << "t,value\n";
      char buf[80];
      for (std::size_t i = 0; i < tr.size(); ++i) {
        if (tr.times[i] < ta - 1e-9 || tr.times[i] > tb + 1e-9) continue;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", tr.times[i], l2_distance(tr.fields[i], approx(tr.times[i])));
        os << buf;
      }
      res.files.push_back(cfg.output_dir / ("discrepancy_" + name + ".csv"));
      write_text(res.files.back(), os.str());
    };
    curve("phase1", 0.0, sch.t1, [&](double t) { return free_soliton_approximant(cfg.sim, t, g); });
    std::vector<double> ts;
    for (double t : tr.times)
      if (t >= sch.t2 - 1e-9 && t <= sch.t3 + 1e-9) ts.push_back(t);
    const OutgoingModel model(cfg.sim, sch.t2, g, ts);
    curve("phase3", sch.t2, sch.t3, [&](double t) {
      auto [a, b] = model.at(t);
      return a + b;
    });
  }
  if (cfg.emit_trajectory) {
    res.files.push_back(cfg.output_dir / "trajectory.bin");
    std::ofstream f(res.files.back(), std::ios::binary);
    write_trajectory(f, tr);
  }
  if (cfg.emit_outcome) {
    res.files.push_back(cfg.output_dir / "outcome.json");
    write_text(res.files.back(), outcome_json(cfg, res));
  }
  return res;
}

std::string outcome_json(const RunConfig& cfg, const RunResult& res) {
  const OutcomeReport& r = res.report;
  nlohmann::json j = nlohmann::json::object();
  j["q"] = r.q;
  j["v"] = r.v;
  j["x0"] = r.x0;
  j["eps"] = r.eps;
  j["L"] = cfg.L;
  j["N"] = cfg.N;
  j["dt"] = cfg.sim.solver.dt;
  j["scheme"] = scheme_name(cfg.sim.solver.scheme);
  j["t1"] = r.t1;
  j["t2"] = r.t2;
  j["t3"] = r.t3;
  j["t_final"] = r.t_final;
  j["transmitted_fraction"] = r.transmitted_fraction;
  j["transmitted_raw"] = r.transmitted_raw;
  j["reflected_fraction"] = r.reflected_fraction;
  j["transmitted_at_t3"] = r.transmitted_at_t3;
  j["trapped_eigenstate_overlap"] = r.trapped_eigenstate_overlap;
  j["trapped_window_mass"] = r.trapped_window_mass;
  j["uniform_t_start"] = r.uniform_t_start;
  j["uniform_t_end"] = r.uniform_t_end;
  j["uniform_min"] = r.uniform_min;
  j["uniform_max"] = r.uniform_max;
  j["bookkeeping"] = r.bookkeeping;
  j["prediction"] = r.prediction;
  j["abs_error"] = r.abs_error;
  for (const auto& [k, v] : r.discrepancies) j["discrepancy_" + k] = v;
  j["mass_drift"] = res.drift.mass_drift;
  j["energy_drift"] = res.drift.energy_drift;
  j["mass_drift_rate"] = res.drift.mass_rate();
  j["energy_drift_rate"] = res.drift.energy_rate();
  j["energy_bound_pass"] = res.energy_bound.pass;
  j["energy_bound_margin"] = res.energy_bound.worst_margin;
  std::string st;
  for (double t : cfg.snapshot_times) st += (st.empty() ? "" : ",") + fmt(t);
  j["snapshot_times"] = st;
  j["warning"] = res.warning;
  return j.dump(2) + "\n";
}

SweepConfig sweep_config_from(const KeyValues& kv) {
  SweepConfig s;
  s.base = run_config_from(kv);
  if (auto it = kv.find("q_values"); it != kv.end()) s.q_values = to_doubles("q_values", it->second);
  if (auto it = kv.find("v_values"); it != kv.end()) s.v_values = to_doubles("v_values", it->second);
  if (auto it = kv.find("pairs"); it != kv.end()) {
    for (const auto& item : split_list(it->second)) {
      const auto c = item.find(':');
      if (c == std::string::npos) throw std::invalid_argument("config: pairs entries are q:v");
      s.pairs.emplace_back(to_double("pairs", item.substr(0, c)), to_double("pairs", item.substr(c + 1)));
    }
  }
  if (auto it = kv.find("jobs"); it != kv.end()) s.jobs = to_int("jobs", it->second);
  if (auto it = kv.find("record_runtime"); it != kv.end()) s.record_runtime = to_bool("record_runtime", it->second);
  if (s.jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
  return s;
}

const char* const kSweepHeader =
    "# deltalab sweep v1\n"
    "q,v,eps,transmitted,reflected,trapped_overlap,trapped_window,prediction,abs_error,runtime_s,status\n";

std::vector<SweepRow> sweep(const SweepConfig& cfg) {
  std::vector<std::pair<double, double>> jobs = cfg.pairs;
  if (jobs.empty())
    for (double q : cfg.q_values)
      for (double v : cfg.v_values) jobs.emplace_back(q, v);
  if (jobs.empty()) throw std::invalid_argument("sweep: empty grid");

  std::vector<SweepRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      SweepRow& row = rows[i];
      RunConfig rc = cfg.base;
      rc.sim.q = rc.sim.solver.q = row.q = jobs[i].first;
      rc.sim.v = row.v = jobs[i].second;
      row.eps = rc.sim.eps;
      if (!cfg.base.output_dir.empty()) rc.output_dir = cfg.base.output_dir / ("q" + fmt(row.q) + "_v" + fmt(row.v));
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const auto res = run_experiment(rc);
        const auto& r = res.report;
        row.transmitted = r.transmitted_fraction;
        row.reflected = r.reflected_fraction;
        row.trapped_overlap = r.trapped_eigenstate_overlap;
        row.trapped_window = r.trapped_window_mass;
        row.prediction = r.prediction;
        row.abs_error = r.abs_error;
      } catch (const std::exception& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        row.status = "error: " + msg;
      }
      row.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const int n = std::min<int>(cfg.jobs, static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, bool record_runtime) {
  std::ostringstream os;
  os << kSweepHeader;
  for (const auto& r : rows) {
    os << fmt(r.q) << ',' << fmt(r.v) << ',' << fmt(r.eps) << ',' << fmt(r.transmitted) << ',' << fmt(r.reflected)
       << ',' << fmt(r.trapped_overlap) << ',' << fmt(r.trapped_window) << ',' << fmt(r.prediction) << ','
       << fmt(r.abs_error) << ',' << fmt(record_runtime ? r.runtime : 0.0) << ',' << r.status << '\n';
  }
  return os.str();
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::vector<SweepRow> rows;
  std::stringstream ss(text);
  std::string line;
  bool header = false;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    if (cells.size() != 11) throw std::runtime_error("sweep csv: expected 11 columns");
    SweepRow r;
    double* f[] = {&r.q, &r.v, &r.eps, &r.transmitted, &r.reflected, &r.trapped_overlap,
                   &r.trapped_window, &r.prediction, &r.abs_error, &r.runtime};
    for (int k = 0; k < 10; ++k) *f[k] = to_double("sweep csv", cells[k]);
    r.status = cells[10];
    rows.push_back(r);
  }
  return rows;
}

std::vector<fs::path> snapshot_from_trajectory(const fs::path& trajectory_file, const std::vector<double>& times,
                                               const fs::path& out_dir) {
  std::ifstream in(trajectory_file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + trajectory_file.string());
  const Trajectory tr = read_trajectory(in);
  fs::create_directories(out_dir);
  std::vector<fs::path> out;
  const std::vector<double>& want = times.empty() ? tr.times : times;
  for (double t : want) {
    const std::size_t i = tr.nearest(t);
    if (std::abs(tr.times[i] - t) > 1e-6) throw std::invalid_argument("no stored sample at t=" + fmt(t));
    out.push_back(out_dir / snapshot_name(t));
    std::ofstream f(out.back(), std::ios::binary);
    write_csv(f, tr.fields[i]);
  }
  return out;
}

std::string checks_csv(const std::vector<Check>& checks) {
  std::ostringstream os;
  os << "suite,name,status,measured,threshold\n";
  for (const auto& c : checks)
    os << c.suite << ',' << c.name << ',' << (c.pass ? "pass" : "fail") << ',' << fmt(c.measured) << ','
       << fmt(c.threshold) << '\n';
  return os.str();
}

}  // namespace deltalab
