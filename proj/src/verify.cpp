#include <cmath>
#include <random>
#include <stdexcept>

#include "deltalab/harness.hpp"
#include "deltalab/linear_propagator.hpp"
#include "deltalab/scattering_analytics.hpp"

namespace deltalab {

namespace {

void add(std::vector<Check>& out, const std::string& suite, const std::string& name, double measured,
         double threshold) {
  out.push_back({suite, name, measured <= threshold, measured, threshold});
}

WaveField packet(const Grid& g, double x0, double v, double w) {
  WaveField f(g);
  for (int j = 0; j < g.N; ++j) {
    const double y = (g.x(j) - x0) / w;
    f.u[j] = std::polar(std::exp(-0.5 * y * y), v * g.x(j));
  }
  return f;
}

void analytics(std::vector<Check>& out) {
  const std::string s = "analytics";
  std::mt19937_64 rng(20241);
  std::uniform_real_distribution<double> ex(-3.0, 3.0), sg(0.0, 1.0);
  double uni = 0.0, lin = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double q = (sg(rng) < 0.5 ? -1 : 1) * std::pow(10.0, ex(rng));
    const double l = (sg(rng) < 0.5 ? -1 : 1) * std::pow(10.0, ex(rng));
    const auto c = scattering_coeffs(q, l);
    uni = std::max(uni, std::abs(std::norm(c.t) + std::norm(c.r) - 1.0));
    lin = std::max(lin, std::abs(c.t - 1.0 - c.r));
  }
  add(out, s, "unitarity |t|^2+|r|^2=1", uni, 1e-12);
  add(out, s, "t = 1 + r", lin, 1e-12);
  add(out, s, "prediction q=-3 v=3", std::abs(transmitted_mass_prediction(-3, 3) - 0.5), 1e-15);
  add(out, s, "prediction even in q", std::abs(transmitted_mass_prediction(-1.7, 2.3) - transmitted_mass_prediction(1.7, 2.3)), 0.0);
  add(out, s, "phi0 endpoints", std::max(std::abs(phi0(0.0)), std::abs(phi0(1.0))), 1e-8);
  add(out, s, "phi0(0.8) reference", std::abs(phi0(0.8) - 0.0452781834653224412), 1e-8);
  const Grid g = make_grid(40.0, 4096);
  add(out, s, "bound state mass 2(lambda-|q|)", std::abs(mass(bound_state_field(-1.0, 2.0, g)) - 2.0), 1e-3);
  add(out, s, "eigenstate unit norm", std::abs(spatial_norm(linear_eigenstate(-2.0, g), 2.0) - 1.0), 1e-3);
}

void propagator(std::vector<Check>& out) {
  const std::string s = "propagator";
  const Grid g = make_grid(40.0, 4096);
  const WaveField u = packet(g, -10.0, 4.0, 1.0);
  add(out, s, "q=0 equals free flow", l2_distance(delta_propagate(0.0, u, 1.3), free_propagate(u, 1.3)), 1e-12);
  for (double q : {-1.0, -2.0, -4.0}) {
    const WaveField e = linear_eigenstate(q, g);
    const WaveField ev = delta_propagate(q, e, 1.0);
    add(out, s, "eigenstate phase q=" + std::to_string(static_cast<int>(q)),
        l2_distance(ev, std::polar(1.0, 0.5 * q * q) * e), 1e-3);
  }
  for (double q : {-2.0, 3.0}) {
    const std::string tag = " q=" + std::to_string(static_cast<int>(q));
    const PropagatorPlan plan(g, q);
    const WaveField a = plan.propagate(u, 1.7);
    add(out, s, "weighted norm conserved" + tag, std::abs(plan.weighted_mass(a) - plan.weighted_mass(u)), 1e-12);
    add(out, s, "unitarity after scattering" + tag,
        std::abs(spatial_norm(plan.propagate(u, 5.0), 2.0) - spatial_norm(u, 2.0)), 1e-6);
    const WaveField b = delta_propagate(q, delta_propagate(q, u, 0.6), 1.1);
    add(out, s, "group law" + tag, l2_distance(a, b), 1e-6);
    add(out, s, "reflection commutes" + tag, l2_distance(reflect(a), delta_propagate(q, reflect(u), 1.7)), 1e-8);
  }
  const WaveField cn = cn_reference_propagate(-2.0, u, 2.0, 5e-4, 16);
  add(out, s, "Crank-Nicolson oracle q=-2 v=4 t=2", l2_distance(delta_propagate(-2.0, u, 2.0), cn), 1e-3);
  const WaveField d = dispersive_propagate(-2.0, u, 1.0);
  add(out, s, "dispersive part has no eigen component", std::abs(project_eigenstate(-2.0, d).coefficient), 1e-6);
}

void solver(std::vector<Check>& out) {
  const std::string s = "solver";
  const Grid g = make_grid(40.0, 4096);
  SolverConfig cfg;
  cfg.grid = g;
  cfg.q = 0.0;
  const SolitonParams sp{1.0, 3.0, -10.0, 0.0};
  const Trajectory tr = evolve(cfg, soliton_field(sp, 0.0, g), 0.0, 2.0, 100);
  add(out, s, "soliton fidelity t=2", l2_distance(tr.fields.back(), soliton_field(sp, 2.0, g)), 1e-4);
  const auto dr = conservation_drift(0.0, tr);
  add(out, s, "mass drift per unit time", dr.mass_rate(), 1e-6);
  add(out, s, "energy drift per unit time", dr.energy_rate(), 1e-6);
  const auto c = conserved(0.0, soliton_field({1.0, 0.0, 0.0, 0.0}, 0.0, g));
  add(out, s, "sech energy -1/3", std::abs(c.energy + 1.0 / 3.0), 1e-10);

  SolverConfig lin = cfg;
  lin.q = -2.0;
  lin.cubic = false;
  const WaveField u = packet(g, -10.0, 4.0, 1.0);
  const WaveField a = evolve(lin, u, 0.0, 0.5, 0).fields.back();
  add(out, s, "linear evolve equals delta_propagate", l2_distance(a, delta_propagate(-2.0, u, 0.5)), 1e-6);

  SolverConfig bs = cfg;
  bs.q = -1.0;
  bs.dt = 2.5e-4;
  const WaveField b0 = bound_state_field(-1.0, 2.0, g);
  const Trajectory bt = evolve(bs, b0, 0.0, 0.5, 400);
  double drift = 0.0;
  for (const auto& f : bt.fields) {
    WaveField m(g), m0(g);
    for (int j = 0; j < g.N; ++j) {
      m.u[j] = std::abs(f.u[j]);
      m0.u[j] = std::abs(b0.u[j]);
    }
    drift = std::max(drift, l2_distance(m, m0));
  }
  add(out, s, "bound state profile drift t<=0.5", drift, 1e-3);
  add(out, s, "energy bound margin (negated)", -energy_bound_check(-1.0, bt).worst_margin, 0.0);
}

void phases(std::vector<Check>& out) {
  const std::string s = "phases";
  SimParams p;
  const auto sch = phase_schedule(p);
  add(out, s, "x0 + v t1 = -v^eps", std::abs(p.x0 + p.v * sch.t1 + std::pow(p.v, p.eps)), 1e-12);
  add(out, s, "x0 + v t2 = v^eps", std::abs(p.x0 + p.v * sch.t2 - std::pow(p.v, p.eps)), 1e-12);
  const Grid g = make_grid(60.0, 8192);
  p.solver.grid = g;
  const WaveField u0 = incident_data(p, g);
  add(out, s, "incident mass 2", std::abs(mass(u0) - 2.0), 1e-8);
  add(out, s, "incident mass right of 0", half_line_mass(u0, Side::right, 0.0), 1e-6);
  const auto [tr, rf] = outgoing_approximants(p, sch.t2, sch.t2, g);
  add(out, s, "outgoing masses sum to 2 at t2", std::abs(mass(tr) + mass(rf) - 2.0), 1e-8);
  const WaveField e = linear_eigenstate(p.q, g);
  add(out, s, "bound remainder of eigenstate", l2_distance(bound_remainder(p.q, e, WaveField(g), WaveField(g)), e), 1e-10);
  const WaveField g0 = cubic_correction(p.q, u0, 0.0, 8);
  add(out, s, "cubic correction at t=0", l2_distance(g0, u0), 0.0);
}

}  // namespace

std::vector<Check> verify(const std::string& suite) {
  std::vector<Check> out;
  const bool all = suite == "all";
  if (!all && suite != "analytics" && suite != "propagator" && suite != "solver" && suite != "phases")
    throw std::invalid_argument("unknown suite '" + suite + "'");
  if (all || suite == "analytics") analytics(out);
  if (all || suite == "propagator") propagator(out);
  if (all || suite == "solver") solver(out);
  if (all || suite == "phases") phases(out);
  return out;
}

}  // namespace deltalab
