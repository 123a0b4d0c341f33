#include "deltalab/phase_experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "deltalab/linear_propagator.hpp"
#include "deltalab/scattering_analytics.hpp"

namespace deltalab {

std::string validate(const SimParams& p) {
  if (!(p.v > 0.0)) throw std::invalid_argument("v must be positive");
  if (!(p.x0 < 0.0)) throw std::invalid_argument("x0 must be negative");
  if (!(p.eps > 0.0 && p.eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
  if (p.x0 > -std::pow(p.v, p.eps)) {
    std::ostringstream os;
    os << "x0=" << p.x0 << " is inside -v^eps=" << -std::pow(p.v, p.eps);
    return os.str();
  }
  return {};
}

PhaseSchedule phase_schedule(const SimParams& p) {
  validate(p);
  const double w = std::pow(p.v, p.eps - 1.0);
  PhaseSchedule s;
  s.t1 = std::abs(p.x0) / p.v - w;
  if (!(s.t1 > 0.0)) throw std::invalid_argument("t1 <= 0: soliton starts inside the interaction zone");
  s.t2 = s.t1 + 2.0 * w;
  s.t3 = s.t2 + p.eps * std::log(p.v);
  return s;
}

std::pair<double, double> uniformity_window(const SimParams& p) {
  const auto s = phase_schedule(p);
  const double a = s.t2 + std::pow(p.v, p.eps - 1.0);
  return {a, s.t3 > a ? s.t3 : a + 1.0};
}

double settle_time(const SimParams& p) { return (std::abs(p.x0) + 15.0) / p.v; }

WaveField incident_data(const SimParams& p, const Grid& g) {
  validate(p);
  return soliton_field({1.0, p.v, p.x0, 0.0}, 0.0, g);
}

WaveField free_soliton_approximant(const SimParams& p, double t, const Grid& g) {
  if (t < 0.0) throw std::invalid_argument("t must be >= 0");
  return soliton_field({1.0, p.v, p.x0, 0.0}, t, g);
}

WaveField cubic_correction(double q, const WaveField& phi, double t, int n_quad) {
  if (n_quad < 1) throw std::invalid_argument("n_quad must be positive");
  if (t == 0.0) return phi;
  PropagatorPlan plan(phi.grid, q);
  WaveField g = plan.propagate(phi, t);
  const double h = t / n_quad;
  const cplx ih(0.0, h);
  for (int k = 0; k < n_quad; ++k) {
    const double s = (k + 0.5) * h;
    WaveField a = plan.propagate(phi, s);
    for (auto& z : a.u) z *= std::norm(z);
    a = plan.propagate(a, t - s);
    for (int j = 0; j < g.grid.N; ++j) g.u[j] += ih * a.u[j];
  }
  return g;
}

namespace {

ScatteringCoeffs coeffs_at(const SimParams& p) {
  return p.q == 0.0 ? ScatteringCoeffs{1.0, 0.0, p.v, 0.0} : scattering_coeffs(p.q, p.v);
}

Trajectory nls0_run(double alpha, const Grid& g, double dt, const std::vector<double>& spans) {
  WaveField f(g);
  for (int j = 0; j < g.N; ++j) f.u[j] = alpha / std::cosh(g.x(j));
  Trajectory tr;
  tr.push(0.0, f);
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.grid = g;
  cfg.q = 0.0;
  // small-alpha pieces disperse; only the translated field has to stay interior
  cfg.abort_on_unhealthy = false;
  for (double s : spans) {
    if (s <= tr.times.back() + 1e-12) continue;
    if (alpha == 0.0) {
      tr.push(s, f);
      continue;
    }
    f = evolve(cfg, f, tr.times.back(), s, 0).fields.back();
    tr.push(s, f);
  }
  return tr;
}

}  // namespace

OutgoingModel::OutgoingModel(const SimParams& p, double t2, const Grid& g, std::vector<double> times)
    : p_(p), t2_(t2), g_(g) {
  std::vector<double> spans;
  for (double t : times)
    if (t >= t2 - 1e-12) spans.push_back(std::max(t - t2, 0.0));
  std::sort(spans.begin(), spans.end());
  const auto sc = coeffs_at(p);
  tr_ = nls0_run(std::abs(sc.t), g, p.solver.dt, spans);
  ref_ = nls0_run(std::abs(sc.r), g, p.solver.dt, spans);
}

std::pair<WaveField, WaveField> OutgoingModel::at(double t) const {
  if (t < t2_ - 1e-12) throw std::invalid_argument("outgoing approximants need t >= t2");
  const auto sc = coeffs_at(p_);
  const double s = t - t2_;
  auto pick = [&](const Trajectory& tr) {
    const std::size_t i = tr.nearest(s);
    if (std::abs(tr.times[i] - s) > 1e-9 * std::max(1.0, s))
      throw std::invalid_argument("outgoing model was not sampled at the requested time");
    return tr.fields[i];
  };
  const double shift = p_.x0 + t * p_.v;
  const cplx common = std::polar(1.0, -0.5 * t * p_.v * p_.v + 0.5 * t2_);
  WaveField tr = spectral_shift(pick(tr_), shift);
  WaveField rf = spectral_shift(pick(ref_), -shift);
  const cplx pt = common * std::polar(1.0, std::arg(sc.t));
  const cplx pr = common * std::polar(1.0, std::arg(sc.r));
  for (int j = 0; j < g_.N; ++j) {
    const double x = g_.x(j);
    tr.u[j] *= pt * std::polar(1.0, x * p_.v);
    rf.u[j] *= pr * std::polar(1.0, -x * p_.v);
  }
  if (sc.r == 0.0) rf = WaveField(g_);
  if (sc.t == 0.0) tr = WaveField(g_);
  return {tr, rf};
}

std::pair<WaveField, WaveField> outgoing_approximants(const SimParams& p, double t2, double t, const Grid& g) {
  return OutgoingModel(p, t2, g, {t}).at(t);
}

WaveField bound_remainder(double q, const WaveField& u_t2, const WaveField& u_tr, const WaveField& u_ref) {
  if (q >= 0.0) return WaveField(u_t2.grid);
  return project_eigenstate(q, u_t2 - u_tr - u_ref).Pu;
}

double transmitted_fraction(const WaveField& u) {
  const double m = mass(u);
  return m > 0.0 ? half_line_mass(u, Side::right, 0.0) / m : 0.0;
}

double discrepancy(const Trajectory& tr, const std::function<WaveField(double)>& approx, double ta, double tb,
                   const NormSpec& spec) {
  if (tr.empty()) throw std::invalid_argument("empty trajectory");
  if (ta > tb) throw std::invalid_argument("window start after end");
  const double tol = 1e-9;
  if (ta < tr.times.front() - tol || tb > tr.times.back() + tol) throw std::invalid_argument("window outside trajectory");
  Trajectory d;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double t = tr.times[i];
    if (t < ta - tol || t > tb + tol) continue;
    d.push(t, tr.fields[i] - approx(t));
  }
  if (d.empty()) {
    const std::size_t i = tr.nearest(0.5 * (ta + tb));
    d.push(tr.times[i], tr.fields[i] - approx(tr.times[i]));
  }
  if (d.size() == 1 && spec.p != kInf) return spatial_norm(d.fields[0], spec.r);
  return spacetime_norm(d, spec);
}

OutcomeReport measure_outcome(const SimParams& p, const Trajectory& tr) {
  if (tr.empty()) throw std::invalid_argument("empty trajectory");
  const auto sch = phase_schedule(p);
  if (tr.times.back() < sch.t2 - 1e-9) throw std::invalid_argument("trajectory ends before t2");
  const Grid& g = tr.grid;

  OutcomeReport r;
  r.q = p.q;
  r.v = p.v;
  r.x0 = p.x0;
  r.eps = p.eps;
  r.t1 = sch.t1;
  r.t2 = sch.t2;
  r.t3 = sch.t3;
  r.prediction = transmitted_mass_prediction(p.q, p.v);

  const WaveField& uf = tr.fields.back();
  r.t_final = tr.times.back();
  const double m = mass(uf);
  r.transmitted_raw = 0.5 * half_line_mass(uf, Side::right, 0.0);
  r.transmitted_fraction = transmitted_fraction(uf);
  r.reflected_fraction = half_line_mass(uf, Side::left, 0.0) / m;
  r.transmitted_at_t3 = transmitted_fraction(tr.fields[tr.nearest(sch.t3)]);
  r.abs_error = std::abs(r.transmitted_fraction - r.prediction);

  const double win = half_line_mass(uf, Side::right, -5.0) - half_line_mass(uf, Side::right, 5.0);
  r.trapped_window_mass = win;
  if (p.q < 0.0) r.trapped_eigenstate_overlap = std::norm(project_eigenstate(p.q, uf).coefficient);
  // against the incident mass, so losses show up here
  const double m0 = mass(tr.fields.front());
  r.bookkeeping = (half_line_mass(uf, Side::right, 5.0) + half_line_mass(uf, Side::left, -5.0) + win) / m0;

  const auto [wa, wb] = uniformity_window(p);
  r.uniform_t_start = wa;
  r.uniform_t_end = wb;
  r.uniform_min = kInf;
  r.uniform_max = -kInf;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (tr.times[i] < wa - 1e-9 || tr.times[i] > wb + 1e-9) continue;
    const double f = transmitted_fraction(tr.fields[i]);
    r.uniform_min = std::min(r.uniform_min, f);
    r.uniform_max = std::max(r.uniform_max, f);
  }
  if (r.uniform_min > r.uniform_max) r.uniform_min = r.uniform_max = r.transmitted_fraction;

  // approximant errors, sup in time of L^2 in space
  const NormSpec sup2{kInf, 2.0};
  r.discrepancies["phase1_free_soliton"] =
      discrepancy(tr, [&](double t) { return free_soliton_approximant(p, t, g); }, 0.0, sch.t1, sup2);
  const double t3_end = std::min(sch.t3, tr.times.back());
  if (tr.times.back() >= sch.t3 - 1e-9) {
    std::vector<double> ts{sch.t2};
    for (double t : tr.times)
      if (t >= sch.t2 - 1e-9 && t <= t3_end + 1e-9) ts.push_back(t);
    OutgoingModel model(p, sch.t2, g, ts);
    r.discrepancies["phase3_outgoing"] = discrepancy(
        tr,
        [&](double t) {
          auto [a, b] = model.at(t);
          return a + b;
        },
        sch.t2, t3_end, sup2);
    const auto [a2, b2] = model.at(sch.t2);
    const WaveField& u2 = tr.fields[tr.nearest(sch.t2)];
    r.discrepancies["phase3_bound_remainder"] = spatial_norm(bound_remainder(p.q, u2, a2, b2), 2.0);
  }
  const WaveField& u1 = tr.fields[tr.nearest(sch.t1)];
  const WaveField& u2 = tr.fields[tr.nearest(sch.t2)];
  const double s12 = tr.times[tr.nearest(sch.t2)] - tr.times[tr.nearest(sch.t1)];
  const WaveField g2 = cubic_correction(p.q, u1, s12, 16);
  const WaveField lin = delta_propagate(p.q, u1, s12);
  r.discrepancies["interaction_cubic_vs_solution"] = l2_distance(g2, u2);
  r.discrepancies["interaction_linear_vs_solution"] = l2_distance(lin, u2);
  r.discrepancies["interaction_cubic_vs_linear_over_dt"] = l2_distance(g2, lin) / s12;
  return r;
}

Trajectory simulate(const SimParams& p, double t_end, int sample_every, std::vector<double> extra_times) {
  const auto sch = phase_schedule(p);
  const auto [wa, wb] = uniformity_window(p);
  extra_times.insert(extra_times.end(), {sch.t1, sch.t2, sch.t3});
  // dense sampling across the uniformity window
  const int n_win = 20;
  for (int k = 0; k <= n_win; ++k) extra_times.push_back(wa + (wb - wa) * k / n_win);
  SolverConfig cfg = p.solver;
  cfg.q = p.q;
  return evolve(cfg, incident_data(p, cfg.grid), 0.0, t_end, sample_every, extra_times);
}

}  // namespace deltalab
