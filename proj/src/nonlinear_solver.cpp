#include "deltalab/nonlinear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <sstream>

#include "deltalab/fft.hpp"

namespace deltalab {

CrankNicolson::CrankNicolson(const Grid& g, double q, double dt) : n_(g.N), q_(q), dt_(dt), dx_(g.dx) {
  const cplx h(0.0, 0.5 * dt);
  off_ = h * (-0.5 / (dx_ * dx_));
  diag_.assign(n_, h * (1.0 / (dx_ * dx_)));
  diag_[g.center()] += h * (q / dx_);
  // Thomas factors of (I + diag, off) once
  cp_.resize(n_);
  inv_.resize(n_);
  cplx den = 1.0 + diag_[0];
  inv_[0] = 1.0 / den;
  cp_[0] = off_ * inv_[0];
  for (int j = 1; j < n_; ++j) {
    den = 1.0 + diag_[j] - off_ * cp_[j - 1];
    inv_[j] = 1.0 / den;
    cp_[j] = off_ * inv_[j];
  }
}

void CrankNicolson::step(cvec& u) const {
  cvec d(n_);
  for (int j = 0; j < n_; ++j) {
    cplx r = (1.0 - diag_[j]) * u[j];
    if (j > 0) r -= off_ * u[j - 1];
    if (j + 1 < n_) r -= off_ * u[j + 1];
    d[j] = r;
  }
  d[0] *= inv_[0];
  for (int j = 1; j < n_; ++j) d[j] = (d[j] - off_ * d[j - 1]) * inv_[j];
  for (int j = n_ - 2; j >= 0; --j) d[j] -= cp_[j] * d[j + 1];
  u.swap(d);
}

namespace {

void nonlinear_phase(cvec& u, double tau) {
  for (auto& z : u) z *= std::polar(1.0, tau * std::norm(z));
}

double max_abs2(const cvec& u) {
  double m = 0.0;
  for (const auto& z : u) m = std::max(m, std::norm(z));
  return m;
}

}  // namespace

Trajectory evolve(const SolverConfig& cfg, const WaveField& u0, double t0, double t1, int sample_every,
                  const std::vector<double>& extra_times) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t1 > t0)) throw std::invalid_argument("evolve needs t1 > t0");
  if (!(u0.grid == cfg.grid)) throw std::invalid_argument("initial field grid does not match config");
  if (cfg.abort_on_unhealthy && !healthy(u0)) throw SolverAbort("initial field is not boundary-healthy");

  // breakpoints: the regular step grid plus the extra times, hit exactly
  std::vector<double> pts;
  const long n_full = static_cast<long>(std::floor((t1 - t0) / cfg.dt + 1e-9));
  for (long s = 1; s <= n_full; ++s) pts.push_back(t0 + s * cfg.dt);
  if (pts.empty() || pts.back() < t1 - 1e-9 * cfg.dt) pts.push_back(t1);
  pts.back() = t1;
  std::set<std::size_t> marks;
  for (double te : extra_times) {
    if (te <= t0 + 1e-9 * cfg.dt || te > t1 + 1e-12) continue;
    auto it = std::lower_bound(pts.begin(), pts.end(), te - 1e-9 * cfg.dt);
    if (it == pts.end() || std::abs(*it - te) > 1e-9 * cfg.dt) it = pts.insert(it, te);
  }
  for (double te : extra_times) {
    auto it = std::lower_bound(pts.begin(), pts.end(), te - 1e-9 * cfg.dt);
    if (it != pts.end() && std::abs(*it - te) <= 1e-9 * cfg.dt) marks.insert(it - pts.begin());
  }

  PropagatorPlan plan(cfg.grid, cfg.q);
  std::unique_ptr<CrankNicolson> cn;
  if (cfg.scheme == Scheme::crank_nicolson_oracle) cn = std::make_unique<CrankNicolson>(cfg.grid, cfg.q, cfg.dt);

  const double m0 = plan.weighted_mass(u0);
  if (cfg.cubic && cfg.dt * max_abs2(u0.u) >= 0.5)
    throw SolverAbort("dt * max|u|^2 >= 0.5, nonlinear phase step too coarse");

  Trajectory tr;
  tr.push(t0, u0);
  WaveField u = u0;
  double t_prev = t0;
  long regular = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double t = pts[i];
    const double h = t - t_prev;
    const bool full = std::abs(h - cfg.dt) <= 1e-9 * cfg.dt;
    if (cfg.cubic) nonlinear_phase(u.u, 0.5 * h);
    if (cn) {
      if (full)
        cn->step(u.u);
      else
        CrankNicolson(cfg.grid, cfg.q, h).step(u.u);
    } else {
      u = plan.propagate(u, h);
    }
    if (cfg.cubic) nonlinear_phase(u.u, 0.5 * h);
    t_prev = t;
    const bool last = i + 1 == pts.size();
    const bool on_grid = std::abs((t - t0) / cfg.dt - std::round((t - t0) / cfg.dt)) < 1e-6;
    if (on_grid) regular = std::lround((t - t0) / cfg.dt);

    if ((on_grid && regular % 10 == 0) || last) {
      const double m = plan.weighted_mass(u);
      if (!u.finite() || std::abs(m - m0) > cfg.abort_mass_drift * m0) {
        std::ostringstream os;
        os << "mass drift " << std::abs(m - m0) / m0 << " at t=" << t;
        throw SolverAbort(os.str());
      }
      if (cfg.abort_on_unhealthy && !healthy(u)) {
        std::ostringstream os;
        os << "field unhealthy at t=" << t << " (boundary tail " << boundary_tail_fraction(u) << ")";
        throw SolverAbort(os.str());
      }
      if (cfg.cubic && cfg.dt * max_abs2(u.u) >= 0.5) throw SolverAbort("dt * max|u|^2 >= 0.5 during run");
    }
    if ((on_grid && sample_every > 0 && regular % sample_every == 0) || last || marks.count(i)) tr.push(t, u);
  }
  return tr;
}

ConservedQuantities conserved(double q, const WaveField& u) {
  PropagatorPlan plan(u.grid, q);
  const auto& w = plan.weights();
  double quartic = 0.0;
  for (int j = 0; j < u.grid.N; ++j) quartic += w[j] * std::pow(std::norm(u.u[j]), 2);
  quartic *= u.grid.dx;
  return {plan.weighted_mass(u), 0.5 * plan.kinetic(u) - 0.5 * quartic};
}

DriftReport conservation_drift(double q, const Trajectory& tr) {
  DriftReport r;
  if (tr.empty()) return r;
  const auto c0 = conserved(q, tr.fields.front());
  for (const auto& f : tr.fields) {
    const auto c = conserved(q, f);
    r.mass_drift = std::max(r.mass_drift, std::abs(c.mass - c0.mass) / std::abs(c0.mass));
    r.energy_drift = std::max(r.energy_drift, std::abs(c.energy - c0.energy) / std::abs(c0.energy));
  }
  r.duration = tr.times.back() - tr.times.front();
  return r;
}

EnergyBoundReport energy_bound_check(double q, const Trajectory& tr) {
  EnergyBoundReport rep;
  if (tr.empty()) return rep;
  PropagatorPlan plan(tr.grid, q);
  auto grad = [&](const WaveField& f) {
    const double k = plan.kinetic(f) - 2.0 * q * std::norm(f.at_origin());
    return std::sqrt(std::max(k, 0.0));
  };
  const WaveField& f0 = tr.fields.front();
  const double n0 = std::sqrt(plan.weighted_mass(f0));
  const double rhs = 2.0 * grad(f0) + 2.0 * std::abs(q) * n0 + n0 * n0 * n0;
  rep.worst_margin = kInf;
  for (const auto& f : tr.fields) {
    const double lhs = grad(f);
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    rep.holds.push_back(lhs <= rhs);
    rep.worst_margin = std::min(rep.worst_margin, rhs - lhs);
    rep.pass = rep.pass && lhs <= rhs;
  }
  return rep;
}

WaveField cn_reference_propagate(double q, const WaveField& u, double t, double dt, int refine) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (refine < 1 || (refine & (refine - 1)) != 0) throw std::invalid_argument("refine must be a power of two");
  const Grid& g = u.grid;
  const Grid fine = make_grid(g.L, g.N * refine);
  cvec a = u.u;
  if (refine > 1) {
    // zero-padded spectrum; the Nyquist bin is split between +-N/2
    const int N = g.N, M = fine.N;
    Fft::get(N).forward(a);
    cvec b(M, 0.0);
    for (int j = 0; j < N / 2; ++j) b[j] = a[j];
    for (int j = N / 2 + 1; j < N; ++j) b[M - N + j] = a[j];
    b[N / 2] = 0.5 * a[N / 2];
    b[M - N / 2] = 0.5 * a[N / 2];
    for (auto& z : b) z *= static_cast<double>(refine);
    Fft::get(M).inverse(b);
    a.swap(b);
  }
  const long n = std::max(1L, static_cast<long>(std::ceil(t / dt - 1e-9)));
  CrankNicolson cn(fine, q, t / n);
  for (long s = 0; s < n; ++s) cn.step(a);
  WaveField out(g);
  for (int j = 0; j < g.N; ++j) out.u[j] = a[static_cast<std::size_t>(j) * refine];
  return out;
}

}  // namespace deltalab
