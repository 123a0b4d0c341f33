#include "deltalab/linear_propagator.hpp"

#include <cmath>
#include <stdexcept>

#include "deltalab/fft.hpp"
#include "deltalab/scattering_analytics.hpp"

namespace deltalab {

PropagatorPlan::PropagatorPlan(const Grid& g, double q) : grid_(g), q_(q), c_(g.N / 2), k_(g.wavenumbers()) {
  const int N = g.N;
  const double dx = g.dx;
  t_tab_.resize(N);
  r_tab_.resize(N);
  for (int j = 0; j < N; ++j) {
    if (q == 0.0) {
      t_tab_[j] = 1.0;
      r_tab_[j] = 0.0;
    } else {
      const auto s = scattering_coeffs(q, k_[j]);
      t_tab_[j] = s.t;
      r_tab_[j] = s.r;
    }
  }
  const double th = std::tanh(0.5 * q * dx);
  w_.assign(N, 1.0);
  w_[c_] = 1.0 + th;
  w_[0] = 1.0 - th;
  wh_.assign(c_ + 1, 2.0);
  wh_[0] = 1.0 + th;
  wh_[c_] = 1.0 - th;
  a_ = std::exp(0.5 * q * dx);
  if (q != 0.0) {
    b_.resize(c_ + 1);
    const double ref = q < 0.0 ? 0.0 : g.L;
    for (int m = 0; m <= c_; ++m) b_[m] = std::exp(q * (m * dx - ref));
    bb_ = 0.0;
    for (int m = 0; m <= c_; ++m) bb_ += wh_[m] * b_[m] * b_[m];
    bb_ *= dx;
  }
  tau2_.resize(N);
  for (int j = 0; j < N; ++j) {
    const double s = std::sin(0.5 * k_[j] * dx);
    tau2_[j] = (4.0 * s * s + 2.0 * std::cosh(q * dx) - 2.0) / (dx * dx);
  }
}

void PropagatorPlan::multiplier(double t, cvec& m) const {
  m.resize(grid_.N);
  for (int j = 0; j < grid_.N; ++j) m[j] = std::polar(1.0, -0.5 * t * k_[j] * k_[j]);
}

void PropagatorPlan::split(const WaveField& u, cvec& e, cvec& o) const {
  const int N = grid_.N;
  e.assign(c_ + 1, 0.0);
  o.assign(c_ + 1, 0.0);
  for (int m = 0; m <= c_; ++m) {
    const cplx p = u.u[(c_ + m) % N], n = u.u[(c_ - m + N) % N];
    e[m] = 0.5 * (p + n);
    o[m] = 0.5 * (p - n);
  }
  o[0] = 0.0;
  o[c_] = 0.0;
}

WaveField PropagatorPlan::join(const cvec& e, const cvec& o) const {
  WaveField f(grid_);
  for (int m = 0; m < c_; ++m) f.u[c_ + m] = e[m] + o[m];
  for (int m = 1; m < c_; ++m) f.u[c_ - m] = e[m] - o[m];
  f.u[0] = e[c_];
  return f;
}

cplx PropagatorPlan::half_inner_b(const cvec& e) const {
  cplx s = 0.0;
  for (int m = 0; m <= c_; ++m) s += wh_[m] * b_[m] * e[m];
  return s * grid_.dx;
}

void PropagatorPlan::robin(const cvec& e, cvec& W) const {
  W.resize(c_);
  const double dx = grid_.dx;
  for (int m = 0; m < c_; ++m) W[m] = (e[m + 1] / a_ - e[m] * a_) / dx;
}

void PropagatorPlan::robin_inverse(const cvec& W, cvec& e) const {
  const double dx = grid_.dx;
  e.assign(c_ + 1, 0.0);
  // each recursion runs in the direction where e^{-|q| dx} damps
  if (q_ < 0.0) {
    const double d = std::exp(q_ * dx);
    for (int m = 0; m < c_; ++m) e[m + 1] = d * e[m] + dx * a_ * W[m];
  } else {
    const double d = std::exp(-q_ * dx);
    for (int m = c_ - 1; m >= 0; --m) e[m] = d * e[m + 1] - (dx / a_) * W[m];
  }
  const cplx beta = half_inner_b(e) / bb_;
  for (int m = 0; m <= c_; ++m) e[m] -= beta * b_[m];
}

void PropagatorPlan::odd_full(const cvec& o, cvec& f) const {
  f.assign(grid_.N, 0.0);
  for (int m = 1; m < c_; ++m) {
    f[c_ + m] = o[m];
    f[c_ - m] = -o[m];
  }
}

void PropagatorPlan::staggered_full(const cvec& W, cvec& f) const {
  // f[i] sits at x = (i - c + 1/2) dx
  f.assign(grid_.N, 0.0);
  for (int m = 0; m < c_; ++m) {
    f[c_ + m] = W[m];
    f[c_ - 1 - m] = -W[m];
  }
}

WaveField PropagatorPlan::free(const WaveField& u, double t) const {
  cvec a = u.u, m;
  multiplier(t, m);
  const Fft& fft = Fft::get(grid_.N);
  fft.forward(a);
  for (int j = 0; j < grid_.N; ++j) a[j] *= m[j];
  fft.inverse(a);
  return WaveField(grid_, std::move(a));
}

WaveField PropagatorPlan::propagate(const WaveField& u, double t) const {
  if (!(u.grid == grid_)) throw std::invalid_argument("field grid does not match plan");
  if (q_ == 0.0) return free(u, t);
  const Fft& fft = Fft::get(grid_.N);
  cvec m, e, o, f, W;
  multiplier(t, m);
  split(u, e, o);

  odd_full(o, f);
  fft.forward(f);
  for (int j = 0; j < grid_.N; ++j) f[j] *= m[j];
  fft.inverse(f);
  for (int i = 1; i < c_; ++i) o[i] = f[c_ + i];

  const cplx beta = half_inner_b(e) / bb_;
  for (int i = 0; i <= c_; ++i) e[i] -= beta * b_[i];
  robin(e, W);
  staggered_full(W, f);
  fft.forward(f);
  for (int j = 0; j < grid_.N; ++j) f[j] *= m[j];
  fft.inverse(f);
  for (int i = 0; i < c_; ++i) W[i] = f[c_ + i];
  robin_inverse(W, e);
  const cplx ph = q_ < 0.0 ? std::polar(1.0, 0.5 * t * q_ * q_) : cplx(1.0);
  for (int i = 0; i <= c_; ++i) e[i] += beta * ph * b_[i];
  return join(e, o);
}

WaveField PropagatorPlan::multiplier_form(const WaveField& u, double t) const {
  if (!(u.grid == grid_)) throw std::invalid_argument("field grid does not match plan");
  WaveField out = free(u, t);
  if (q_ == 0.0) return out;
  const int N = grid_.N;
  // fold onto x <= 0: s(x) = u(x) + u(-x), s(0) = u(0)
  cvec s(N, 0.0), m;
  s[c_] = u.u[c_];
  for (int j = 1; j < c_; ++j) s[c_ - j] = u.u[c_ - j] + u.u[c_ + j];
  multiplier(t, m);
  const Fft& fft = Fft::get(N);
  fft.forward(s);
  for (int j = 0; j < N; ++j) s[j] *= m[j] * r_tab_[j];
  fft.inverse(s);
  // evaluate at |x|
  out.u[c_] += s[c_];
  for (int j = 1; j < c_; ++j) {
    out.u[c_ + j] += s[c_ + j];
    out.u[c_ - j] += s[c_ + j];
  }
  out.u[0] += s[0];
  if (q_ < 0.0) {
    cvec e, o;
    split(u, e, o);
    const cplx beta = half_inner_b(e) / bb_ * std::polar(1.0, 0.5 * t * q_ * q_);
    for (int j = 0; j < N; ++j) out.u[j] += beta * std::exp(q_ * std::abs(grid_.x(j)));
  }
  return out;
}

cplx PropagatorPlan::inner(const WaveField& f, const WaveField& g) const {
  cplx s = 0.0;
  for (int j = 0; j < grid_.N; ++j) s += w_[j] * std::conj(f.u[j]) * g.u[j];
  return s * grid_.dx;
}

double PropagatorPlan::weighted_mass(const WaveField& u) const {
  double s = 0.0;
  for (int j = 0; j < grid_.N; ++j) s += w_[j] * std::norm(u.u[j]);
  return s * grid_.dx;
}

double PropagatorPlan::kinetic(const WaveField& u) const {
  const Fft& fft = Fft::get(grid_.N);
  const int N = grid_.N;
  const double dx = grid_.dx;
  if (q_ == 0.0) {
    cvec a = u.u;
    fft.forward(a);
    double s = 0.0;
    for (int j = 0; j < N; ++j) s += k_[j] * k_[j] * std::norm(a[j]);
    return s * dx / N;
  }
  cvec e, o, f, W;
  split(u, e, o);
  odd_full(o, f);
  fft.forward(f);
  double ko = 0.0;
  for (int j = 0; j < N; ++j) ko += k_[j] * k_[j] * std::norm(f[j]);
  ko *= dx / N;

  const cplx beta = half_inner_b(e) / bb_;
  for (int i = 0; i <= c_; ++i) e[i] -= beta * b_[i];
  robin(e, W);
  staggered_full(W, f);
  fft.forward(f);
  double ke = 0.0;
  for (int j = 0; j < N; ++j) ke += std::norm(f[j]) * k_[j] * k_[j] / tau2_[j];
  ke *= dx / N;
  if (q_ < 0.0) ke -= q_ * q_ * std::norm(beta) * bb_;
  return ko + ke;
}

cplx PropagatorPlan::eigen_coefficient(const WaveField& u) const {
  if (q_ >= 0.0) return 0.0;
  cvec e, o;
  split(u, e, o);
  // e_q = |q|^{1/2} b on the half line
  return half_inner_b(e) / bb_ / std::sqrt(-q_);
}

WaveField free_propagate(const WaveField& u, double t) { return PropagatorPlan(u.grid, 0.0).free(u, t); }

Projection project_eigenstate(double q, const WaveField& u) {
  if (q >= 0.0) return {0.0, WaveField(u.grid)};
  PropagatorPlan plan(u.grid, q);
  const cplx c = plan.eigen_coefficient(u);
  return {c, c * linear_eigenstate(q, u.grid)};
}

WaveField delta_propagate(double q, const WaveField& u, double t) { return PropagatorPlan(u.grid, q).propagate(u, t); }

WaveField dispersive_propagate(double q, const WaveField& u, double t) {
  PropagatorPlan plan(u.grid, q);
  WaveField out = plan.propagate(u, t);
  if (q >= 0.0) return out;
  const cplx c = plan.eigen_coefficient(u) * std::polar(1.0, 0.5 * t * q * q);
  const WaveField e = linear_eigenstate(q, u.grid);
  for (int j = 0; j < u.grid.N; ++j) out.u[j] -= c * e.u[j];
  return out;
}

WaveField multiplier_propagate(double q, const WaveField& u, double t) { return PropagatorPlan(u.grid, q).multiplier_form(u, t); }

WaveField highvelocity_split(double q, double v, const WaveField& phi, double x0, double t, bool* window_ok) {
  if (!(v > 0.0)) throw std::domain_error("velocity must be positive");
  if (window_ok) *window_ok = (2.0 * std::abs(x0) / v <= t) && (t <= 1.0);
  const Grid& g = phi.grid;
  const auto sc = q == 0.0 ? ScatteringCoeffs{1.0, 0.0, v, 0.0} : scattering_coeffs(q, v);
  WaveField in = spectral_shift(phi, x0);
  WaveField mirrored = reflect(in);
  for (int j = 0; j < g.N; ++j) {
    in.u[j] *= std::polar(1.0, v * g.x(j));
    mirrored.u[j] *= std::polar(1.0, -v * g.x(j));
  }
  PropagatorPlan plan(g, 0.0);
  return sc.t * plan.free(in, t) + sc.r * plan.free(mirrored, t);
}

}  // namespace deltalab
