#pragma once

#include "deltalab/core_field.hpp"

namespace deltalab {

// Precomputed tables for e^{-itH_q} on one grid.
//
// The even part of u is evolved through the Robin transform W = T e, a
// staggered exponential difference approximating u' - q sgn(x) u. T maps the
// even fields obeying u'(0+) - u'(0-) = 2q u(0) onto odd fields and turns H_q
// into H_0, so W moves with the free multiplier and is mapped back by an
// exact O(N) recursion. Ker T is the sampled e^{q|x|}; for q < 0 it is the
// bound state and rotates by e^{itq^2/2}. The odd part never sees the delta.
//
// The scheme is unitary in the weighted inner product <f,g>_w (see weights())
// and satisfies the group law exactly.
class PropagatorPlan {
 public:
  PropagatorPlan(const Grid& g, double q);

  const Grid& grid() const { return grid_; }
  double q() const { return q_; }
  const std::vector<double>& k() const { return k_; }
  const cvec& t_table() const { return t_tab_; }
  const cvec& r_table() const { return r_tab_; }
  // quadrature weights: 1 except 1 + tanh(q dx/2) at x=0, 1 - tanh(q dx/2) at x=-L
  const std::vector<double>& weights() const { return w_; }

  WaveField free(const WaveField& u, double t) const;
  WaveField propagate(const WaveField& u, double t) const;
  // Fourier-domain multiplier form of the half-line formula, kept as a cross-check
  WaveField multiplier_form(const WaveField& u, double t) const;

  // <f,g>_w = dx sum w_j conj(f_j) g_j
  cplx inner(const WaveField& f, const WaveField& g) const;
  double weighted_mass(const WaveField& u) const;
  // ||u'||^2 + 2q|u(0)|^2 in the form the propagator conserves
  double kinetic(const WaveField& u) const;

  // Bound-state coefficient c with Pu = c e_q for the sampled e_q (zero for q >= 0).
  cplx eigen_coefficient(const WaveField& u) const;

 private:
  Grid grid_;
  double q_;
  int c_;
  std::vector<double> k_;
  cvec t_tab_, r_tab_;
  std::vector<double> w_;
  std::vector<double> wh_;  // half-line weights, full-line equivalent
  std::vector<double> b_;   // kernel of T on the half line
  double bb_ = 0.0;
  double a_ = 1.0;          // e^{q dx/2}
  std::vector<double> tau2_;

  void multiplier(double t, cvec& m) const;
  void split(const WaveField& u, cvec& e, cvec& o) const;
  WaveField join(const cvec& e, const cvec& o) const;
  cplx half_inner_b(const cvec& e) const;
  void robin(const cvec& e, cvec& W) const;
  void robin_inverse(const cvec& W, cvec& e) const;
  void odd_full(const cvec& o, cvec& f) const;
  void staggered_full(const cvec& W, cvec& f) const;
};

WaveField free_propagate(const WaveField& u, double t);

struct Projection {
  cplx coefficient;
  WaveField Pu;
};
Projection project_eigenstate(double q, const WaveField& u);

WaveField delta_propagate(double q, const WaveField& u, double t);
WaveField dispersive_propagate(double q, const WaveField& u, double t);
WaveField multiplier_propagate(double q, const WaveField& u, double t);

// t(v) e^{-itH_0}[e^{ixv} phi(x - x0)] + r(v) e^{-itH_0}[e^{-ixv} phi(-x - x0)]
// `window_ok` reports whether 2|x0|/v <= t <= 1.
WaveField highvelocity_split(double q, double v, const WaveField& phi, double x0, double t, bool* window_ok = nullptr);

}  // namespace deltalab
