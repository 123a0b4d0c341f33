#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "deltalab/core_field.hpp"
#include "deltalab/linear_propagator.hpp"

namespace deltalab {

enum class Scheme { strang_exact_linear, crank_nicolson_oracle };

struct SolverConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::strang_exact_linear;
  Grid grid;
  double q = 0.0;
  bool cubic = true;              // false drops |u|^2 u and leaves the linear flow
  double abort_mass_drift = 1e-4;
  bool abort_on_unhealthy = true;
};

struct SolverAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Crank-Nicolson on the second-difference Hamiltonian
//   H = -1/2 D2 + (q/dx) delta_{j,N/2}
// with Dirichlet ends. Factorized once.
class CrankNicolson {
 public:
  CrankNicolson(const Grid& g, double q, double dt);
  void step(cvec& u) const;

 private:
  int n_;
  double q_, dt_, dx_;
  cplx off_;               // i dt/2 * (-1/(2dx^2))
  std::vector<cplx> diag_;  // i dt/2 * H_jj
  std::vector<cplx> cp_, inv_;
};

// Strang: half nonlinear phase, linear step, half nonlinear phase.
// Samples every `sample_every` steps plus the end point and any extra times.
// An extra time off the step grid splits the step it falls in.
Trajectory evolve(const SolverConfig& cfg, const WaveField& u0, double t0, double t1, int sample_every,
                  const std::vector<double>& extra_times = {});

struct ConservedQuantities {
  double mass = 0.0;
  double energy = 0.0;
};

// mass = <u,u>_w, energy = 1/2 (||u'||^2 + 2q|u(0)|^2) - 1/2 ||u||_4^4, both in the
// discrete forms conserved by the linear step (see PropagatorPlan).
ConservedQuantities conserved(double q, const WaveField& u);

struct DriftReport {
  double mass_drift = 0.0;    // max_t |M(t) - M(0)| / M(0)
  double energy_drift = 0.0;  // max_t |E(t) - E(0)| / |E(0)|
  double duration = 0.0;
  double mass_rate() const { return duration > 0 ? mass_drift / duration : 0.0; }
  double energy_rate() const { return duration > 0 ? energy_drift / duration : 0.0; }
};
DriftReport conservation_drift(double q, const Trajectory& tr);

struct EnergyBoundReport {
  std::vector<double> lhs, rhs;
  std::vector<bool> holds;
  double worst_margin = 0.0;  // min(rhs - lhs)
  bool pass = true;
};

// ||u_x(t)|| <= 2||u_x(0)|| + 2|q| ||u(0)|| + ||u(0)||^3
EnergyBoundReport energy_bound_check(double q, const Trajectory& tr);

// Linear evolution by Crank-Nicolson. With refine > 1 the field is band-limited
// interpolated onto a grid `refine` times finer, evolved there and sampled back.
WaveField cn_reference_propagate(double q, const WaveField& u, double t, double dt, int refine = 1);

}  // namespace deltalab
