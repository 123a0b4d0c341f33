#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "deltalab/core_field.hpp"
#include "deltalab/nonlinear_solver.hpp"

namespace deltalab {

struct SimParams {
  double q = -3.0;
  double v = 3.0;
  double x0 = -10.0;
  double eps = 0.1;
  SolverConfig solver;
};

// throws on v <= 0, x0 >= 0, eps outside (0,1); returns a warning when x0 > -v^eps
std::string validate(const SimParams& p);

struct PhaseSchedule {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
};

// t1 = |x0|/v - v^{eps-1}, t2 = t1 + 2 v^{eps-1}, t3 = t2 + eps log v
PhaseSchedule phase_schedule(const SimParams& p);

// [t2 + v^{eps-1}, t3], stretched to unit length when t3 falls before its start
std::pair<double, double> uniformity_window(const SimParams& p);
// time at which the outgoing solitons sit 15 beyond the origin
double settle_time(const SimParams& p);

WaveField incident_data(const SimParams& p, const Grid& g);
WaveField free_soliton_approximant(const SimParams& p, double t, const Grid& g);

// e^{-itH}phi + i int_0^t e^{-i(t-s)H} |e^{-isH}phi|^2 e^{-isH}phi ds, midpoint rule in s
WaveField cubic_correction(double q, const WaveField& phi, double t, int n_quad);

// u_tr, u_ref of the post-interaction phase. NLS_0 of alpha*sech is integrated
// at rest on the run grid for the requested times, then translated and boosted.
class OutgoingModel {
 public:
  OutgoingModel(const SimParams& p, double t2, const Grid& g, std::vector<double> times);
  std::pair<WaveField, WaveField> at(double t) const;

 private:
  SimParams p_;
  double t2_;
  Grid g_;
  Trajectory tr_, ref_;
};

std::pair<WaveField, WaveField> outgoing_approximants(const SimParams& p, double t2, double t, const Grid& g);

// P[u(t2) - u_tr - u_ref]; zero field for q >= 0
WaveField bound_remainder(double q, const WaveField& u_t2, const WaveField& u_tr, const WaveField& u_ref);

struct OutcomeReport {
  double q = 0, v = 0, x0 = 0, eps = 0;
  double t1 = 0, t2 = 0, t3 = 0;
  double t_final = 0;
  double transmitted_fraction = 0;  // int_{x>0}|u|^2 / int |u|^2 at t_final
  double transmitted_raw = 0;       // 1/2 int_{x>0}|u|^2
  double reflected_fraction = 0;
  double transmitted_at_t3 = 0;
  double trapped_eigenstate_overlap = 0;  // |<u, e_q>|^2 at t_final
  double trapped_window_mass = 0;         // int_{|x|<5}|u|^2 at t_final
  double uniform_t_start = 0, uniform_t_end = 0;
  double uniform_min = 0, uniform_max = 0;
  double bookkeeping = 0;  // mass beyond |x|>5 plus window mass, over incident mass
  double prediction = 0;
  double abs_error = 0;
  std::map<std::string, double> discrepancies;
};

double transmitted_fraction(const WaveField& u);

OutcomeReport measure_outcome(const SimParams& p, const Trajectory& tr);

// sup/Lp-in-time of ||u - approx||_{L^r} over the samples in [ta, tb]
double discrepancy(const Trajectory& tr, const std::function<WaveField(double)>& approx, double ta, double tb,
                   const NormSpec& spec);

// evolve incident data to t_end with the schedule marks and extra times sampled
Trajectory simulate(const SimParams& p, double t_end, int sample_every, std::vector<double> extra_times = {});

}  // namespace deltalab
