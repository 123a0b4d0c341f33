#pragma once

#include "deltalab/core_field.hpp"

namespace deltalab {

struct ScatteringCoeffs {
  cplx t;
  cplx r;
  double lambda = 0.0;
  double q = 0.0;
};

// t = i lambda/(i lambda - q), r = q/(i lambda - q)
ScatteringCoeffs scattering_coeffs(double q, double lambda);

// v^2/(v^2+q^2)
double transmitted_mass_prediction(double q, double v);

struct SolitonParams {
  double lambda = 1.0;
  double v = 0.0;
  double x0 = 0.0;
  double gamma = 0.0;
};

// e^{i gamma} e^{i v x} e^{-i t v^2/2} e^{i lambda^2 t/2} lambda sech(lambda (x - x0 - v t))
WaveField soliton_field(const SolitonParams& p, double t, const Grid& g);

// lambda sech(lambda |x| + atanh(|q|/lambda)), needs q < 0 < |q| < lambda
WaveField bound_state_field(double q, double lambda, const Grid& g);

// |q|^{1/2} e^{q|x|}, q < 0
WaveField linear_eigenstate(double q, const Grid& g);

// int_0^inf log(1 + sin^2(pi a)/cosh^2(pi z)) z/(z^2 + (2a-1)^2) dz, truncated at z = 12.
// Throws at a = 1/2 where the integral diverges.
double phi0(double alpha);

struct OutgoingParams {
  double T_tilde = 0.0;
  double R_tilde = 0.0;
  double arg_t = 0.0;
  double arg_r = 0.0;
  double phi0_t = 0.0;
  double phi0_r = 0.0;
};

OutgoingParams outgoing_params(double q, double v);

// Two outgoing solitons of the long-time profile; phi0 enters as a phase.
WaveField theorem2_profile(double q, double v, double x0, double t2, double t, const Grid& g);

}  // namespace deltalab
