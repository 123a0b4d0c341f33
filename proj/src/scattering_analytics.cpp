#include "deltalab/scattering_analytics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace deltalab {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);
}  // namespace

ScatteringCoeffs scattering_coeffs(double q, double lambda) {
  if (q == 0.0 && lambda == 0.0) throw std::domain_error("scattering coefficients undefined at q = lambda = 0");
  const cplx den(-q, lambda);
  ScatteringCoeffs c;
  c.t = cplx(0.0, lambda) / den;
  c.r = q / den;
  c.lambda = lambda;
  c.q = q;
  return c;
}

double transmitted_mass_prediction(double q, double v) {
  if (!(v > 0.0)) throw std::domain_error("velocity must be positive");
  return v * v / (v * v + q * q);
}

WaveField soliton_field(const SolitonParams& p, double t, const Grid& g) {
  if (!(p.lambda > 0.0)) throw std::domain_error("soliton scale must be positive");
  WaveField f(g);
  const double phase_t = -0.5 * t * p.v * p.v + 0.5 * p.lambda * p.lambda * t + p.gamma;
  for (int j = 0; j < g.N; ++j) {
    const double x = g.x(j);
    f.u[j] = std::polar(p.lambda / std::cosh(p.lambda * (x - p.x0 - p.v * t)), p.v * x + phase_t);
  }
  return f;
}

WaveField bound_state_field(double q, double lambda, const Grid& g) {
  if (!(q < 0.0) || !(-q < lambda)) throw std::domain_error("bound state needs 0 < |q| < lambda");
  const double a = std::atanh(-q / lambda);
  WaveField f(g);
  for (int j = 0; j < g.N; ++j) f.u[j] = lambda / std::cosh(lambda * std::abs(g.x(j)) + a);
  return f;
}

WaveField linear_eigenstate(double q, const Grid& g) {
  if (!(q < 0.0)) throw std::domain_error("linear eigenstate exists only for q < 0");
  WaveField f(g);
  const double s = std::sqrt(-q);
  for (int j = 0; j < g.N; ++j) f.u[j] = s * std::exp(q * std::abs(g.x(j)));
  return f;
}

double phi0(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("phi0 needs alpha in [0,1]");
  const double c = 2.0 * alpha - 1.0;
  if (std::abs(c) < 1e-12) throw std::domain_error("phi0 threshold case alpha = 1/2 diverges");
  const double s2 = std::pow(std::sin(kPi * alpha), 2);
  if (s2 == 0.0) return 0.0;
  auto f = [&](double z) {
    const double ch = std::cosh(kPi * z);
    return std::log1p(s2 / (ch * ch)) * z / (z * z + c * c);
  };
  using boost::math::quadrature::gauss_kronrod;
  // the integrand peaks near z = |2a-1|; split there so the adaptive
  // refinement sees the narrow bump
  const double zmax = 12.0;
  const double knee = std::min(std::abs(c), 1.0);
  double err = 0.0, total = 0.0;
  for (auto [a, b] : {std::pair{0.0, knee}, std::pair{knee, 3.0}, std::pair{3.0, zmax}}) {
    double e = 0.0;
    total += gauss_kronrod<double, 31>::integrate(f, a, b, 30, 1e-14, &e);
    err += e;
  }
  if (err > 1e-8) throw std::runtime_error("phi0 quadrature did not reach 1e-8");
  return total;
}

OutgoingParams outgoing_params(double q, double v) {
  if (!(v > 0.0)) throw std::domain_error("velocity must be positive");
  const auto c = scattering_coeffs(q, v);
  OutgoingParams o;
  const double at = std::abs(c.t), ar = std::abs(c.r);
  o.T_tilde = std::max(2.0 * at - 1.0, 0.0);
  o.R_tilde = std::max(2.0 * ar - 1.0, 0.0);
  o.arg_t = std::arg(c.t);
  o.arg_r = q == 0.0 ? 0.0 : std::arg(c.r);
  o.phi0_t = phi0(at);
  o.phi0_r = phi0(ar);
  return o;
}

WaveField theorem2_profile(double q, double v, double x0, double t2, double t, const Grid& g) {
  if (!(v > 0.0)) throw std::domain_error("velocity must be positive");
  if (t < t2) throw std::domain_error("profile is stated for post-interaction times t >= t2");
  const auto o = outgoing_params(q, v);
  WaveField f(g);
  const double T = o.T_tilde, R = o.R_tilde;
  for (int j = 0; j < g.N; ++j) {
    const double x = g.x(j);
    cplx z = 0.0;
    if (T > 0.0)
      z += std::polar(T / std::cosh(T * (x - x0 - t * v)), o.phi0_t + 0.5 * T * T * t + o.arg_t + x * v - 0.5 * t * v * v);
    if (R > 0.0)
      z += std::polar(R / std::cosh(R * (x + x0 + t * v)), o.phi0_r + 0.5 * R * R * t + o.arg_r - x * v - 0.5 * t * v * v);
    f.u[j] = z;
  }
  return f;
}

}  // namespace deltalab
