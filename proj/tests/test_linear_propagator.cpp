#include <cmath>
#include <random>

#include "deltalab/linear_propagator.hpp"
#include "deltalab/nonlinear_solver.hpp"
#include "deltalab/scattering_analytics.hpp"
#include "doctest.h"

using namespace deltalab;

namespace {

WaveField packet(const Grid& g, double x0, double v, double w = 1.0) {
  WaveField f(g);
  for (int j = 0; j < g.N; ++j) {
    const double y = (g.x(j) - x0) / w;
    f.u[j] = std::polar(std::exp(-0.5 * y * y), v * g.x(j));
  }
  return f;
}

WaveField random_packet(const Grid& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> pos(-12.0, 12.0), vel(-5.0, 5.0), wid(0.6, 2.0), ph(0.0, 6.28);
  const double x0 = pos(rng), v = vel(rng), w = wid(rng);
  return std::polar(1.0, ph(rng)) * packet(g, x0, v, w);
}

}  // namespace

TEST_CASE("plan tables") {
  const Grid g = make_grid(40.0, 1024);
  const PropagatorPlan p(g, -2.0);
  for (int j = 0; j < g.N; ++j) {
    CHECK(std::abs(std::norm(p.t_table()[j]) + std::norm(p.r_table()[j]) - 1.0) < 1e-12);
  }
  CHECK(p.weights()[g.center()] == doctest::Approx(1.0 + std::tanh(-g.dx)));
}

TEST_CASE("free propagation") {
  const Grid g = make_grid(40.0, 4096);
  const WaveField u = packet(g, 0.0, 0.0);
  CHECK(l2_distance(free_propagate(u, 0.0), u) < 1e-14);
  const WaveField a = free_propagate(packet(g, -3.0, 2.0, 0.7), 2.3);
  CHECK(std::abs(spatial_norm(a, 2.0) - spatial_norm(packet(g, -3.0, 2.0, 0.7), 2.0)) < 1e-12);
  // e^{-x^2/2} -> (1+it)^{-1/2} e^{-x^2/(2(1+it))}
  const WaveField b = free_propagate(u, 1.0);
  double err = 0.0;
  for (int j = 0; j < g.N; ++j) {
    const cplx s(1.0, 1.0);
    const double x = g.x(j);
    err = std::max(err, std::abs(b.u[j] - std::exp(-x * x / (2.0 * s)) / std::sqrt(s)));
  }
  CHECK(err < 1e-8);
}

TEST_CASE("eigenstate projection") {
  const Grid g = make_grid(40.0, 4096);
  const double q = -2.0;
  const WaveField e = linear_eigenstate(q, g);
  const auto pe = project_eigenstate(q, e);
  CHECK(std::abs(pe.coefficient - 1.0) < 1e-10);
  CHECK(l2_distance(pe.Pu, e) < 1e-10);
  WaveField odd(g);
  for (int j = 0; j < g.N; ++j) odd.u[j] = g.x(j) * std::exp(-g.x(j) * g.x(j));
  CHECK(std::abs(project_eigenstate(q, odd).coefficient) < 1e-14);
  std::mt19937 rng(3);
  for (int k = 0; k < 5; ++k) {
    const WaveField u = random_packet(g, rng);
    CHECK(spatial_norm(project_eigenstate(q, u).Pu, 2.0) <= spatial_norm(u, 2.0));
  }
  const auto z = project_eigenstate(1.0, e);
  CHECK(z.coefficient == cplx(0.0));
  CHECK(spatial_norm(z.Pu, 2.0) == 0.0);
}

TEST_CASE("delta propagation basics") {
  const Grid g = make_grid(40.0, 4096);
  const WaveField u = packet(g, -10.0, 4.0);
  CHECK(l2_distance(delta_propagate(0.0, u, 1.4), free_propagate(u, 1.4)) <= 1e-12);
  const WaveField e = linear_eigenstate(-2.0, g);
  CHECK(l2_distance(delta_propagate(-2.0, e, 1.0), std::polar(1.0, 2.0) * e) < 1e-3);
  CHECK(l2_distance(delta_propagate(-2.0, u, 0.0), u) < 1e-13);
}

TEST_CASE("eigenstate stationarity q=-1,-2,-4 at N=8192") {
  const Grid g = make_grid(40.0, 8192);
  for (double q : {-1.0, -2.0, -4.0}) {
    const WaveField e = linear_eigenstate(q, g);
    CHECK(l2_distance(delta_propagate(q, e, 1.0), std::polar(1.0, 0.5 * q * q) * e) < 1e-3);
  }
}

TEST_CASE("unitarity, group law and reflection symmetry") {
  const Grid g = make_grid(40.0, 4096);
  std::mt19937 rng(17);
  for (double q : {-3.0, -0.7, 1.5, 4.0}) {
    const PropagatorPlan plan(g, q);
    for (int k = 0; k < 3; ++k) {
      const WaveField u = random_packet(g, rng);
      const WaveField a = plan.propagate(u, 1.3);
      // exact in the cusp-weighted norm
      CHECK(std::abs(plan.weighted_mass(a) - plan.weighted_mass(u)) < 1e-12 * plan.weighted_mass(u));
      // plain grid L2 differs only by the weight at the node x=0
      CHECK(std::abs(spatial_norm(a, 2.0) - spatial_norm(u, 2.0)) < 1e-4);
      CHECK(l2_distance(plan.propagate(plan.propagate(u, 0.4), 0.9), a) < 1e-6);
      CHECK(l2_distance(reflect(a), plan.propagate(reflect(u), 1.3)) < 1e-8);
    }
  }
}

TEST_CASE("plain L2 norm after the packet has left the origin") {
  const Grid g = make_grid(40.0, 4096);
  const WaveField u = packet(g, -10.0, 4.0);
  for (double q : {-2.0, 3.0}) CHECK(std::abs(spatial_norm(delta_propagate(q, u, 5.0), 2.0) - spatial_norm(u, 2.0)) < 1e-6);
}

TEST_CASE("Crank-Nicolson oracle, q=-2 boosted Gaussian") {
  const Grid g = make_grid(40.0, 4096);
  const WaveField u = packet(g, -10.0, 4.0);
  const WaveField cn = cn_reference_propagate(-2.0, u, 2.0, 5e-4, 16);
  CHECK(l2_distance(delta_propagate(-2.0, u, 2.0), cn) < 1e-3);
}

TEST_CASE("oracle agreement on random packets") {
  const Grid g = make_grid(40.0, 2048);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> pos(-12.0, -6.0), vel(1.0, 3.0), qd(-3.0, 3.0);
  for (int k = 0; k < 10; ++k) {
    const double q = qd(rng), t = 2.0;
    WaveField u = packet(g, pos(rng), vel(rng));
    if (k % 2) {
      u = soliton_field({1.0, vel(rng), pos(rng), 0.0}, 0.0, g);
    }
    const WaveField cn = cn_reference_propagate(q, u, t, 5e-4, 8);
    INFO("q=" << q);
    CHECK(l2_distance(delta_propagate(q, u, t), cn) < 1e-3);
  }
}

TEST_CASE("dispersive part") {
  const Grid g = make_grid(40.0, 4096);
  const WaveField e = linear_eigenstate(-2.0, g);
  CHECK(spatial_norm(dispersive_propagate(-2.0, e, 0.8), 2.0) < 1e-3);
  std::mt19937 rng(23);
  for (int k = 0; k < 4; ++k) {
    const WaveField u = random_packet(g, rng);
    CHECK(std::abs(project_eigenstate(-2.0, dispersive_propagate(-2.0, u, 0.9)).coefficient) < 1e-6);
  }
  const WaveField u = packet(g, 3.0, -1.0);
  CHECK(l2_distance(dispersive_propagate(0.0, u, 1.0), free_propagate(u, 1.0)) < 1e-12);
}

TEST_CASE("Fourier-multiplier form agrees before the packet reaches the delta") {
  const Grid g = make_grid(40.0, 4096);
  const WaveField u = packet(g, -12.0, 3.0);
  for (double q : {-2.0, 2.0}) {
    CHECK(l2_distance(multiplier_propagate(q, u, 1.0), delta_propagate(q, u, 1.0)) < 1e-6);
  }
  CHECK(l2_distance(multiplier_propagate(0.0, u, 1.0), free_propagate(u, 1.0)) < 1e-12);
}

TEST_CASE("high-velocity splitting") {
  const Grid g = make_grid(40.0, 4096);
  WaveField phi(g);
  for (int j = 0; j < g.N; ++j) phi.u[j] = 1.0 / std::cosh(g.x(j));
  // q = 0: free flow of the boosted profile
  WaveField boosted = spectral_shift(phi, -2.0);
  for (int j = 0; j < g.N; ++j) boosted.u[j] *= std::polar(1.0, 5.0 * g.x(j));
  CHECK(l2_distance(highvelocity_split(0.0, 5.0, phi, -2.0, 0.8), free_propagate(boosted, 0.8)) < 1e-12);
  // |q| = v: equal weights
  const auto sc = scattering_coeffs(-4.0, 4.0);
  CHECK(std::abs(std::abs(sc.t) - std::abs(sc.r)) < 1e-15);
  bool ok = false;
  highvelocity_split(-4.0, 4.0, phi, -1.0, 0.9, &ok);
  CHECK(ok);
  highvelocity_split(-4.0, 4.0, phi, -3.0, 0.9, &ok);
  CHECK_FALSE(ok);
  CHECK_THROWS(highvelocity_split(-4.0, 0.0, phi, -1.0, 0.9));
}

TEST_CASE("high-velocity splitting error shrinks when v doubles") {
  const Grid g = make_grid(40.0, 16384);
  WaveField phi(g);
  for (int j = 0; j < g.N; ++j) phi.u[j] = 1.0 / std::cosh(g.x(j));
  double err[2];
  for (int k = 0; k < 2; ++k) {
    const double v = k == 0 ? 5.0 : 10.0, x0 = -std::pow(v, 0.2);
    WaveField u0 = spectral_shift(phi, x0);
    for (int j = 0; j < g.N; ++j) u0.u[j] *= std::polar(1.0, v * g.x(j));
    err[k] = l2_distance(highvelocity_split(-2.0, v, phi, x0, 1.0), delta_propagate(-2.0, u0, 1.0));
  }
  CHECK(err[1] < err[0]);
  CHECK(err[1] / err[0] < 0.8);
}
