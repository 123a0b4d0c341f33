#include <cmath>
#include <numbers>
#include <random>

#include "deltalab/scattering_analytics.hpp"
#include "doctest.h"

using namespace deltalab;

namespace {

// independent composite Simpson reference on [0, 12]
double phi0_simpson(double a, long n) {
  const double pi = std::numbers::pi;
  const double s2 = std::pow(std::sin(pi * a), 2), c2 = std::pow(2 * a - 1, 2);
  auto f = [&](double z) {
    const double ch = std::cosh(pi * z);
    return std::log1p(s2 / (ch * ch)) * z / (z * z + c2);
  };
  const double h = 12.0 / n;
  double s = f(0.0) + f(12.0);
  for (long i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("scattering coefficients by hand") {
  const auto c = scattering_coeffs(-3.0, 3.0);
  CHECK(c.t.real() == doctest::Approx(0.5));
  CHECK(c.t.imag() == doctest::Approx(0.5));
  CHECK(std::norm(c.t) == doctest::Approx(0.5));
  const auto z = scattering_coeffs(2.0, 0.0);
  CHECK(std::abs(z.t) < 1e-15);
  CHECK(std::abs(z.r + 1.0) < 1e-15);
  const auto f = scattering_coeffs(0.0, 1.0);
  CHECK(std::abs(f.t - 1.0) < 1e-15);
  CHECK(std::abs(f.r) < 1e-15);
  CHECK_THROWS(scattering_coeffs(0.0, 0.0));
}

TEST_CASE("unitarity and t = 1 + r over random strengths") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ex(-3.0, 3.0), sg(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double q = (sg(rng) < 0.5 ? -1 : 1) * std::pow(10.0, ex(rng));
    const double l = (sg(rng) < 0.5 ? -1 : 1) * std::pow(10.0, ex(rng));
    const auto c = scattering_coeffs(q, l);
    REQUIRE(std::abs(std::norm(c.t) + std::norm(c.r) - 1.0) <= 1e-12);
    REQUIRE(std::abs(c.t - c.r - 1.0) <= 1e-12);
  }
}

TEST_CASE("transmitted mass prediction") {
  CHECK(transmitted_mass_prediction(-3.0, 3.0) == 0.5);
  CHECK(transmitted_mass_prediction(-1.5, 3.0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(transmitted_mass_prediction(0.0, 5.0) == 1.0);
  CHECK_THROWS(transmitted_mass_prediction(1.0, 0.0));
  CHECK_THROWS(transmitted_mass_prediction(1.0, -2.0));
  for (double q : {-7.0, -0.3, 0.9, 4.0}) {
    for (double v : {0.5, 3.0, 11.0}) {
      CHECK(std::abs(transmitted_mass_prediction(q, v) + std::norm(scattering_coeffs(q, v).r) - 1.0) <= 1e-12);
      CHECK(transmitted_mass_prediction(q, v) == transmitted_mass_prediction(-q, v));
    }
  }
}

TEST_CASE("soliton samples") {
  const Grid g = make_grid(40.0, 4096);
  const WaveField s = soliton_field({1.0, 0.0, 0.0, 0.0}, 0.0, g);
  for (int j = 0; j < g.N; j += 97) CHECK(std::abs(s.u[j] - 1.0 / std::cosh(g.x(j))) < 1e-15);
  for (double l : {0.5, 1.0, 2.5}) CHECK(mass(soliton_field({l, 1.0, 0.0, 0.3}, 0.7, g)) == doctest::Approx(2 * l).epsilon(1e-10));
  const WaveField m = soliton_field({1.0, 3.0, -10.0, 0.0}, 2.0, g);
  int peak = 0;
  for (int j = 0; j < g.N; ++j)
    if (std::abs(m.u[j]) > std::abs(m.u[peak])) peak = j;
  CHECK(std::abs(g.x(peak) + 4.0) <= g.dx);
  // internal phase e^{i lambda^2 t/2} on the resting soliton
  const WaveField r = soliton_field({2.0, 0.0, 0.0, 0.0}, 0.5, g);
  CHECK(std::arg(r.at_origin()) == doctest::Approx(1.0));
  CHECK_THROWS(soliton_field({0.0, 1.0, 0.0, 0.0}, 0.0, g));
}

TEST_CASE("nonlinear bound state family") {
  const Grid g = make_grid(40.0, 8192);
  // the profile has a cusp at 0: Riemann error O(dx^2)
  CHECK(mass(bound_state_field(-1.0, 2.0, g)) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK_THROWS(bound_state_field(-1.0, 1.0, g));
  CHECK_THROWS(bound_state_field(1.0, 2.0, g));
  const double a = std::atanh(0.5);
  CHECK(std::abs(bound_state_field(-1.0, 2.0, g).at_origin()) == doctest::Approx(2.0 / std::cosh(a)).epsilon(1e-14));
  const double q = -1.0, l = 1.001;
  CHECK(mass(bound_state_field(q, l, g)) == doctest::Approx(2 * (l + q)).epsilon(1e-3));
  CHECK(mass(bound_state_field(q, l, g)) < 3e-3);
}

TEST_CASE("linear eigenstate") {
  const Grid g = make_grid(40.0, 8192);
  for (double q : {-0.5, -2.0, -4.0}) {
    const WaveField e = linear_eigenstate(q, g);
    CHECK(std::abs(spatial_norm(e, 2.0) - 1.0) < 1e-3);
    CHECK(e.at_origin().real() == doctest::Approx(std::sqrt(-q)).epsilon(1e-15));
  }
  CHECK_THROWS(linear_eigenstate(1.0, g));
  CHECK_THROWS(linear_eigenstate(0.0, g));
}

TEST_CASE("phi0 against frozen high-precision values") {
  // 30-digit reference quadrature
  CHECK(std::abs(phi0(0.8) - 0.0452781834653224412) < 1e-10);
  CHECK(std::abs(phi0(0.25) - 0.0835185362903405127) < 1e-10);
  CHECK(std::abs(phi0(0.9) - 0.00829847187988664501) < 1e-10);
  CHECK(std::abs(phi0(1.0 / std::sqrt(2.0)) - 0.134246172193207405) < 1e-10);
  CHECK(std::abs(phi0(0.6) - 0.425297904919952282) < 1e-10);
  CHECK(std::abs(phi0(0.55) - phi0(0.45)) < 1e-12);
}

TEST_CASE("phi0 endpoints, Simpson oracle and threshold") {
  CHECK(std::abs(phi0(0.0)) <= 1e-8);
  CHECK(std::abs(phi0(1.0)) <= 1e-8);
  CHECK(std::abs(phi0(0.8) - phi0_simpson(0.8, 1000000)) <= 1e-6);
  CHECK_THROWS(phi0(0.5));
  CHECK_THROWS(phi0(-0.1));
  CHECK_THROWS(phi0(1.1));
}

TEST_CASE("phi0 continuity away from 1/2") {
  for (double a0 : {0.1, 0.3, 0.7, 0.95}) {
    double d_coarse = std::abs(phi0(a0 + 1e-2) - phi0(a0));
    double d_fine = std::abs(phi0(a0 + 1e-4) - phi0(a0));
    CHECK(d_fine < d_coarse);
    CHECK(d_fine < 1e-3);
  }
}

TEST_CASE("outgoing parameters") {
  // |t| = 0.9 needs q^2 = v^2 (1/0.81 - 1)
  const double v = 3.0, q = -v * std::sqrt(1 / 0.81 - 1);
  const auto o = outgoing_params(q, v);
  CHECK(o.T_tilde == doctest::Approx(0.8));
  CHECK(o.phi0_t == doctest::Approx(phi0(0.9)));
  const double q4 = -v * std::sqrt(1 / 0.16 - 1);
  CHECK(outgoing_params(q4, v).T_tilde == 0.0);
  const auto f = outgoing_params(0.0, 2.0);
  CHECK(f.T_tilde == 1.0);
  CHECK(f.R_tilde == 0.0);
  const auto s = outgoing_params(-3.0, 3.0);
  CHECK(s.T_tilde == doctest::Approx(std::sqrt(2.0) - 1));
  CHECK(s.R_tilde == doctest::Approx(s.T_tilde));
  CHECK(s.arg_t == doctest::Approx(std::numbers::pi / 4));
  // |t| = 1/2 is the threshold case
  CHECK_THROWS(outgoing_params(-3.0 * std::sqrt(3.0), 3.0));
}

TEST_CASE("long-time profile") {
  const Grid g = make_grid(60.0, 8192);
  const WaveField p0 = theorem2_profile(0.0, 3.0, -10.0, 3.7, 5.0, g);
  const WaveField s = soliton_field({1.0, 3.0, -10.0, 0.0}, 5.0, g);
  // same modulus, phase differs by a constant
  const cplx rel = p0.u[g.N / 2 + 100] / s.u[g.N / 2 + 100];
  CHECK(std::abs(rel) == doctest::Approx(1.0));
  CHECK(l2_distance(p0, rel * s) < 1e-12);

  // pieces at +-26, far enough apart that the tails do not interfere
  const WaveField p = theorem2_profile(-3.0, 3.0, -10.0, 3.7, 12.0, g);
  const auto o = outgoing_params(-3.0, 3.0);
  CHECK(mass(p) == doctest::Approx(2 * o.T_tilde + 2 * o.R_tilde).epsilon(1e-8));
  CHECK(half_line_mass(p, Side::right, 0.0) == doctest::Approx(half_line_mass(p, Side::left, 0.0)).epsilon(1e-8));
  CHECK_THROWS(theorem2_profile(-3.0, 3.0, -10.0, 3.7, 3.0, g));
}
