#pragma once

#include <complex>
#include <iosfwd>
#include <limits>
#include <vector>

namespace deltalab {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

// Uniform periodic grid x_j = -L + j*dx, j = 0..N-1. N is even so x_{N/2} = 0.
struct Grid {
  double L = 0.0;
  int N = 0;
  double dx = 0.0;

  double x(int j) const { return -L + j * dx; }
  int center() const { return N / 2; }
  // angular wavenumbers in FFT order
  std::vector<double> wavenumbers() const;
  bool operator==(const Grid& o) const { return L == o.L && N == o.N; }
};

Grid make_grid(double L, int N);

struct WaveField {
  Grid grid;
  cvec u;

  WaveField() = default;
  WaveField(const Grid& g, cvec samples);
  explicit WaveField(const Grid& g) : grid(g), u(g.N, cplx(0.0, 0.0)) {}

  const cplx& operator[](int j) const { return u[j]; }
  cplx at_origin() const { return u[grid.center()]; }
  bool finite() const;
};

// tail mass beyond 0.9L over total mass
double boundary_tail_fraction(const WaveField& f);
bool healthy(const WaveField& f, double tol = 1e-6);

constexpr double kInf = std::numeric_limits<double>::infinity();

struct NormSpec {
  double p = 2.0;
  double r = 2.0;
  bool admissible() const;
};

struct Trajectory {
  Grid grid;
  std::vector<double> times;
  std::vector<WaveField> fields;

  void push(double t, WaveField f);
  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  // index of the stored sample closest to t
  std::size_t nearest(double t) const;
};

enum class Side { left, right };

double spatial_norm(const WaveField& f, double r);
double mass(const WaveField& f);  // plain Riemann sum of |u|^2
double sobolev_h1_seminorm(const WaveField& f);
double spacetime_norm(const Trajectory& tr, const NormSpec& spec);
// node sitting exactly on b is split evenly between the two sides
double half_line_mass(const WaveField& f, Side side, double b);

// pointwise helpers
WaveField operator+(const WaveField& a, const WaveField& b);
WaveField operator-(const WaveField& a, const WaveField& b);
WaveField operator*(cplx s, const WaveField& a);
double l2_distance(const WaveField& a, const WaveField& b);

// f(x) -> f(x - s) by Fourier shift
WaveField spectral_shift(const WaveField& f, double s);
// f(x) -> f(-x) about the node at 0
WaveField reflect(const WaveField& f);

// text form: header "x,re,im,abs", one row per node, round-trip precision
void write_csv(std::ostream& os, const WaveField& f);
WaveField read_csv(std::istream& is);
// binary record: L (double), N (int64), N interleaved re/im doubles
void write_binary(std::ostream& os, const WaveField& f);
WaveField read_binary(std::istream& is);
void write_trajectory(std::ostream& os, const Trajectory& tr);
Trajectory read_trajectory(std::istream& is);

}  // namespace deltalab
