#include "deltalab/core_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <numbers>
#include <stdexcept>

#include "deltalab/fft.hpp"

namespace deltalab {

Grid make_grid(double L, int N) {
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("grid half width must be positive");
  if (N < 2 || (N & (N - 1)) != 0) throw std::invalid_argument("grid size must be an even power of two");
  Grid g;
  g.L = L;
  g.N = N;
  g.dx = 2.0 * L / N;
  return g;
}

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> k(N);
  const double base = 2.0 * std::numbers::pi / (N * dx);
  for (int j = 0; j < N; ++j) k[j] = base * (j < N / 2 ? j : j - N);
  return k;
}

WaveField::WaveField(const Grid& g, cvec samples) : grid(g), u(std::move(samples)) {
  if (static_cast<int>(u.size()) != g.N) throw std::invalid_argument("sample count does not match grid");
}

bool WaveField::finite() const {
  return std::all_of(u.begin(), u.end(), [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double boundary_tail_fraction(const WaveField& f) {
  double tail = 0.0, total = 0.0;
  const double cut = 0.9 * f.grid.L;
  for (int j = 0; j < f.grid.N; ++j) {
    const double a = std::norm(f.u[j]);
    total += a;
    if (std::abs(f.grid.x(j)) > cut) tail += a;
  }
  return total > 0.0 ? tail / total : 0.0;
}

bool healthy(const WaveField& f, double tol) { return f.finite() && boundary_tail_fraction(f) <= tol; }

bool NormSpec::admissible() const {
  const double a = std::isinf(p) ? 0.0 : 2.0 / p;
  const double b = std::isinf(r) ? 0.0 : 1.0 / r;
  return std::abs(a + b - 0.5) < 1e-12;
}

void Trajectory::push(double t, WaveField f) {
  if (fields.empty()) {
    grid = f.grid;
  } else {
    if (!(f.grid == grid)) throw std::invalid_argument("trajectory fields must share one grid");
    if (!(t > times.back())) throw std::invalid_argument("trajectory times must increase");
  }
  times.push_back(t);
  fields.push_back(std::move(f));
}

std::size_t Trajectory::nearest(double t) const {
  if (times.empty()) throw std::out_of_range("empty trajectory");
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end()) return times.size() - 1;
  std::size_t i = it - times.begin();
  if (i > 0 && std::abs(times[i - 1] - t) <= std::abs(times[i] - t)) --i;
  return i;
}

double spatial_norm(const WaveField& f, double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("spatial exponent must be >= 1");
  if (std::isinf(r)) {
    double m = 0.0;
    for (const auto& z : f.u) m = std::max(m, std::abs(z));
    return m;
  }
  double s = 0.0;
  for (const auto& z : f.u) s += std::pow(std::abs(z), r);
  return std::pow(s * f.grid.dx, 1.0 / r);
}

double mass(const WaveField& f) {
  double s = 0.0;
  for (const auto& z : f.u) s += std::norm(z);
  return s * f.grid.dx;
}

double sobolev_h1_seminorm(const WaveField& f) {
  const auto k = f.grid.wavenumbers();
  cvec a = f.u;
  const Fft& fft = Fft::get(f.grid.N);
  fft.forward(a);
  double s = 0.0;
  for (int j = 0; j < f.grid.N; ++j) s += k[j] * k[j] * std::norm(a[j]);
  // Parseval: sum |f'_j|^2 = (1/N) sum |k F|^2
  return std::sqrt(s * f.grid.dx / f.grid.N);
}

double spacetime_norm(const Trajectory& tr, const NormSpec& spec) {
  if (tr.empty()) throw std::invalid_argument("empty trajectory");
  if (!(spec.p >= 1.0)) throw std::invalid_argument("temporal exponent must be >= 1");
  std::vector<double> n(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) n[i] = spatial_norm(tr.fields[i], spec.r);
  if (std::isinf(spec.p)) return *std::max_element(n.begin(), n.end());
  if (tr.size() < 2) throw std::invalid_argument("finite temporal exponent needs at least two samples");
  double s = 0.0;
  for (std::size_t i = 1; i < tr.size(); ++i)
    s += 0.5 * (std::pow(n[i - 1], spec.p) + std::pow(n[i], spec.p)) * (tr.times[i] - tr.times[i - 1]);
  return std::pow(s, 1.0 / spec.p);
}

double half_line_mass(const WaveField& f, Side side, double b) {
  double s = 0.0;
  for (int j = 0; j < f.grid.N; ++j) {
    const double x = f.grid.x(j);
    const double a = std::norm(f.u[j]);
    if (x == b)
      s += 0.5 * a;
    else if ((side == Side::right) == (x > b))
      s += a;
  }
  return s * f.grid.dx;
}

WaveField operator+(const WaveField& a, const WaveField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("grid mismatch");
  WaveField r(a.grid);
  for (int j = 0; j < a.grid.N; ++j) r.u[j] = a.u[j] + b.u[j];
  return r;
}

WaveField operator-(const WaveField& a, const WaveField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("grid mismatch");
  WaveField r(a.grid);
  for (int j = 0; j < a.grid.N; ++j) r.u[j] = a.u[j] - b.u[j];
  return r;
}

WaveField operator*(cplx s, const WaveField& a) {
  WaveField r(a.grid);
  for (int j = 0; j < a.grid.N; ++j) r.u[j] = s * a.u[j];
  return r;
}

double l2_distance(const WaveField& a, const WaveField& b) { return spatial_norm(a - b, 2.0); }

WaveField spectral_shift(const WaveField& f, double s) {
  const auto k = f.grid.wavenumbers();
  cvec a = f.u;
  const Fft& fft = Fft::get(f.grid.N);
  fft.forward(a);
  for (int j = 0; j < f.grid.N; ++j) {
    // Nyquist mode carries no well-defined shift direction
    if (j == f.grid.N / 2)
      a[j] *= std::cos(k[j] * s);
    else
      a[j] *= std::polar(1.0, -k[j] * s);
  }
  fft.inverse(a);
  return WaveField(f.grid, std::move(a));
}

WaveField reflect(const WaveField& f) {
  const int N = f.grid.N;
  WaveField r(f.grid);
  // x_j -> -x_j maps index j to N - j (mod N)
  for (int j = 0; j < N; ++j) r.u[j] = f.u[(N - j) % N];
  return r;
}

void write_csv(std::ostream& os, const WaveField& f) {
  os << "x,re,im,abs\n";
  char buf[128];
  for (int j = 0; j < f.grid.N; ++j) {
    const cplx z = f.u[j];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", f.grid.x(j), z.real(), z.imag(), std::abs(z));
    os << buf;
  }
}

WaveField read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,re,im,abs", 0) != 0) throw std::runtime_error("snapshot csv: bad header");
  std::vector<double> xs;
  cvec u;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double x, re, im, a;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &re, &im, &a) != 4)
      throw std::runtime_error("snapshot csv: bad row '" + line + "'");
    xs.push_back(x);
    u.emplace_back(re, im);
  }
  if (xs.size() < 2) throw std::runtime_error("snapshot csv: too few rows");
  const Grid g = make_grid(-xs.front(), static_cast<int>(xs.size()));
  return WaveField(g, std::move(u));
}

namespace {

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw std::runtime_error("binary field: truncated");
  return v;
}

constexpr char kTrajMagic[8] = {'D', 'L', 'T', 'R', 'A', 'J', '1', '\n'};

}  // namespace

void write_binary(std::ostream& os, const WaveField& f) {
  put(os, f.grid.L);
  put(os, static_cast<std::int64_t>(f.grid.N));
  os.write(reinterpret_cast<const char*>(f.u.data()), static_cast<std::streamsize>(f.u.size() * sizeof(cplx)));
}

WaveField read_binary(std::istream& is) {
  const double L = get<double>(is);
  const auto N = get<std::int64_t>(is);
  if (N <= 0 || N > (1 << 26)) throw std::runtime_error("binary field: bad size");
  WaveField f(make_grid(L, static_cast<int>(N)));
  if (!is.read(reinterpret_cast<char*>(f.u.data()), static_cast<std::streamsize>(f.u.size() * sizeof(cplx))))
    throw std::runtime_error("binary field: truncated");
  return f;
}

void write_trajectory(std::ostream& os, const Trajectory& tr) {
  os.write(kTrajMagic, sizeof kTrajMagic);
  put(os, static_cast<std::int64_t>(tr.size()));
  for (std::size_t i = 0; i < tr.size(); ++i) {
    put(os, tr.times[i]);
    write_binary(os, tr.fields[i]);
  }
}

Trajectory read_trajectory(std::istream& is) {
  char magic[sizeof kTrajMagic];
  if (!is.read(magic, sizeof magic) || !std::equal(magic, magic + sizeof magic, kTrajMagic))
    throw std::runtime_error("not a trajectory file");
  const auto n = get<std::int64_t>(is);
  Trajectory tr;
  for (std::int64_t i = 0; i < n; ++i) {
    const double t = get<double>(is);
    tr.push(t, read_binary(is));
  }
  return tr;
}

}  // namespace deltalab
