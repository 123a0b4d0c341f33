#include "deltalab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace deltalab {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(int n) : n_(n) {
  if (n <= 0) throw std::invalid_argument("fft size must be positive");
  std::lock_guard<std::mutex> lock(planner_mutex());
  cvec tmp(n);
  auto* p = reinterpret_cast<fftw_complex*>(tmp.data());
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fwd_ = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, flags);
  bwd_ = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, flags);
  if (!fwd_ || !bwd_) throw std::runtime_error("fftw planning failed");
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft::forward(cvec& a) const {
  if (static_cast<int>(a.size()) != n_) throw std::invalid_argument("fft size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

void Fft::inverse(cvec& a) const {
  if (static_cast<int>(a.size()) != n_) throw std::invalid_argument("fft size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), p, p);
  const double s = 1.0 / n_;
  for (auto& v : a) v *= s;
}

const Fft& Fft::get(int n) {
  static std::mutex m;
  static std::map<int, std::unique_ptr<Fft>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<Fft>(n)).first;
  return *it->second;
}

}  // namespace deltalab
