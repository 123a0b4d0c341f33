#pragma once

#include "deltalab/core_field.hpp"

namespace deltalab {

// Thin FFTW wrapper. Plans are built once per size with FFTW_ESTIMATE so the
// transform is bitwise reproducible run to run.
class Fft {
 public:
  explicit Fft(int n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  int size() const { return n_; }
  void forward(cvec& a) const;
  // scaled by 1/n
  void inverse(cvec& a) const;

  // shared plan for size n
  static const Fft& get(int n);

 private:
  int n_;
  void* fwd_;
  void* bwd_;
};

}  // namespace deltalab
