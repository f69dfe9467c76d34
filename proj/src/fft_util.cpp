#include "specbench/fft_util.hpp"

#include <fftw3.h>

#include <mutex>

#include "specbench/common.hpp"

namespace specbench {
namespace {

// FFTW planning is not thread-safe; execution of a plan on its own buffers is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

struct PlanBuffers {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan plan = nullptr;

  PlanBuffers(int n0, int n1, int sign) {
    const size_t n = size_t(n0) * (n1 > 0 ? size_t(n1) : 1);
    in = fftw_alloc_complex(n);
    out = fftw_alloc_complex(n);
    if (!in || !out) {
      release();
      throw IoError("FFT buffer allocation failed");
    }
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = n1 > 0 ? fftw_plan_dft_2d(n0, n1, in, out, sign, FFTW_ESTIMATE)
                  : fftw_plan_dft_1d(n0, in, out, sign, FFTW_ESTIMATE);
    if (!plan) {
      release();
      throw IoError("FFT planning failed");
    }
  }

  ~PlanBuffers() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    release();
  }

  void release() {
    if (plan) fftw_destroy_plan(plan);
    if (in) fftw_free(in);
    if (out) fftw_free(out);
    plan = nullptr;
    in = nullptr;
    out = nullptr;
  }
};

}  // namespace

std::vector<std::complex<double>> fft_1d(const std::vector<double>& x) {
  if (x.empty()) throw ValidationError("empty FFT input");
  PlanBuffers p(int(x.size()), 0, FFTW_FORWARD);
  for (size_t i = 0; i < x.size(); ++i) {
    p.in[i][0] = x[i];
    p.in[i][1] = 0.0;
  }
  fftw_execute(p.plan);
  std::vector<std::complex<double>> f(x.size());
  for (size_t i = 0; i < x.size(); ++i) f[i] = {p.out[i][0], p.out[i][1]};
  return f;
}

std::vector<double> ifft_1d_real(const std::vector<std::complex<double>>& f) {
  if (f.empty()) throw ValidationError("empty FFT input");
  PlanBuffers p(int(f.size()), 0, FFTW_BACKWARD);
  for (size_t i = 0; i < f.size(); ++i) {
    p.in[i][0] = f[i].real();
    p.in[i][1] = f[i].imag();
  }
  fftw_execute(p.plan);
  std::vector<double> x(f.size());
  for (size_t i = 0; i < f.size(); ++i) x[i] = p.out[i][0] / double(f.size());
  return x;
}

std::vector<std::complex<double>> fft_2d(const Image& img) {
  if (img.values.empty()) throw ValidationError("empty FFT input");
  PlanBuffers p(img.height, img.width, FFTW_FORWARD);
  for (size_t i = 0; i < img.values.size(); ++i) {
    p.in[i][0] = img.values[i];
    p.in[i][1] = 0.0;
  }
  fftw_execute(p.plan);
  std::vector<std::complex<double>> f(img.values.size());
  for (size_t i = 0; i < f.size(); ++i) f[i] = {p.out[i][0], p.out[i][1]};
  return f;
}

Image ifft_2d_real(const std::vector<std::complex<double>>& f, int width, int height) {
  if (f.size() != size_t(width) * size_t(height))
    throw ValidationError("FFT size does not match dimensions");
  PlanBuffers p(height, width, FFTW_BACKWARD);
  for (size_t i = 0; i < f.size(); ++i) {
    p.in[i][0] = f[i].real();
    p.in[i][1] = f[i].imag();
  }
  fftw_execute(p.plan);
  Image img(width, height);
  for (size_t i = 0; i < f.size(); ++i) img.values[i] = p.out[i][0] / double(f.size());
  return img;
}

}  // namespace specbench
