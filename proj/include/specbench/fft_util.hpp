#pragma once

#include <complex>
#include <vector>

#include "specbench/cube.hpp"

namespace specbench {

// Thin FFTW wrappers. Row-major, unnormalized forward; inverse divides by N.
std::vector<std::complex<double>> fft_1d(const std::vector<double>& x);
std::vector<double> ifft_1d_real(const std::vector<std::complex<double>>& f);

std::vector<std::complex<double>> fft_2d(const Image& img);
Image ifft_2d_real(const std::vector<std::complex<double>>& f, int width, int height);

}  // namespace specbench
