#pragma once

#include <string>
#include <utility>
#include <vector>

#include "specbench/cube.hpp"
#include "specbench/grid.hpp"

namespace specbench {

// Affine band-index -> wavelength map fitted from two laser captures.
struct WavelengthMapping {
  double slope = 0.0;      // nm per band index
  double intercept = 0.0;  // nm at index 0

  double wavelength_at(double index) const { return intercept + slope * index; }
  double index_of(double nm) const { return (nm - intercept) / slope; }
};

struct MtfCurve {
  std::vector<double> frequency;  // line pairs per pixel, ascending
  std::vector<double> contrast;   // [0, 1.05], non-increasing after smoothing
};

struct MtfResult {
  MtfCurve curve;
  double mtf30 = 0.0;  // highest frequency with contrast >= 0.30; 0 if never
};

struct CalibrationReport {
  std::vector<double> estimated_code;  // binary taps over the code support
  WavelengthMapping mapping;
  Image psf_estimate;
  MtfCurve mtf_raw, mtf_deconvolved;
  double mtf30_raw = 0.0, mtf30_deconvolved = 0.0;
};

// Threshold the dispersed-plane capture of a single-band flat scene; the
// result is the spectral code itself, cropped to its support.
std::vector<double> estimate_code(const Spectrum& capture, double threshold = 0.5);

// Wiener-deconvolves the capture by the code and returns the argmax band.
int locate_laser_band(const Spectrum& capture, const std::vector<double>& code,
                      double nsr = 1e-2);

// Two (known nm, capture) pairs -> affine fit through the located peaks.
WavelengthMapping calibrate_wavelengths(
    const std::vector<std::pair<double, Spectrum>>& captures, const std::vector<double>& code,
    double nsr = 1e-2);

// Background-subtract (border median), crop to the blob, center on the
// rounded centroid, normalize to sum 1.
Image estimate_psf(const Image& pinhole);

// Frequency-domain conj(K) / (|K|^2 + nsr) with the kernel wrapped about the
// origin. Circular boundary by construction.
Image wiener_deconvolve(const Image& img, const Image& kernel, double nsr);
std::vector<double> wiener_deconvolve_1d(const std::vector<double>& signal,
                                         const std::vector<double>& kernel, double nsr);

// Binary Siemens star, `spokes` full cycles per revolution, supersampled.
Image sector_star(int size, int spokes = 36, int supersample = 4);

// Ring lock-in at the spoke frequency; local frequency spokes / (2 pi r).
MtfResult measure_mtf(const Image& img, int spokes = 36);

// basepath.txt (key=value) + basepath_mtf_raw.csv / _mtf_deconvolved.csv /
// _psf.csv.
void save_calibration_report(const CalibrationReport& report, const std::string& basepath);

}  // namespace specbench
