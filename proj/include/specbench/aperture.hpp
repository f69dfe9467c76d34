#pragma once

#include <vector>

#include "specbench/cube.hpp"

namespace specbench {

// Forward model of the coded aperture. The mask lives in the plane where the
// grating has dispersed the pupil, so its column axis doubles as a wavelength
// axis (lambda = x / (groove_density * focal_length)) and its squared Fourier
// magnitude gives the per-band spatial PSF on the image plane.
struct CodedApertureModel {
  std::vector<std::vector<bool>> mask;  // [row][col], true = open
  double pitch_mm = 0.0;                // mask cell pitch
  double focal_mm = 0.0;
  double grooves_per_mm = 0.0;
  WavelengthGrid grid;

  // Centered odd-length spectral kernel (band units), sums to 1.
  std::vector<double> k_spec;
  // One centered odd-sized PSF per band, each sums to 1; support grows with
  // wavelength.
  std::vector<Image> psf;

  CodedApertureModel() : grid(600.0, 900.0, 100) {}
};

struct ApertureConfig {
  double pitch_mm = 0.05;
  double focal_mm = 100.0;
  double grooves_per_mm = 300.0;
};

CodedApertureModel build_aperture_model(const std::vector<std::vector<bool>>& mask,
                                        const ApertureConfig& cfg, const WavelengthGrid& grid);

// Delta kernels everywhere: the ideal (uncoded, unblurred) system.
CodedApertureModel identity_aperture(const WavelengthGrid& grid);

// Spatial convolution of every band with its PSF, then 1D convolution along
// the band axis with k_spec. Zero padding outside the field on both.
HsiCube apply_coded_blur(const HsiCube& cube, const CodedApertureModel& ap);

// Shipped pseudo-random mask, chosen from seeded candidates by invertibility
// margin of the collapsed column profile.
std::vector<std::vector<bool>> default_aperture_mask();

// min |DFT| / |DFT at DC| of the column-collapsed profile; how safely the
// spectral code can be deconvolved.
double aperture_invertibility_margin(const std::vector<std::vector<bool>>& mask);

// Shared kernel conventions (centered taps, offset p - floor((P-1)/2)).
std::vector<double> convolve_1d(const std::vector<double>& signal,
                                const std::vector<double>& kernel);
Image convolve_2d(const Image& img, const Image& kernel);

}  // namespace specbench
