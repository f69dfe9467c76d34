#pragma once

#include <vector>

#include "specbench/common.hpp"

namespace specbench {

// Uniform wavelength grid in nanometers.
//
// centers[i] = lambda_min + i * delta with delta = (lambda_max - lambda_min) / (bands - 1).
// A single-band grid requires lambda_min == lambda_max and has delta == 0.
struct WavelengthGrid {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int bands = 0;
  std::vector<double> centers;
  double delta = 0.0;

  WavelengthGrid() = default;
  WavelengthGrid(double lmin, double lmax, int nbands);

  // Integration weight for band sums. Unit weight for a single-band grid.
  double integration_weight() const { return bands > 1 ? delta : 1.0; }

  // Index of the grid band closest to the given wavelength.
  int nearest_band(double lambda_nm) const;

  bool operator==(const WavelengthGrid& o) const {
    return bands == o.bands && lambda_min == o.lambda_min && lambda_max == o.lambda_max;
  }
  bool operator!=(const WavelengthGrid& o) const { return !(*this == o); }
};

// Sampled non-negative spectral profile on a wavelength grid.
struct Spectrum {
  WavelengthGrid grid;
  std::vector<double> values;

  Spectrum() = default;
  Spectrum(const WavelengthGrid& g, std::vector<double> v);

  static Spectrum constant(const WavelengthGrid& g, double value);

  double& operator[](int b) { return values[static_cast<std::size_t>(b)]; }
  double operator[](int b) const { return values[static_cast<std::size_t>(b)]; }
  int bands() const { return grid.bands; }
};

// Linear interpolation of `s` at the centers of `target`.
// The target range must lie within the source range.
Spectrum resample_spectrum(const Spectrum& s, const WavelengthGrid& target);

// Default instrument grid: 600-900 nm, 100 bands (about 3 nm per band).
WavelengthGrid default_grid();

void validate_spectrum(const Spectrum& s);

}  // namespace specbench
