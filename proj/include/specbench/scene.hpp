#pragma once

#include <cstdint>
#include <vector>

#include "specbench/cube.hpp"

namespace specbench {

// Pure-pixel scene: data[x,y,b] = alpha[x,y] * library[labels[x,y]][b].
HsiCube synthesize_pure_scene(const LabelMap& labels, const std::vector<Spectrum>& library,
                              const Image& alpha);

// Linear mixing: data[x,y,b] = sum_k abund[x,y,k] * library[k][b].
HsiCube synthesize_mixed_scene(const AbundanceMap& abund, const std::vector<Spectrum>& library);

// Multiplies each voxel by the illuminant; the system response is applied at
// capture time, not here.
HsiCube apply_illumination(const HsiCube& reflectance, const IlluminantAndResponse& ir);

// Smooth surrogate material spectra: one dominant Gaussian per class, evenly
// staggered across the grid, plus seeded minor bumps and a small baseline.
// Stand-ins for unpublished lab materials; any smooth positive spectra work.
std::vector<Spectrum> surrogate_library(int num_classes, const WavelengthGrid& grid,
                                        uint64_t seed);

// Rectangular-tile label map (tiles of roughly patch x patch pixels, random
// class per tile, every class represented when the tile count allows).
LabelMap random_patch_labels(int width, int height, int num_classes, uint64_t seed,
                             int patch = 8);

// Per-pixel brightness in [lo, hi).
Image random_alpha(int width, int height, uint64_t seed, double lo = 0.5, double hi = 1.5);

// Per-pixel random convex weights scaled by a random fill factor in [0.5, 1].
AbundanceMap random_abundances(int width, int height, int num_classes, uint64_t seed);

// Per-voxel multiplicative jitter: v *= max(0, 1 + sigma * N(0,1)). Stands in
// for material and sensor variability; without it a pure scene collapses to
// one spectrum per class once sum-normalized.
HsiCube jitter_cube(const HsiCube& cube, double sigma, uint64_t seed);

// Flat scene lit in exactly one band (calibration source).
HsiCube single_band_scene(const WavelengthGrid& grid, int band, int width, int height,
                          double value = 1.0);

// Laser line at an arbitrary wavelength, energy split linearly between the
// two straddling bands.
HsiCube laser_scene(const WavelengthGrid& grid, double nm, int width, int height,
                    double value = 1.0);

}  // namespace specbench
