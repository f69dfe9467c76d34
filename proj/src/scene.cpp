#include "specbench/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "specbench/common.hpp"
#include "specbench/threads.hpp"

namespace specbench {
namespace {

void check_library(const std::vector<Spectrum>& library, int expected_k) {
  if (int(library.size()) != expected_k)
    throw ValidationError("library size " + std::to_string(library.size()) +
                          " does not match class count " + std::to_string(expected_k));
  for (const auto& s : library)
    if (!(s.grid == library[0].grid)) throw ValidationError("library spectra on mixed grids");
}

}  // namespace

HsiCube synthesize_pure_scene(const LabelMap& labels, const std::vector<Spectrum>& library,
                              const Image& alpha) {
  validate_labels(labels, false);
  check_library(library, labels.num_classes);
  if (alpha.width != labels.width || alpha.height != labels.height)
    throw ValidationError("alpha dimensions do not match labels");
  for (double a : alpha.values)
    if (!(a > 0.0) || !is_finite(a)) throw ValidationError("alpha must be positive and finite");

  const int w = labels.width, h = labels.height;
  HsiCube cube(w, h, library[0].grid);
  const int b = cube.grid.bands;
  parallel_for(size_t(h), [&](size_t y0, size_t y1) {
    for (size_t y = y0; y < y1; ++y)
      for (int x = 0; x < w; ++x) {
        const Spectrum& s = library[labels.labels[y * w + x]];
        const double a = alpha.values[y * w + x];
        for (int i = 0; i < b; ++i) cube.data[(size_t(i) * h + y) * w + x] = a * s.values[i];
      }
  });
  return cube;
}

HsiCube synthesize_mixed_scene(const AbundanceMap& abund, const std::vector<Spectrum>& library) {
  validate_abundances(abund);
  check_library(library, abund.num_classes);

  const int w = abund.width, h = abund.height, k = abund.num_classes;
  HsiCube cube(w, h, library[0].grid);
  const int b = cube.grid.bands;
  parallel_for(size_t(h), [&](size_t y0, size_t y1) {
    for (size_t y = y0; y < y1; ++y)
      for (int x = 0; x < w; ++x)
        for (int i = 0; i < b; ++i) {
          double v = 0.0;
          for (int c = 0; c < k; ++c)
            v += abund.values[(size_t(c) * h + y) * w + x] * library[c].values[i];
          cube.data[(size_t(i) * h + y) * w + x] = v;
        }
  });
  return cube;
}

HsiCube apply_illumination(const HsiCube& reflectance, const IlluminantAndResponse& ir) {
  if (!(ir.illuminant.grid == reflectance.grid))
    throw ValidationError("illuminant grid does not match cube grid");
  HsiCube out = reflectance;
  const size_t plane = size_t(out.width) * out.height;
  for (int i = 0; i < out.grid.bands; ++i) {
    const double l = ir.illuminant.values[i];
    for (size_t p = 0; p < plane; ++p) out.data[size_t(i) * plane + p] *= l;
  }
  return out;
}

std::vector<Spectrum> surrogate_library(int num_classes, const WavelengthGrid& grid,
                                        uint64_t seed) {
  if (num_classes <= 0) throw ValidationError("class count must be positive");
  const double range = std::max(grid.lambda_max - grid.lambda_min, 1.0);
  std::vector<Spectrum> out;
  out.reserve(num_classes);
  for (int k = 0; k < num_classes; ++k) {
    std::mt19937_64 rng(mix_seed(seed, uint64_t(k)));
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    const double mu0 = grid.lambda_min + (k + 0.5) * range / num_classes;
    const double sig0 = (0.05 + 0.07 * uni(rng)) * range;
    const double base = 0.05 + 0.10 * uni(rng);

    struct Bump { double mu, sig, amp; };
    std::vector<Bump> bumps = {{mu0, sig0, 1.0}};
    const int extra = 1 + int(uni(rng) * 2.0);
    for (int j = 0; j < extra; ++j)
      bumps.push_back({grid.lambda_min + uni(rng) * range, (0.03 + 0.07 * uni(rng)) * range,
                       0.1 + 0.3 * uni(rng)});

    Spectrum s = Spectrum::constant(grid, base);
    for (int i = 0; i < grid.bands; ++i) {
      double v = s.values[i];
      for (const auto& g : bumps) {
        const double t = (grid.centers[i] - g.mu) / g.sig;
        v += g.amp * std::exp(-0.5 * t * t);
      }
      s.values[i] = v;
    }
    out.push_back(std::move(s));
  }
  return out;
}

LabelMap random_patch_labels(int width, int height, int num_classes, uint64_t seed, int patch) {
  if (width <= 0 || height <= 0 || num_classes <= 0 || num_classes > 0xFFFF || patch <= 0)
    throw ValidationError("bad label-map parameters");
  const int tx = (width + patch - 1) / patch;
  const int ty = (height + patch - 1) / patch;
  std::mt19937_64 rng(mix_seed(seed, 0x6c61626cu));
  std::vector<uint16_t> tile(size_t(tx) * ty);
  // Cycle through classes first so small scenes still contain every class.
  for (size_t i = 0; i < tile.size(); ++i) tile[i] = uint16_t(i % num_classes);
  std::shuffle(tile.begin(), tile.end(), rng);

  LabelMap lm(width, height, num_classes);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      lm.labels[size_t(y) * width + x] = tile[size_t(y / patch) * tx + x / patch];
  return lm;
}

Image random_alpha(int width, int height, uint64_t seed, double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo)) throw ValidationError("alpha range must satisfy 0 < lo < hi");
  Image img(width, height);
  std::mt19937_64 rng(mix_seed(seed, 0x616c7068u));
  std::uniform_real_distribution<double> uni(lo, hi);
  for (auto& v : img.values) v = uni(rng);
  return img;
}

HsiCube jitter_cube(const HsiCube& cube, double sigma, uint64_t seed) {
  validate_cube(cube);
  if (!(sigma >= 0.0)) throw ValidationError("jitter sigma must be non-negative");
  HsiCube out = cube;
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  for (auto& v : out.data) v *= std::max(0.0, 1.0 + g(rng));
  return out;
}

HsiCube single_band_scene(const WavelengthGrid& grid, int band, int width, int height,
                          double value) {
  if (band < 0 || band >= grid.bands) throw ValidationError("band index out of range");
  if (!(value > 0.0)) throw ValidationError("scene value must be positive");
  HsiCube cube(width, height, grid);
  const size_t plane = size_t(width) * height;
  std::fill_n(cube.data.begin() + size_t(band) * plane, plane, value);
  return cube;
}

HsiCube laser_scene(const WavelengthGrid& grid, double nm, int width, int height, double value) {
  if (!(nm >= grid.lambda_min && nm <= grid.lambda_max))
    throw ValidationError("laser wavelength outside the grid");
  if (grid.bands == 1) return single_band_scene(grid, 0, width, height, value);
  const double idx = (nm - grid.lambda_min) / grid.delta;
  const int lo = std::min(int(std::floor(idx)), grid.bands - 2);
  const double frac = idx - lo;
  HsiCube cube(width, height, grid);
  const size_t plane = size_t(width) * height;
  std::fill_n(cube.data.begin() + size_t(lo) * plane, plane, value * (1.0 - frac));
  if (frac > 0.0)
    std::fill_n(cube.data.begin() + size_t(lo + 1) * plane, plane, value * frac);
  return cube;
}

AbundanceMap random_abundances(int width, int height, int num_classes, uint64_t seed) {
  AbundanceMap am(width, height, num_classes);
  std::mt19937_64 rng(mix_seed(seed, 0x6162756eu));
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> fill(0.5, 1.0);
  const size_t plane = size_t(width) * height;
  for (size_t p = 0; p < plane; ++p) {
    std::vector<double> w(num_classes);
    double sum = 0.0;
    for (auto& v : w) sum += (v = expo(rng));
    const double f = fill(rng) / sum;
    for (int k = 0; k < num_classes; ++k) am.values[size_t(k) * plane + p] = w[k] * f;
  }
  return am;
}

}  // namespace specbench
