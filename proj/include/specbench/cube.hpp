#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specbench/grid.hpp"

namespace specbench {

// Single-channel image, row-major.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  Image() = default;
  Image(int w, int h, double fill = 0.0)
    : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return values.size(); }

  double max_value() const;
};

// Hyperspectral cube H(x, y, lambda), stored band-major: all of band 0
// row-major, then band 1, and so on.
struct HsiCube {
  int width = 0;
  int height = 0;
  WavelengthGrid grid;
  std::vector<double> data;

  HsiCube() = default;
  HsiCube(int w, int h, const WavelengthGrid& g, double fill = 0.0);

  double& at(int x, int y, int b) {
    return data[(static_cast<std::size_t>(b) * height + y) * width + x];
  }
  double at(int x, int y, int b) const {
    return data[(static_cast<std::size_t>(b) * height + y) * width + x];
  }

  int bands() const { return grid.bands; }
  std::size_t voxels() const { return data.size(); }

  double* band_plane(int b) { return data.data() + static_cast<std::size_t>(b) * height * width; }
  const double* band_plane(int b) const {
    return data.data() + static_cast<std::size_t>(b) * height * width;
  }

  // Spectrum at one pixel (copies B values).
  std::vector<double> pixel_spectrum(int x, int y) const;
};

constexpr std::uint16_t kInvalidLabel = 0xFFFF;

// Per-pixel class labels in [0, num_classes). Predicted maps may additionally
// carry kInvalidLabel for pixels that could not be classified.
struct LabelMap {
  int width = 0;
  int height = 0;
  int num_classes = 0;
  std::vector<std::uint16_t> labels;
  std::vector<std::string> class_names;

  LabelMap() = default;
  LabelMap(int w, int h, int k);

  std::uint16_t& at(int x, int y) { return labels[static_cast<std::size_t>(y) * width + x]; }
  std::uint16_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

// Per-pixel material fractions a_k(x, y); per pixel the fractions are
// non-negative and sum to at most 1.
struct AbundanceMap {
  int width = 0;
  int height = 0;
  int num_classes = 0;
  std::vector<double> values;  // layout [k][y][x], class-major

  AbundanceMap() = default;
  AbundanceMap(int w, int h, int k);

  double& at(int x, int y, int k) {
    return values[(static_cast<std::size_t>(k) * height + y) * width + x];
  }
  double at(int x, int y, int k) const {
    return values[(static_cast<std::size_t>(k) * height + y) * width + x];
  }
};

// Scene illuminant L(lambda) and optical system response c(lambda), shared grid.
struct IlluminantAndResponse {
  Spectrum illuminant;
  Spectrum response;

  static IlluminantAndResponse identity(const WavelengthGrid& g) {
    return {Spectrum::constant(g, 1.0), Spectrum::constant(g, 1.0)};
  }
};

void validate_cube(const HsiCube& cube);
void validate_labels(const LabelMap& labels, bool allow_invalid = false);
void validate_abundances(const AbundanceMap& abund);

}  // namespace specbench
