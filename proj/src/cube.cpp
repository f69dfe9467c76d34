#include "specbench/cube.hpp"

#include <algorithm>
#include <cmath>

namespace specbench {

double Image::max_value() const {
  double m = 0.0;
  bool first = true;
  for (double v : values) {
    if (first || v > m) m = v;
    first = false;
  }
  return m;
}

HsiCube::HsiCube(int w, int h, const WavelengthGrid& g, double fill) : width(w), height(h), grid(g) {
  if (w <= 0 || h <= 0) throw ValidationError("cube dimensions must be positive");
  data.assign(static_cast<std::size_t>(w) * h * g.bands, fill);
}

std::vector<double> HsiCube::pixel_spectrum(int x, int y) const {
  std::vector<double> out(static_cast<std::size_t>(bands()));
  for (int b = 0; b < bands(); ++b) out[static_cast<std::size_t>(b)] = at(x, y, b);
  return out;
}

LabelMap::LabelMap(int w, int h, int k) : width(w), height(h), num_classes(k) {
  if (w <= 0 || h <= 0) throw ValidationError("label map dimensions must be positive");
  if (k < 1) throw ValidationError("label map needs at least one class");
  labels.assign(static_cast<std::size_t>(w) * h, 0);
  class_names.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    class_names[static_cast<std::size_t>(i)] = "class_" + std::to_string(i);
  }
}

AbundanceMap::AbundanceMap(int w, int h, int k) : width(w), height(h), num_classes(k) {
  if (w <= 0 || h <= 0) throw ValidationError("abundance map dimensions must be positive");
  if (k < 1) throw ValidationError("abundance map needs at least one class");
  values.assign(static_cast<std::size_t>(w) * h * k, 0.0);
}

void validate_cube(const HsiCube& cube) {
  if (cube.width <= 0 || cube.height <= 0 || cube.grid.bands <= 0) {
    throw ValidationError("cube dimensions must be positive");
  }
  if (cube.data.size() != static_cast<std::size_t>(cube.width) * cube.height * cube.grid.bands) {
    throw ValidationError("cube payload size does not match declared dimensions");
  }
  for (double v : cube.data) {
    if (!std::isfinite(v)) throw ValidationError("cube contains non-finite value");
    if (v < 0.0) throw ValidationError("cube contains negative value");
  }
}

void validate_labels(const LabelMap& labels, bool allow_invalid) {
  if (labels.labels.size() != static_cast<std::size_t>(labels.width) * labels.height) {
    throw ValidationError("label payload size does not match declared dimensions");
  }
  for (std::uint16_t v : labels.labels) {
    if (v == kInvalidLabel && allow_invalid) continue;
    if (v >= labels.num_classes) throw ValidationError("label out of range");
  }
}

void validate_abundances(const AbundanceMap& abund) {
  for (int y = 0; y < abund.height; ++y) {
    for (int x = 0; x < abund.width; ++x) {
      double sum = 0.0;
      for (int k = 0; k < abund.num_classes; ++k) {
        double a = abund.at(x, y, k);
        if (!std::isfinite(a) || a < 0.0) {
          throw ValidationError("abundance entries must be finite and non-negative");
        }
        sum += a;
      }
      if (sum > 1.0 + 1e-9) throw ValidationError("per-pixel abundances sum above one");
    }
  }
}

}  // namespace specbench
