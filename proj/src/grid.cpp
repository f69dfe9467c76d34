#include "specbench/grid.hpp"

#include <algorithm>
#include <cmath>

namespace specbench {

WavelengthGrid::WavelengthGrid(double lmin, double lmax, int nbands)
  : lambda_min(lmin), lambda_max(lmax), bands(nbands) {
  if (nbands < 1) throw ValidationError("wavelength grid needs at least one band");
  if (!(std::isfinite(lmin) && std::isfinite(lmax))) {
    throw ValidationError("wavelength grid bounds must be finite");
  }
  if (nbands == 1) {
    if (lmin != lmax) throw ValidationError("single-band grid requires lambda_min == lambda_max");
    delta = 0.0;
    centers = {lmin};
    return;
  }
  if (!(lmax > lmin)) throw ValidationError("wavelength grid requires lambda_max > lambda_min");
  delta = (lmax - lmin) / static_cast<double>(nbands - 1);
  centers.resize(static_cast<std::size_t>(nbands));
  for (int i = 0; i < nbands; ++i) centers[static_cast<std::size_t>(i)] = lmin + i * delta;
  centers.back() = lmax;
}

int WavelengthGrid::nearest_band(double lambda_nm) const {
  if (bands == 1) return 0;
  double idx = (lambda_nm - lambda_min) / delta;
  int b = static_cast<int>(std::lround(idx));
  return std::clamp(b, 0, bands - 1);
}

Spectrum::Spectrum(const WavelengthGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != static_cast<std::size_t>(g.bands)) {
    throw ValidationError("spectrum length does not match grid band count");
  }
}

Spectrum Spectrum::constant(const WavelengthGrid& g, double value) {
  return Spectrum(g, std::vector<double>(static_cast<std::size_t>(g.bands), value));
}

void validate_spectrum(const Spectrum& s) {
  if (s.values.size() != static_cast<std::size_t>(s.grid.bands)) {
    throw ValidationError("spectrum length does not match grid band count");
  }
  for (double v : s.values) {
    if (!std::isfinite(v)) throw ValidationError("spectrum contains non-finite value");
    if (v < 0.0) throw ValidationError("spectrum contains negative value");
  }
}

Spectrum resample_spectrum(const Spectrum& s, const WavelengthGrid& target) {
  const WavelengthGrid& src = s.grid;
  const double lo = src.centers.front();
  const double hi = src.centers.back();
  // Tiny slack for centers computed by floating-point arithmetic.
  const double eps = 1e-9 * std::max(1.0, std::abs(hi));
  if (target.centers.front() < lo - eps || target.centers.back() > hi + eps) {
    throw ValidationError("resample target range extends beyond source range");
  }
  std::vector<double> out(static_cast<std::size_t>(target.bands));
  for (int i = 0; i < target.bands; ++i) {
    double lam = std::clamp(target.centers[static_cast<std::size_t>(i)], lo, hi);
    if (src.bands == 1) {
      out[static_cast<std::size_t>(i)] = s.values[0];
      continue;
    }
    double pos = (lam - lo) / src.delta;
    int j = std::clamp(static_cast<int>(std::floor(pos)), 0, src.bands - 2);
    double t = pos - j;
    double v = (1.0 - t) * s.values[static_cast<std::size_t>(j)] +
                   t * s.values[static_cast<std::size_t>(j) + 1];
    out[static_cast<std::size_t>(i)] = std::max(0.0, v);
  }
  return Spectrum(target, std::move(out));
}

WavelengthGrid default_grid() { return WavelengthGrid(600.0, 900.0, 100); }

}  // namespace specbench
