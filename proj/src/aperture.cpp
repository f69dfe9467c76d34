#include "specbench/aperture.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>

#include "specbench/common.hpp"
#include "specbench/threads.hpp"

namespace specbench {
namespace {

constexpr double kPi = 3.14159265358979323846;

void check_mask(const std::vector<std::vector<bool>>& mask) {
  if (mask.empty() || mask[0].empty()) throw ValidationError("empty aperture mask");
  size_t open = 0;
  for (const auto& row : mask) {
    if (row.size() != mask[0].size()) throw ValidationError("ragged aperture mask");
    for (bool b : row) open += b;
  }
  if (open == 0) throw ValidationError("degenerate aperture: mask passes no light");
}

// Column profile collapsed along y, piecewise linear between cell centers and
// ramping to zero one cell beyond each end. t is in cell units from center.
double profile_at(const std::vector<double>& prof, double t) {
  const double c = (double(prof.size()) - 1.0) / 2.0;
  const double u = t + c;
  if (u <= -1.0 || u >= double(prof.size())) return 0.0;
  const double lo = std::floor(u);
  const double frac = u - lo;
  auto sample = [&](double i) {
    return (i < 0.0 || i >= double(prof.size())) ? 0.0 : prof[size_t(i)];
  };
  return sample(lo) * (1.0 - frac) + sample(lo + 1.0) * frac;
}

// DTFT magnitude squared of the mask at normalized frequencies, evaluated on
// a centered tap lattice via per-row partial sums.
Image sampled_psf(const std::vector<std::vector<bool>>& mask, int hx, int hy, double dfx,
                  double dfy) {
  const int rows = int(mask.size()), cols = int(mask[0].size());
  const int tw = 2 * hx + 1, th = 2 * hy + 1;
  std::vector<std::complex<double>> row_part(size_t(tw) * rows);
  for (int i = -hx; i <= hx; ++i) {
    const double fx = i * dfx;
    for (int v = 0; v < rows; ++v) {
      std::complex<double> acc = 0.0;
      for (int u = 0; u < cols; ++u)
        if (mask[v][u]) acc += std::polar(1.0, -2.0 * kPi * fx * u);
      row_part[size_t(i + hx) * rows + v] = acc;
    }
  }
  Image out(tw, th);
  for (int j = -hy; j <= hy; ++j) {
    const double fy = j * dfy;
    for (int i = -hx; i <= hx; ++i) {
      std::complex<double> acc = 0.0;
      for (int v = 0; v < rows; ++v)
        acc += row_part[size_t(i + hx) * rows + v] * std::polar(1.0, -2.0 * kPi * fy * v);
      out.values[size_t(j + hy) * tw + (i + hx)] = std::norm(acc);
    }
  }
  return out;
}

void normalize_sum_to_one(std::vector<double>& v) {
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  if (!(s > 0.0)) throw ValidationError("degenerate kernel: zero total energy");
  for (auto& x : v) x /= s;
}

}  // namespace

CodedApertureModel build_aperture_model(const std::vector<std::vector<bool>>& mask,
                                        const ApertureConfig& cfg, const WavelengthGrid& grid) {
  check_mask(mask);
  if (!(cfg.pitch_mm > 0.0) || !(cfg.focal_mm > 0.0) || !(cfg.grooves_per_mm > 0.0))
    throw ValidationError("aperture geometry must be positive");

  CodedApertureModel m;
  m.mask = mask;
  m.pitch_mm = cfg.pitch_mm;
  m.focal_mm = cfg.focal_mm;
  m.grooves_per_mm = cfg.grooves_per_mm;
  m.grid = grid;

  const int rows = int(mask.size()), cols = int(mask[0].size());

  // Spectral kernel: collapse along y, map cell pitch to nm via
  // lambda = x / (nu0 f), resample at band pitch.
  std::vector<double> prof(cols, 0.0);
  for (const auto& row : mask)
    for (int u = 0; u < cols; ++u) prof[u] += row[u];

  if (grid.bands == 1) {
    m.k_spec = {1.0};
  } else {
    const double dl_mask = cfg.pitch_mm / (cfg.grooves_per_mm * cfg.focal_mm) * 1e6;  // nm
    const double half_nm = ((cols - 1) / 2.0 + 1.0) * dl_mask;
    int h = int(std::floor(half_nm / grid.delta));
    std::vector<double> taps(size_t(2 * h + 1));
    for (int j = -h; j <= h; ++j) taps[size_t(j + h)] = profile_at(prof, j * grid.delta / dl_mask);
    while (taps.size() > 1 && taps.front() == 0.0 && taps.back() == 0.0) {
      taps.erase(taps.begin());
      taps.pop_back();
    }
    normalize_sum_to_one(taps);
    m.k_spec = std::move(taps);
  }

  // Per-band PSF: squared Fourier magnitude of the mask, support scaled by
  // lambda / lambda_min so taps coincide with centered DFT bins at lambda_min.
  m.psf.reserve(grid.bands);
  for (int b = 0; b < grid.bands; ++b) {
    const double ratio = grid.centers[b] / grid.centers[0];
    const int hx = int(std::ceil((cols - 1) / 2.0 * ratio));
    const int hy = int(std::ceil((rows - 1) / 2.0 * ratio));
    Image p = sampled_psf(mask, hx, hy, 1.0 / (ratio * cols), 1.0 / (ratio * rows));
    normalize_sum_to_one(p.values);
    m.psf.push_back(std::move(p));
  }
  return m;
}

CodedApertureModel identity_aperture(const WavelengthGrid& grid) {
  return build_aperture_model({{true}}, ApertureConfig{}, grid);
}

std::vector<double> convolve_1d(const std::vector<double>& signal,
                                const std::vector<double>& kernel) {
  if (kernel.empty()) throw ValidationError("empty kernel");
  const int n = int(signal.size()), p = int(kernel.size());
  const int center = (p - 1) / 2;
  std::vector<double> out(signal.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int q = 0; q < p; ++q) {
      const int src = i - (q - center);
      if (src >= 0 && src < n) acc += kernel[q] * signal[src];
    }
    out[i] = acc;
  }
  return out;
}

Image convolve_2d(const Image& img, const Image& kernel) {
  if (kernel.values.empty()) throw ValidationError("empty kernel");
  const int cx = (kernel.width - 1) / 2, cy = (kernel.height - 1) / 2;
  Image out(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int q = 0; q < kernel.height; ++q) {
        const int sy = y - (q - cy);
        if (sy < 0 || sy >= img.height) continue;
        for (int p = 0; p < kernel.width; ++p) {
          const int sx = x - (p - cx);
          if (sx >= 0 && sx < img.width) acc += kernel.at(p, q) * img.at(sx, sy);
        }
      }
      out.values[size_t(y) * img.width + x] = acc;
    }
  return out;
}

HsiCube apply_coded_blur(const HsiCube& cube, const CodedApertureModel& ap) {
  if (!(cube.grid == ap.grid)) throw ValidationError("cube grid does not match aperture model");
  if (int(ap.psf.size()) != cube.grid.bands || ap.k_spec.empty())
    throw ValidationError("aperture model kernels incomplete");

  const int w = cube.width, h = cube.height, bands = cube.grid.bands;
  const size_t plane = size_t(w) * h;

  // Spatial pass, independent per band.
  HsiCube spatial(w, h, cube.grid);
  parallel_for(size_t(bands), [&](size_t b0, size_t b1) {
    for (size_t b = b0; b < b1; ++b) {
      Image in(w, h);
      std::copy_n(cube.data.begin() + b * plane, plane, in.values.begin());
      const Image& k = ap.psf[b];
      if (k.width == 1 && k.height == 1) {
        for (size_t p = 0; p < plane; ++p) in.values[p] *= k.values[0];
        std::copy_n(in.values.begin(), plane, spatial.data.begin() + b * plane);
      } else {
        Image outb = convolve_2d(in, k);
        std::copy_n(outb.values.begin(), plane, spatial.data.begin() + b * plane);
      }
    }
  });

  // Spectral pass: plane-wise accumulation, fixed tap order per pixel.
  HsiCube out(w, h, cube.grid);
  const int p = int(ap.k_spec.size());
  const int center = (p - 1) / 2;
  parallel_for(size_t(bands), [&](size_t b0, size_t b1) {
    for (size_t b = b0; b < b1; ++b) {
      double* dst = out.data.data() + b * plane;
      for (int q = 0; q < p; ++q) {
        const long src = long(b) - (q - center);
        if (src < 0 || src >= bands) continue;
        const double kq = ap.k_spec[size_t(q)];
        const double* sp = spatial.data.data() + size_t(src) * plane;
        for (size_t i = 0; i < plane; ++i) dst[i] += kq * sp[i];
      }
    }
  });
  return out;
}

std::vector<std::vector<bool>> default_aperture_mask() {
  // 32x32, 25% open. Candidates are scored by the invertibility margin of the
  // collapsed profile; the winner is deterministic.
  const int size = 32;
  const int open = size * size / 4;
  std::vector<std::vector<bool>> best;
  double best_margin = -1.0;
  for (uint64_t cand = 0; cand < 64; ++cand) {
    std::mt19937_64 rng(mix_seed(0x61706572u, cand));
    std::vector<int> cells(size * size);
    std::iota(cells.begin(), cells.end(), 0);
    std::shuffle(cells.begin(), cells.end(), rng);
    std::vector<std::vector<bool>> mask(size, std::vector<bool>(size, false));
    for (int i = 0; i < open; ++i) mask[cells[i] / size][cells[i] % size] = true;
    const double margin = aperture_invertibility_margin(mask);
    if (margin > best_margin) {
      best_margin = margin;
      best = std::move(mask);
    }
  }
  return best;
}

double aperture_invertibility_margin(const std::vector<std::vector<bool>>& mask) {
  check_mask(mask);
  const int cols = int(mask[0].size());
  std::vector<double> prof(cols, 0.0);
  for (const auto& row : mask)
    for (int u = 0; u < cols; ++u) prof[u] += row[u];
  double dc = 0.0, worst = 0.0;
  for (int k = 0; k < cols; ++k) {
    std::complex<double> acc = 0.0;
    for (int u = 0; u < cols; ++u) acc += prof[u] * std::polar(1.0, -2.0 * kPi * k * u / cols);
    const double mag = std::abs(acc);
    if (k == 0)
      dc = mag;
    else
      worst = k == 1 ? mag : std::min(worst, mag);
  }
  return dc > 0.0 ? worst / dc : 0.0;
}

}  // namespace specbench
