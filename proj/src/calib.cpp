#include "specbench/calib.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specbench/common.hpp"
#include "specbench/fft_util.hpp"
#include "specbench/io.hpp"

namespace specbench {
namespace {

constexpr double kPi = 3.14159265358979323846;

void check_kernel_normalized(const std::vector<double>& k) {
  const double s = std::accumulate(k.begin(), k.end(), 0.0);
  if (std::abs(s - 1.0) > 1e-6) throw ValidationError("deconvolution kernel must sum to 1");
}

// Shared centered-tap convention: tap p sits at offset p - (P-1)/2.
std::vector<std::complex<double>> kernel_spectrum_1d(const std::vector<double>& k, size_t n) {
  if (k.size() > n) throw ValidationError("kernel larger than signal");
  std::vector<double> embed(n, 0.0);
  const int c = (int(k.size()) - 1) / 2;
  for (int p = 0; p < int(k.size()); ++p)
    embed[size_t(((p - c) % int(n) + int(n)) % int(n))] += k[size_t(p)];
  return fft_1d(embed);
}

std::vector<std::complex<double>> kernel_spectrum_2d(const Image& k, int w, int h) {
  if (k.width > w || k.height > h) throw ValidationError("kernel larger than image");
  Image embed(w, h);
  const int cx = (k.width - 1) / 2, cy = (k.height - 1) / 2;
  for (int y = 0; y < k.height; ++y)
    for (int x = 0; x < k.width; ++x) {
      const int ex = ((x - cx) % w + w) % w;
      const int ey = ((y - cy) % h + h) % h;
      embed.values[size_t(ey) * w + ex] += k.at(x, y);
    }
  return fft_2d(embed);
}

void wiener_in_place(std::vector<std::complex<double>>& f,
                     const std::vector<std::complex<double>>& k, double nsr) {
  for (size_t i = 0; i < f.size(); ++i) {
    const double denom = std::norm(k[i]) + nsr;
    f[i] = denom > 0.0 ? std::conj(k[i]) * f[i] / denom : 0.0;
  }
}

}  // namespace

std::vector<double> estimate_code(const Spectrum& capture, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ValidationError("threshold must be in (0,1)");
  const double peak = *std::max_element(capture.values.begin(), capture.values.end());
  if (!(peak > 0.0)) throw ValidationError("all-zero capture: no code to estimate");
  const double cut = threshold * peak;
  int first = -1, last = -1;
  for (int i = 0; i < int(capture.values.size()); ++i)
    if (capture.values[size_t(i)] >= cut) {
      if (first < 0) first = i;
      last = i;
    }
  std::vector<double> code;
  for (int i = first; i <= last; ++i) code.push_back(capture.values[size_t(i)] >= cut ? 1.0 : 0.0);
  return code;
}

int locate_laser_band(const Spectrum& capture, const std::vector<double>& code, double nsr) {
  if (code.empty()) throw ValidationError("empty code");
  if (nsr < 0.0) throw ValidationError("nsr must be non-negative");
  std::vector<double> k = code;
  const double s = std::accumulate(k.begin(), k.end(), 0.0);
  if (!(s > 0.0)) throw ValidationError("all-zero code");
  for (auto& v : k) v /= s;
  const std::vector<double> dec = wiener_deconvolve_1d(capture.values, k, nsr);
  return int(std::max_element(dec.begin(), dec.end()) - dec.begin());
}

WavelengthMapping calibrate_wavelengths(
    const std::vector<std::pair<double, Spectrum>>& captures, const std::vector<double>& code,
    double nsr) {
  if (captures.size() != 2) throw ValidationError("wavelength calibration needs exactly 2 lasers");
  if (captures[0].first == captures[1].first)
    throw ValidationError("laser wavelengths must differ");
  const int i0 = locate_laser_band(captures[0].second, code, nsr);
  const int i1 = locate_laser_band(captures[1].second, code, nsr);
  if (i0 == i1) throw ValidationError("laser peaks indistinguishable: identical band index");

  WavelengthMapping m;
  m.slope = (captures[1].first - captures[0].first) / double(i1 - i0);
  m.intercept = captures[0].first - m.slope * i0;
  if (!(m.slope > 0.0))
    throw ValidationError("fitted wavelength mapping has non-positive slope");
  return m;
}

Image estimate_psf(const Image& pinhole) {
  const int w = pinhole.width, h = pinhole.height;
  if (w < 1 || h < 1) throw ValidationError("empty pinhole image");

  // Background: median of the border ring.
  std::vector<double> border;
  for (int x = 0; x < w; ++x) {
    border.push_back(pinhole.at(x, 0));
    if (h > 1) border.push_back(pinhole.at(x, h - 1));
  }
  for (int y = 1; y + 1 < h; ++y) {
    border.push_back(pinhole.at(0, y));
    if (w > 1) border.push_back(pinhole.at(w - 1, y));
  }
  std::nth_element(border.begin(), border.begin() + border.size() / 2, border.end());
  const double bg = border.empty() ? 0.0 : border[border.size() / 2];

  Image sub(w, h);
  double peak = 0.0;
  for (size_t i = 0; i < sub.values.size(); ++i) {
    sub.values[i] = std::max(pinhole.values[i] - bg, 0.0);
    peak = std::max(peak, sub.values[i]);
  }
  if (!(peak > 0.0)) throw ValidationError("no blob above background");

  const double cut = 1e-6 * peak;
  int x0 = w, x1 = -1, y0 = h, y1 = -1;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (sub.at(x, y) > cut) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }

  // Centroid inside the crop, then pad so its rounded position is the middle.
  double mx = 0.0, my = 0.0, mass = 0.0;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const double v = sub.at(x, y) > cut ? sub.at(x, y) : 0.0;
      mx += v * (x - x0);
      my += v * (y - y0);
      mass += v;
    }
  const int cx = int(std::lround(mx / mass));
  const int cy = int(std::lround(my / mass));
  const int bw = x1 - x0 + 1, bh = y1 - y0 + 1;
  const int hw = std::max(cx, bw - 1 - cx), hh = std::max(cy, bh - 1 - cy);

  Image kernel(2 * hw + 1, 2 * hh + 1);
  double total = 0.0;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const double v = sub.at(x, y) > cut ? sub.at(x, y) : 0.0;
      kernel.values[size_t(y - y0 - cy + hh) * kernel.width + (x - x0 - cx + hw)] = v;
      total += v;
    }
  for (auto& v : kernel.values) v /= total;
  return kernel;
}

Image wiener_deconvolve(const Image& img, const Image& kernel, double nsr) {
  if (nsr < 0.0) throw ValidationError("nsr must be non-negative");
  check_kernel_normalized(kernel.values);
  auto f = fft_2d(img);
  const auto k = kernel_spectrum_2d(kernel, img.width, img.height);
  wiener_in_place(f, k, nsr);
  return ifft_2d_real(f, img.width, img.height);
}

std::vector<double> wiener_deconvolve_1d(const std::vector<double>& signal,
                                         const std::vector<double>& kernel, double nsr) {
  if (nsr < 0.0) throw ValidationError("nsr must be non-negative");
  check_kernel_normalized(kernel);
  auto f = fft_1d(signal);
  const auto k = kernel_spectrum_1d(kernel, signal.size());
  wiener_in_place(f, k, nsr);
  return ifft_1d_real(f);
}

Image sector_star(int size, int spokes, int supersample) {
  if (size < 32 || spokes < 1 || supersample < 1) throw ValidationError("bad star parameters");
  Image img(size, size);
  const double c = (size - 1) / 2.0;
  const double step = 1.0 / supersample;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double acc = 0.0;
      for (int sy = 0; sy < supersample; ++sy)
        for (int sx = 0; sx < supersample; ++sx) {
          const double dx = x + (sx + 0.5) * step - 0.5 - c;
          const double dy = y + (sy + 0.5) * step - 0.5 - c;
          if (dx == 0.0 && dy == 0.0) {
            acc += 0.5;
            continue;
          }
          acc += std::sin(spokes * std::atan2(dy, dx)) >= 0.0 ? 1.0 : 0.0;
        }
      img.values[size_t(y) * size + x] = acc / (supersample * supersample);
    }
  return img;
}

MtfResult measure_mtf(const Image& img, int spokes) {
  if (img.width < 64 || img.height < 64) throw ValidationError("image too small for MTF");
  const double mn = *std::min_element(img.values.begin(), img.values.end());
  const double mx = *std::max_element(img.values.begin(), img.values.end());
  if (!(mx - mn > 1e-12 * std::max(1.0, std::abs(mx))))
    throw ValidationError("constant image: no contrast to measure");

  const double cx = (img.width - 1) / 2.0, cy = (img.height - 1) / 2.0;
  const int r_lo = 12;  // spokes/(2 pi r) reaches ~0.48 lp/px at r = 12
  const int r_hi = int(0.48 * std::min(img.width, img.height));
  if (r_hi <= r_lo) throw ValidationError("image too small for MTF rings");
  const int samples = std::max(512, 16 * spokes);

  auto bilinear = [&](double x, double y) {
    const int x0 = int(std::floor(x)), y0 = int(std::floor(y));
    const double fx = x - x0, fy = y - y0;
    auto px = [&](int xi, int yi) {
      xi = std::clamp(xi, 0, img.width - 1);
      yi = std::clamp(yi, 0, img.height - 1);
      return img.values[size_t(yi) * img.width + xi];
    };
    return (1 - fx) * (1 - fy) * px(x0, y0) + fx * (1 - fy) * px(x0 + 1, y0) +
           (1 - fx) * fy * px(x0, y0 + 1) + fx * fy * px(x0 + 1, y0 + 1);
  };

  // High frequency first (small radius): curve comes out ascending in f after
  // the reverse below.
  std::vector<double> freqs, contrasts;
  for (int r = r_hi; r >= r_lo; --r) {
    double a = 0.0, b = 0.0, dc = 0.0;
    for (int j = 0; j < samples; ++j) {
      const double th = 2.0 * kPi * j / samples;
      const double v = bilinear(cx + r * std::cos(th), cy + r * std::sin(th));
      a += v * std::cos(spokes * th);
      b += v * std::sin(spokes * th);
      dc += v;
    }
    dc /= samples;
    if (!(dc > 0.0)) continue;
    const double amp = 2.0 * std::sqrt(a * a + b * b) / samples;
    // pi/4 rescales a square wave's fundamental so the ideal target reads 1.0.
    contrasts.push_back(std::clamp(kPi / 4.0 * amp / dc, 0.0, 1.05));
    freqs.push_back(spokes / (2.0 * kPi * r));
  }

  // Moving-average smoothing, then a running minimum from low f so the
  // reported curve is non-increasing.
  MtfResult res;
  const int n = int(contrasts.size());
  std::vector<double> smooth(contrasts.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - 2), hi = std::min(n - 1, i + 2);
    double s = 0.0;
    for (int j = lo; j <= hi; ++j) s += contrasts[size_t(j)];
    smooth[size_t(i)] = s / (hi - lo + 1);
  }
  double run = 1.05;
  for (int i = 0; i < n; ++i) {
    run = std::min(run, smooth[size_t(i)]);
    res.curve.frequency.push_back(freqs[size_t(i)]);
    res.curve.contrast.push_back(run);
    if (run >= 0.30) res.mtf30 = freqs[size_t(i)];
  }
  return res;
}

void save_calibration_report(const CalibrationReport& report, const std::string& basepath) {
  KeyValues kv;
  kv.emplace_back("slope_nm_per_band", format_double(report.mapping.slope));
  kv.emplace_back("intercept_nm", format_double(report.mapping.intercept));
  std::string code;
  for (double v : report.estimated_code) code += v > 0.5 ? '1' : '0';
  kv.emplace_back("estimated_code", code);
  kv.emplace_back("psf_width", std::to_string(report.psf_estimate.width));
  kv.emplace_back("psf_height", std::to_string(report.psf_estimate.height));
  kv.emplace_back("mtf30_raw", format_double(report.mtf30_raw));
  kv.emplace_back("mtf30_deconvolved", format_double(report.mtf30_deconvolved));
  save_key_values(kv, basepath + ".txt");

  auto curve_rows = [](const MtfCurve& c) {
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < c.frequency.size(); ++i)
      rows.push_back({c.frequency[i], c.contrast[i]});
    return rows;
  };
  save_csv(curve_rows(report.mtf_raw), basepath + "_mtf_raw.csv", "lp_per_px,contrast");
  save_csv(curve_rows(report.mtf_deconvolved), basepath + "_mtf_deconvolved.csv",
           "lp_per_px,contrast");

  std::vector<std::vector<double>> psf_rows;
  for (int y = 0; y < report.psf_estimate.height; ++y) {
    std::vector<double> row;
    for (int x = 0; x < report.psf_estimate.width; ++x)
      row.push_back(report.psf_estimate.at(x, y));
    psf_rows.push_back(std::move(row));
  }
  save_csv(psf_rows, basepath + "_psf.csv", "psf rows");
}

}  // namespace specbench
