#include "specbench/capture.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "specbench/common.hpp"
#include "specbench/io.hpp"
#include "specbench/slm.hpp"
#include "specbench/threads.hpp"

namespace specbench {
namespace {

void check_capture_inputs(const HsiCube& cube_hat, const std::vector<double>& s,
                          const IlluminantAndResponse& ir) {
  if (int(s.size()) != cube_hat.grid.bands)
    throw ValidationError("SLM profile length does not match cube bands");
  if (!(ir.response.grid == cube_hat.grid))
    throw ValidationError("system response grid does not match cube grid");
  for (double v : s)
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("SLM transmittance outside [0,1]");
  for (double v : cube_hat.data) {
    if (!is_finite(v)) throw ValidationError("non-finite cube value at capture");
    if (v < 0.0) throw ValidationError("negative cube value at capture");
  }
}

Image project_noiseless(const HsiCube& cube_hat, const std::vector<double>& s,
                        const IlluminantAndResponse& ir) {
  const int w = cube_hat.width, h = cube_hat.height, bands = cube_hat.grid.bands;
  const double dl = cube_hat.grid.integration_weight();
  const size_t plane = size_t(w) * h;
  Image out(w, h);
  parallel_for(size_t(h), [&](size_t y0, size_t y1) {
    for (size_t y = y0; y < y1; ++y)
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int b = 0; b < bands; ++b)
          acc += cube_hat.data[size_t(b) * plane + y * w + x] * s[b] * ir.response.values[b];
        out.values[y * w + x] = acc * dl;
      }
  });
  return out;
}

}  // namespace

// Sequential by design: one RNG stream, thread-count independent.
void add_sensor_noise(Image& img, double scale, double read_sigma, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> read(0.0, read_sigma);
  for (auto& v : img.values) {
    std::poisson_distribution<long> shot(scale * v);
    double electrons = double(shot(rng));
    if (read_sigma > 0.0) electrons += read(rng);
    v = electrons / scale;
  }
}

double sum_image_peak(const HsiCube& cube_hat, const IlluminantAndResponse& ir) {
  const std::vector<double> ones(size_t(cube_hat.grid.bands), 1.0);
  const double peak = project_noiseless(cube_hat, ones, ir).max_value();
  if (!(peak > 0.0)) throw ValidationError("dark scene: noise scale undefined");
  return peak;
}

Image capture_filtered_image(const HsiCube& cube_hat, const Spectrum& s,
                             const IlluminantAndResponse& ir,
                             const std::optional<NoiseModel>& noise) {
  if (!(s.grid == cube_hat.grid)) throw ValidationError("SLM profile grid mismatch");
  check_capture_inputs(cube_hat, s.values, ir);
  Image img = project_noiseless(cube_hat, s.values, ir);
  if (noise) {
    if (!(noise->peak_photons > 0.0) || noise->read_sigma < 0.0)
      throw ValidationError("bad noise model");
    const double scale = noise->peak_photons / sum_image_peak(cube_hat, ir);
    add_sensor_noise(img, scale, noise->read_sigma, noise->seed);
  }
  return img;
}

Spectrum rainbow_plane_spectrum(const HsiCube& cube, const CodedApertureModel& ap,
                                const IlluminantAndResponse& ir) {
  if (!(cube.grid == ap.grid)) throw ValidationError("cube grid does not match aperture model");
  if (!(ir.response.grid == cube.grid)) throw ValidationError("response grid mismatch");
  validate_cube(cube);
  const size_t plane = size_t(cube.width) * cube.height;
  std::vector<double> sig(size_t(cube.grid.bands), 0.0);
  for (int b = 0; b < cube.grid.bands; ++b) {
    double acc = 0.0;
    const double* p = cube.data.data() + size_t(b) * plane;
    for (size_t i = 0; i < plane; ++i) acc += p[i];
    sig[size_t(b)] = acc * ir.response.values[b];
  }
  return Spectrum(cube.grid, convolve_1d(sig, ap.k_spec));
}

MeasurementPlan plan_measurements(const SpectralFilterBank& bank, int dc_rows) {
  validate_bank(bank);
  if (dc_rows < 0) throw ValidationError("dc_rows must be non-negative");
  MeasurementPlan plan;
  plan.images_captured = 1;  // sum frame
  for (const auto& f : bank.filters) {
    bool neg = false;
    for (double v : f) neg = neg || v < 0.0;
    plan.needs_negative.push_back(neg);
    plan.images_captured += neg ? 2 : 1;
  }
  plan.dc_frame = dc_rows > 0;
  if (plan.dc_frame) plan.images_captured += 1;
  return plan;
}

MeasurementSet acquire_measurements(const HsiCube& cube, const CodedApertureModel& ap,
                                    const IlluminantAndResponse& ir,
                                    const SpectralFilterBank& bank,
                                    const std::optional<NoiseModel>& noise, int slm_rows,
                                    int dc_rows) {
  validate_bank(bank);
  if (bank.bands() != cube.grid.bands)
    throw ValidationError("filter bank band count does not match cube");
  if (slm_rows < 0 || (slm_rows > 0 && slm_rows <= dc_rows))
    throw ValidationError("SLM rows must exceed dc_rows");
  if (slm_rows == 0 && dc_rows > 0)
    throw ValidationError("dc_rows requires a quantized SLM (slm_rows > 0)");

  const MeasurementPlan plan = plan_measurements(bank, dc_rows);
  const HsiCube cube_hat = apply_coded_blur(cube, ap);

  double scale = 0.0;
  if (noise) {
    if (!(noise->peak_photons > 0.0) || noise->read_sigma < 0.0)
      throw ValidationError("bad noise model");
    scale = noise->peak_photons / plan.images_captured / sum_image_peak(cube_hat, ir);
  }

  int frame = 0;
  auto capture = [&](const std::vector<double>& profile) {
    Image img = project_noiseless(cube_hat, profile, ir);
    if (noise) add_sensor_noise(img, scale, noise->read_sigma, mix_seed(noise->seed, uint64_t(frame)));
    ++frame;
    return img;
  };

  MeasurementSet ms;
  ms.filter_bank_id = bank.id;
  ms.images_captured = plan.images_captured;
  ms.slm_rows = slm_rows;
  ms.dc_rows = dc_rows;
  ms.noise = noise;

  const int bands = cube.grid.bands;
  check_capture_inputs(cube_hat, std::vector<double>(size_t(bands), 1.0), ir);
  ms.sum_image = capture(std::vector<double>(size_t(bands), 1.0));

  struct Pending {
    Image pos, neg;
    bool has_neg;
    double gain, decode_gain;
  };
  std::vector<Pending> pending;

  for (int k = 0; k < bank.count(); ++k) {
    const auto& d = bank.filters[size_t(k)];
    double m = 0.0;
    for (double v : d) m = std::max(m, std::abs(v));

    Pending p;
    p.has_neg = plan.needs_negative[size_t(k)];
    p.gain = m;
    if (slm_rows == 0) {
      // Continuous SLM: exact split profiles.
      std::vector<double> sp(d.size(), 0.0), sn(d.size(), 0.0);
      if (m > 0.0)
        for (size_t i = 0; i < d.size(); ++i) {
          sp[i] = std::max(d[i], 0.0) / m;
          sn[i] = std::max(-d[i], 0.0) / m;
        }
      p.decode_gain = 1.0;
      p.pos = capture(sp);
      if (p.has_neg) p.neg = capture(sn);
    } else {
      const SlmPatternPair pair = encode_filter_to_slm(d, slm_rows, dc_rows);
      p.decode_gain = double(slm_rows) / double(slm_rows - dc_rows);
      p.pos = capture(slm_transmittance(pair.positive));
      if (p.has_neg) p.neg = capture(slm_transmittance(pair.negative));
    }
    pending.push_back(std::move(p));
    ms.gains.push_back(m);
    ms.filter_ids.push_back(bank.id + "/" + std::to_string(k));
  }

  // Background of the always-on center band, shared by every pattern.
  Image dc_image(cube.width, cube.height);
  if (plan.dc_frame)
    dc_image = capture(std::vector<double>(size_t(bands), double(dc_rows) / slm_rows));

  for (auto& p : pending) {
    // I+ - I- cancels the DC band when both frames exist; otherwise the DC
    // frame stands in for the missing negative pattern (it is that pattern).
    Image feat(cube.width, cube.height);
    const Image& neg = p.has_neg ? p.neg : dc_image;
    for (size_t i = 0; i < feat.values.size(); ++i)
      feat.values[i] = p.gain * p.decode_gain * (p.pos.values[i] - neg.values[i]);
    ms.filter_images.push_back(std::move(feat));
  }
  return ms;
}

void save_measurements(const MeasurementSet& ms, const std::string& path) {
  const int q = int(ms.filter_images.size());
  HsiCube planes(ms.sum_image.width, ms.sum_image.height,
                 WavelengthGrid(1.0, double(q + 1), q + 1));
  const size_t plane = ms.sum_image.values.size();
  std::copy(ms.sum_image.values.begin(), ms.sum_image.values.end(), planes.data.begin());
  for (int k = 0; k < q; ++k) {
    if (ms.filter_images[size_t(k)].values.size() != plane)
      throw ValidationError("measurement image size mismatch");
    std::copy(ms.filter_images[size_t(k)].values.begin(), ms.filter_images[size_t(k)].values.end(),
              planes.data.begin() + size_t(k + 1) * plane);
  }
  save_cube(planes, path);

  KeyValues kv;
  kv.emplace_back("filter_bank_id", ms.filter_bank_id);
  kv.emplace_back("filters", std::to_string(q));
  for (int k = 0; k < q; ++k) {
    kv.emplace_back("filter_id_" + std::to_string(k), ms.filter_ids[size_t(k)]);
    kv.emplace_back("gain_" + std::to_string(k), format_double(ms.gains[size_t(k)]));
  }
  kv.emplace_back("images_captured", std::to_string(ms.images_captured));
  kv.emplace_back("slm_rows", std::to_string(ms.slm_rows));
  kv.emplace_back("dc_rows", std::to_string(ms.dc_rows));
  kv.emplace_back("noisy", ms.noise ? "1" : "0");
  if (ms.noise) {
    kv.emplace_back("peak_photons", format_double(ms.noise->peak_photons));
    kv.emplace_back("read_sigma", format_double(ms.noise->read_sigma));
    kv.emplace_back("seed", std::to_string(ms.noise->seed));
  }
  save_key_values(kv, path + ".meta");
}

MeasurementSet load_measurements(const std::string& path) {
  const HsiCube planes = load_cube(path);
  const KeyValues kv = load_key_values(path + ".meta");

  MeasurementSet ms;
  const int q = planes.grid.bands - 1;
  if (std::stoi(kv_get(kv, "filters")) != q)
    throw ParseError(ParseError::Kind::Malformed, path + ": sidecar filter count mismatch");

  const size_t plane = size_t(planes.width) * planes.height;
  ms.sum_image = Image(planes.width, planes.height);
  std::copy_n(planes.data.begin(), plane, ms.sum_image.values.begin());
  for (int k = 0; k < q; ++k) {
    Image img(planes.width, planes.height);
    std::copy_n(planes.data.begin() + size_t(k + 1) * plane, plane, img.values.begin());
    ms.filter_images.push_back(std::move(img));
    ms.filter_ids.push_back(kv_get(kv, "filter_id_" + std::to_string(k)));
    ms.gains.push_back(std::stod(kv_get(kv, "gain_" + std::to_string(k))));
  }
  ms.filter_bank_id = kv_get(kv, "filter_bank_id");
  ms.images_captured = std::stoi(kv_get(kv, "images_captured"));
  ms.slm_rows = std::stoi(kv_get(kv, "slm_rows"));
  ms.dc_rows = std::stoi(kv_get(kv, "dc_rows"));
  if (kv_get(kv, "noisy") == "1") {
    NoiseModel nm;
    nm.peak_photons = std::stod(kv_get(kv, "peak_photons"));
    nm.read_sigma = std::stod(kv_get(kv, "read_sigma"));
    nm.seed = std::stoull(kv_get(kv, "seed"));
    ms.noise = nm;
  }
  return ms;
}

}  // namespace specbench
