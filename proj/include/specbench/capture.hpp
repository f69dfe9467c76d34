#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specbench/aperture.hpp"
#include "specbench/cube.hpp"
#include "specbench/filterbank.hpp"

namespace specbench {

// Photon budget for one acquisition. peak_photons is the expected count at the
// brightest noiseless pixel of the sum image, split evenly across however many
// frames the acquisition needs; read_sigma is in electrons RMS.
struct NoiseModel {
  double peak_photons = 1e4;
  double read_sigma = 0.0;
  uint64_t seed = 0;
};

// Sensor image for one SLM profile: sum over bands of cube * s * response *
// delta_lambda. With noise, pixels are Poisson(scale*value)/scale plus read
// noise, scale anchored to the brightest noiseless sum-image (s = 1) pixel.
Image capture_filtered_image(const HsiCube& cube_hat, const Spectrum& s,
                             const IlluminantAndResponse& ir,
                             const std::optional<NoiseModel>& noise = std::nullopt);

// Brightest pixel of the noiseless all-ones capture; errors on dark scenes.
// Multi-frame acquisitions anchor their shared photon scale to this.
double sum_image_peak(const HsiCube& cube_hat, const IlluminantAndResponse& ir);

// Poisson(scale * value) / scale plus Gaussian read noise, one sequential RNG
// stream so results do not depend on the worker count.
void add_sensor_noise(Image& img, double scale, double read_sigma, uint64_t seed);

// The 1D signal on the dispersed plane: spatial sum per band, times the system
// response, convolved with the spectral code.
Spectrum rainbow_plane_spectrum(const HsiCube& cube, const CodedApertureModel& ap,
                                const IlluminantAndResponse& ir);

struct MeasurementSet {
  Image sum_image;
  std::vector<Image> filter_images;  // assembled signed feature images
  std::vector<std::string> filter_ids;
  std::vector<double> gains;  // max |d_k|
  std::string filter_bank_id;
  int images_captured = 0;
  int slm_rows = 0;  // 0 = ideal continuous SLM
  int dc_rows = 0;
  std::optional<NoiseModel> noise;
};

struct MeasurementPlan {
  std::vector<bool> needs_negative;  // per filter
  bool dc_frame = false;
  int images_captured = 0;  // 1 sum + 1..2 per filter + optional dc frame
};

// Frame count bookkeeping: signed filters need a positive and a negative
// pattern, non-negative ones only the positive; dc_rows > 0 adds one
// background frame.
MeasurementPlan plan_measurements(const SpectralFilterBank& bank, int dc_rows);

// Full acquisition of a scene cube: coded blur, then one frame per planned
// pattern. slm_rows = 0 captures with the exact split profiles (continuous
// SLM); slm_rows > 0 quantizes columns to that many binary rows. The photon
// budget is divided across all frames; frame i uses seed mixed with i.
MeasurementSet acquire_measurements(const HsiCube& cube, const CodedApertureModel& ap,
                                    const IlluminantAndResponse& ir,
                                    const SpectralFilterBank& bank,
                                    const std::optional<NoiseModel>& noise = std::nullopt,
                                    int slm_rows = 0, int dc_rows = 0);

// HSC1 with Q+1 planes (plane 0 the sum image) plus a key=value sidecar at
// path + ".meta".
void save_measurements(const MeasurementSet& ms, const std::string& path);
MeasurementSet load_measurements(const std::string& path);

}  // namespace specbench
