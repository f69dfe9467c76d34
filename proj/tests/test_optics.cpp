#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "specbench/aperture.hpp"
#include "specbench/capture.hpp"
#include "specbench/io.hpp"
#include "specbench/scene.hpp"
#include "specbench/slm.hpp"
#include "testutil.hpp"

using namespace specbench;

namespace {

std::vector<std::vector<bool>> random_mask(int rows, int cols, uint64_t seed, double p = 0.5) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<std::vector<bool>> mask(size_t(rows), std::vector<bool>(size_t(cols), false));
  for (auto& row : mask)
    for (size_t c = 0; c < row.size(); ++c) row[c] = coin(rng);
  mask[0][0] = true;  // never all-dark
  return mask;
}

std::vector<std::vector<bool>> open_mask(int rows, int cols) {
  return std::vector<std::vector<bool>>(size_t(rows), std::vector<bool>(size_t(cols), true));
}

// Aperture stand-in with hand-picked kernels; grid must match the cube.
CodedApertureModel manual_model(const WavelengthGrid& grid, std::vector<double> k_spec,
                                std::vector<Image> psf) {
  CodedApertureModel m;
  m.grid = grid;
  m.k_spec = std::move(k_spec);
  m.psf = std::move(psf);
  return m;
}

Image random_kernel(int w, int h, uint64_t seed) {
  Image k(w, h);
  std::mt19937_64 rng(seed);
  double sum = 0.0;
  for (auto& v : k.values) {
    v = oracles::uniform(rng, 0.0, 1.0);
    sum += v;
  }
  for (auto& v : k.values) v /= sum;
  return k;
}

double second_moment_radius(const Image& psf) {
  const double cx = (psf.width - 1) / 2.0, cy = (psf.height - 1) / 2.0;
  double acc = 0.0;
  for (int y = 0; y < psf.height; ++y)
    for (int x = 0; x < psf.width; ++x)
      acc += psf.at(x, y) * ((x - cx) * (x - cx) + (y - cy) * (y - cy));
  return std::sqrt(acc);
}

SpectralFilterBank random_bank(int q, int bands, uint64_t seed, bool force_signed = true) {
  SpectralFilterBank bank;
  bank.id = "test-bank";
  bank.source = "matched";
  std::mt19937_64 rng(seed);
  for (int k = 0; k < q; ++k) {
    std::vector<double> d(static_cast<size_t>(bands));
    for (auto& v : d) v = oracles::uniform(rng, -1.0, 1.0);
    if (force_signed) d[0] = -std::abs(d[0]) - 0.1;
    bank.filters.push_back(std::move(d));
    bank.offsets.push_back(0.0);
  }
  return bank;
}

}  // namespace

TEST_CASE("single open cell gives identity kernels") {
  const WavelengthGrid g(600.0, 900.0, 10);
  const CodedApertureModel m = build_aperture_model({{true}}, ApertureConfig{}, g);
  REQUIRE(m.k_spec.size() == 1);
  CHECK(m.k_spec[0] == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(int(m.psf.size()) == g.bands);
  for (const auto& p : m.psf) {
    REQUIRE(p.width == 1);
    REQUIRE(p.height == 1);
    CHECK(p.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("kernel normalization invariants hold for a random mask") {
  const WavelengthGrid g(600.0, 900.0, 8);
  const CodedApertureModel m = build_aperture_model(random_mask(16, 16, 77), ApertureConfig{}, g);
  CHECK(std::abs(std::accumulate(m.k_spec.begin(), m.k_spec.end(), 0.0) - 1.0) < 1e-9);
  CHECK(m.k_spec.size() % 2 == 1);
  for (double v : m.k_spec) CHECK(v >= 0.0);
  for (const auto& p : m.psf) {
    CHECK(std::abs(std::accumulate(p.values.begin(), p.values.end(), 0.0) - 1.0) < 1e-9);
    for (double v : p.values) CHECK(v >= 0.0);
  }
}

TEST_CASE("psf support radius never shrinks with wavelength") {
  const WavelengthGrid g(600.0, 900.0, 8);
  const CodedApertureModel m = build_aperture_model(default_aperture_mask(), ApertureConfig{}, g);
  for (int b = 0; b + 1 < g.bands; ++b)
    CHECK(second_moment_radius(m.psf[size_t(b) + 1]) >=
          second_moment_radius(m.psf[size_t(b)]) - 1e-9);
}

TEST_CASE("wider open masks blur more bands, psf stays near delta") {
  const WavelengthGrid g = default_grid();
  const CodedApertureModel m8 = build_aperture_model(open_mask(8, 8), ApertureConfig{}, g);
  const CodedApertureModel m16 = build_aperture_model(open_mask(16, 16), ApertureConfig{}, g);
  CHECK(m8.k_spec.size() >= 3);
  CHECK(m16.k_spec.size() > m8.k_spec.size());

  for (const CodedApertureModel* m : {&m8, &m16})
    for (int b = 0; b < g.bands; b += 33) {
      const Image& p = m->psf[size_t(b)];
      const int cx = (p.width - 1) / 2, cy = (p.height - 1) / 2;
      const double center = p.at(cx, cy);
      CHECK(center >= 0.3);
      CHECK(center == doctest::Approx(p.max_value()).epsilon(1e-12));
    }
}

TEST_CASE("psf of a random mask matches the direct transform oracle") {
  const auto mask = random_mask(32, 32, 123);
  const WavelengthGrid g(600.0, 900.0, 4);
  const CodedApertureModel m = build_aperture_model(mask, ApertureConfig{}, g);

  for (int b : {0, 3}) {
    const Image& p = m.psf[size_t(b)];
    const double ratio = g.centers[size_t(b)] / g.centers[0];
    const int hx = (p.width - 1) / 2, hy = (p.height - 1) / 2;
    double sum = 0.0;
    Image want(p.width, p.height);
    for (int j = -hy; j <= hy; ++j)
      for (int i = -hx; i <= hx; ++i) {
        const double v =
            oracles::mask_power(mask, i / (ratio * 32.0), j / (ratio * 32.0));
        want.at(i + hx, j + hy) = v;
        sum += v;
      }
    for (size_t i = 0; i < p.values.size(); ++i)
      CHECK(std::abs(p.values[i] - want.values[i] / sum) < 1e-9);
  }
}

TEST_CASE("degenerate masks and geometry are rejected") {
  const WavelengthGrid g(600.0, 900.0, 4);
  CHECK_THROWS_AS(build_aperture_model({}, ApertureConfig{}, g), ValidationError);
  CHECK_THROWS_AS(build_aperture_model({{false, false}, {false, false}}, ApertureConfig{}, g),
                  ValidationError);
  ApertureConfig bad;
  bad.focal_mm = 0.0;
  CHECK_THROWS_AS(build_aperture_model({{true}}, bad, g), ValidationError);
}

TEST_CASE("shipped default mask is 32x32 and meaningfully invertible") {
  const auto mask = default_aperture_mask();
  REQUIRE(mask.size() == 32);
  REQUIRE(mask[0].size() == 32);
  CHECK(aperture_invertibility_margin(mask) > 0.01);
  // Deterministic: building twice gives the same mask.
  CHECK(default_aperture_mask() == mask);
}

TEST_CASE("centered convolution matches the hand example") {
  const std::vector<double> out = convolve_1d({1.0, 0.0, 0.0, 0.0}, {0.5, 0.5});
  REQUIRE(out.size() == 4);
  CHECK(out[0] == 0.5);
  CHECK(out[1] == 0.5);
  CHECK(out[2] == 0.0);
  CHECK(out[3] == 0.0);
}

TEST_CASE("1d and 2d convolution match the scatter oracle") {
  std::mt19937_64 rng(5);
  std::vector<double> sig(17);
  for (auto& v : sig) v = oracles::uniform(rng, -1.0, 1.0);
  for (int p : {1, 2, 3, 4, 5}) {
    std::vector<double> k(static_cast<size_t>(p));
    for (auto& v : k) v = oracles::uniform(rng, -1.0, 1.0);
    CHECK(oracles::max_abs_diff(convolve_1d(sig, k), oracles::conv1d(sig, k)) < 1e-12);
  }

  Image img(9, 7);
  for (auto& v : img.values) v = oracles::uniform(rng, -1.0, 1.0);
  const Image k = random_kernel(5, 3, 6);
  const Image got = convolve_2d(img, k);
  const Image want = oracles::conv2d(img, k);
  CHECK(oracles::max_abs_diff(got.values, want.values) < 1e-12);
}

TEST_CASE("delta aperture blur is the identity") {
  const WavelengthGrid g(600.0, 900.0, 12);
  const HsiCube cube = oracles::random_cube(6, 5, g, 9);
  const HsiCube out = apply_coded_blur(cube, identity_aperture(g));
  for (size_t i = 0; i < cube.data.size(); ++i)
    CHECK(out.data[i] == doctest::Approx(cube.data[i]).epsilon(1e-12));
}

TEST_CASE("two-tap spectral kernel shifts half the energy up one band") {
  const WavelengthGrid g(600.0, 900.0, 4);
  HsiCube cube(1, 1, g);
  cube.at(0, 0, 0) = 1.0;
  const CodedApertureModel m =
      manual_model(g, {0.5, 0.5}, std::vector<Image>(4, Image(1, 1, 1.0)));
  const HsiCube out = apply_coded_blur(cube, m);
  CHECK(out.pixel_spectrum(0, 0) == std::vector<double>{0.5, 0.5, 0.0, 0.0});
}

TEST_CASE("coded blur matches the nested-loop oracle") {
  const WavelengthGrid g(600.0, 900.0, 16);
  const HsiCube cube = oracles::random_cube(8, 8, g, 14);
  std::vector<Image> psf;
  for (int b = 0; b < 16; ++b) psf.push_back(random_kernel(3 + 2 * (b % 2), 3, 100 + b));
  std::vector<double> k_spec = {0.1, 0.2, 0.4, 0.2, 0.1};
  const CodedApertureModel m = manual_model(g, k_spec, psf);

  const HsiCube got = apply_coded_blur(cube, m);
  const HsiCube want = oracles::blur_cube(cube, psf, k_spec);
  CHECK(oracles::max_abs_diff(got.data, want.data) < 1e-9);
  for (double v : got.data) CHECK(v >= 0.0);
}

TEST_CASE("blur rejects a mismatched grid") {
  const HsiCube cube = oracles::random_cube(4, 4, WavelengthGrid(600.0, 900.0, 8), 3);
  CHECK_THROWS_AS(apply_coded_blur(cube, identity_aperture(WavelengthGrid(600.0, 900.0, 12))),
                  ValidationError);
}

TEST_CASE("filtered capture sums the pixel spectrum") {
  const WavelengthGrid g(600.0, 602.0, 3);  // delta = 1 nm
  HsiCube cube(1, 1, g);
  cube.at(0, 0, 0) = 1.0;
  cube.at(0, 0, 1) = 2.0;
  cube.at(0, 0, 2) = 4.0;
  const auto ir = IlluminantAndResponse::identity(g);
  const Image img = capture_filtered_image(cube, Spectrum::constant(g, 1.0), ir);
  CHECK(img.at(0, 0) == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("filtered capture masks bands") {
  const WavelengthGrid g(600.0, 603.0, 4);  // delta = 1 nm
  HsiCube cube(1, 1, g);
  for (int b = 0; b < 4; ++b) cube.at(0, 0, b) = double(b + 1);
  const auto ir = IlluminantAndResponse::identity(g);
  const Image img = capture_filtered_image(cube, Spectrum(g, {0.0, 1.0, 0.0, 1.0}), ir);
  CHECK(img.at(0, 0) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("filtered capture matches the triple-loop oracle") {
  const WavelengthGrid g(600.0, 900.0, 16);
  const HsiCube cube = oracles::random_cube(7, 5, g, 19);
  std::mt19937_64 rng(20);
  Spectrum s = Spectrum::constant(g, 0.0);
  for (auto& v : s.values) v = oracles::uniform(rng, 0.0, 1.0);
  IlluminantAndResponse ir = IlluminantAndResponse::identity(g);
  for (auto& v : ir.response.values) v = oracles::uniform(rng, 0.2, 1.5);

  const Image got = capture_filtered_image(cube, s, ir);
  const Image want = oracles::project(cube, s.values, ir.response.values, g.integration_weight());
  CHECK(oracles::max_abs_diff(got.values, want.values) < 1e-9);
}

TEST_CASE("capture validates its inputs") {
  const WavelengthGrid g(600.0, 900.0, 4);
  HsiCube cube(2, 2, g, 1.0);
  const auto ir = IlluminantAndResponse::identity(g);
  CHECK_THROWS_AS(capture_filtered_image(cube, Spectrum(g, {0.0, 1.0, 1.5, 0.0}), ir),
                  ValidationError);
  CHECK_THROWS_AS(capture_filtered_image(cube, Spectrum(g, {0.0, 1.0, -0.1, 0.0}), ir),
                  ValidationError);
  cube.at(0, 0, 0) = -1.0;
  CHECK_THROWS_AS(capture_filtered_image(cube, Spectrum::constant(g, 1.0), ir), ValidationError);
}

TEST_CASE("noiseless capture is linear in the profile") {
  const WavelengthGrid g(600.0, 900.0, 12);
  const HsiCube cube = oracles::random_cube(5, 4, g, 23);
  const auto ir = IlluminantAndResponse::identity(g);
  std::mt19937_64 rng(24);
  Spectrum s1 = Spectrum::constant(g, 0.0), s2 = Spectrum::constant(g, 0.0);
  for (int b = 0; b < 12; ++b) {
    s1[b] = oracles::uniform(rng, 0.0, 1.0);
    s2[b] = oracles::uniform(rng, 0.0, 1.0);
  }
  const double a = 0.3, bt = 0.5;
  Spectrum mix = Spectrum::constant(g, 0.0);
  for (int b = 0; b < 12; ++b) mix[b] = a * s1[b] + bt * s2[b];

  const Image i1 = capture_filtered_image(cube, s1, ir);
  const Image i2 = capture_filtered_image(cube, s2, ir);
  const Image im = capture_filtered_image(cube, mix, ir);
  for (size_t i = 0; i < im.values.size(); ++i)
    CHECK(std::abs(im.values[i] - (a * i1.values[i] + bt * i2.values[i])) < 1e-9);
}

TEST_CASE("broadening a non-negative profile never darkens a pixel") {
  const WavelengthGrid g(600.0, 900.0, 10);
  const HsiCube cube = oracles::random_cube(6, 6, g, 29);
  const auto ir = IlluminantAndResponse::identity(g);
  std::mt19937_64 rng(30);
  Spectrum narrow = Spectrum::constant(g, 0.0), wide = Spectrum::constant(g, 0.0);
  for (int b = 0; b < 10; ++b) {
    narrow[b] = oracles::uniform(rng, 0.0, 0.5);
    wide[b] = narrow[b] + oracles::uniform(rng, 0.0, 0.5);
  }
  const Image in = capture_filtered_image(cube, narrow, ir);
  const Image iw = capture_filtered_image(cube, wide, ir);
  for (size_t i = 0; i < in.values.size(); ++i) CHECK(iw.values[i] >= in.values[i]);
}

TEST_CASE("same seed reproduces the noisy capture bit for bit") {
  const WavelengthGrid g(700.0, 700.0, 1);
  const HsiCube cube = oracles::random_cube(16, 16, g, 31, 0.5, 1.0);
  const auto ir = IlluminantAndResponse::identity(g);
  NoiseModel nm{1e3, 2.0, 77};
  const Image a = capture_filtered_image(cube, Spectrum::constant(g, 1.0), ir, nm);
  const Image b = capture_filtered_image(cube, Spectrum::constant(g, 1.0), ir, nm);
  CHECK(a.values == b.values);
  nm.seed = 78;
  const Image c = capture_filtered_image(cube, Spectrum::constant(g, 1.0), ir, nm);
  CHECK(a.values != c.values);
}

TEST_CASE("noisy pixel variance follows the shot plus read prediction") {
  const WavelengthGrid g(700.0, 700.0, 1);
  const HsiCube cube(128, 128, g, 1.0);
  const auto ir = IlluminantAndResponse::identity(g);
  const double peak = 500.0, read = 3.0;
  const Image img =
      capture_filtered_image(cube, Spectrum::constant(g, 1.0), ir, NoiseModel{peak, read, 4242});

  double mean = 0.0;
  for (double v : img.values) mean += v;
  mean /= double(img.values.size());
  double var = 0.0;
  for (double v : img.values) var += (v - mean) * (v - mean);
  var /= double(img.values.size() - 1);

  const double scale = peak / 1.0;  // sum-image peak is 1
  const double want = (scale * 1.0 + read * read) / (scale * scale);
  CHECK(mean == doctest::Approx(1.0).epsilon(0.01));
  CHECK(var == doctest::Approx(want).epsilon(0.10));
}

TEST_CASE("rainbow plane sums pixels then blurs with the code") {
  const WavelengthGrid g(600.0, 900.0, 3);
  HsiCube one(1, 1, g);
  one.at(0, 0, 0) = 1.0;
  one.at(0, 0, 1) = 2.0;
  one.at(0, 0, 2) = 3.0;
  const auto ir = IlluminantAndResponse::identity(g);
  const Spectrum r1 = rainbow_plane_spectrum(one, identity_aperture(g), ir);
  CHECK(r1.values == std::vector<double>{1.0, 2.0, 3.0});

  HsiCube two(2, 1, g);
  two.at(0, 0, 0) = 1.0;
  two.at(1, 0, 2) = 1.0;
  const Spectrum r2 = rainbow_plane_spectrum(two, identity_aperture(g), ir);
  CHECK(r2.values == std::vector<double>{1.0, 0.0, 1.0});
}

TEST_CASE("monochromatic flat scene reads out the spectral code itself") {
  const WavelengthGrid g(600.0, 900.0, 32);
  std::vector<double> code = {1.0, 0.0, 1.0, 1.0, 0.0};
  std::vector<double> k = code;
  for (auto& v : k) v /= 3.0;
  const CodedApertureModel m = manual_model(g, k, std::vector<Image>(32, Image(1, 1, 1.0)));

  const HsiCube scene = single_band_scene(g, 12, 4, 4, 2.0);
  const Spectrum r = rainbow_plane_spectrum(scene, m, IlluminantAndResponse::identity(g));

  // Total band-12 energy spreads as the code centered on band 12.
  const double total = 2.0 * 16.0;
  const int c = (int(k.size()) - 1) / 2;
  for (int b = 0; b < 32; ++b) {
    const int tap = b - 12 + c;
    const double want = (tap >= 0 && tap < int(k.size())) ? total * k[size_t(tap)] : 0.0;
    CHECK(r[b] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("measurement plan counts frames like the hardware schedule") {
  const WavelengthGrid g(600.0, 900.0, 16);
  for (int q : {3, 5, 10}) {
    const MeasurementPlan plan = plan_measurements(random_bank(q, 16, uint64_t(q)), 0);
    CHECK(plan.images_captured == 2 * q + 1);
    CHECK(!plan.dc_frame);
  }

  SpectralFilterBank nonneg = random_bank(2, 16, 5, false);
  for (auto& f : nonneg.filters)
    for (auto& v : f) v = std::abs(v);
  CHECK(plan_measurements(nonneg, 0).images_captured == 3);
  CHECK(plan_measurements(nonneg, 16).images_captured == 4);  // adds the dc frame

  SpectralFilterBank empty;
  empty.id = "empty";
  CHECK_THROWS_AS(plan_measurements(empty, 0), ValidationError);
}

TEST_CASE("ideal acquisition reproduces the direct signed projection") {
  const WavelengthGrid g(600.0, 900.0, 12);
  const HsiCube cube = oracles::random_cube(6, 5, g, 37);
  IlluminantAndResponse ir = IlluminantAndResponse::identity(g);
  std::mt19937_64 rng(38);
  for (auto& v : ir.response.values) v = oracles::uniform(rng, 0.3, 1.2);
  const SpectralFilterBank bank = random_bank(3, 12, 39);

  const MeasurementSet ms = acquire_measurements(cube, identity_aperture(g), ir, bank);
  CHECK(ms.images_captured == 7);

  const std::vector<double> ones(12, 1.0);
  const Image sum = oracles::project(cube, ones, ir.response.values, g.integration_weight());
  CHECK(oracles::max_abs_diff(ms.sum_image.values, sum.values) < 1e-9);

  for (int k = 0; k < 3; ++k) {
    const Image want =
        oracles::project(cube, bank.filters[size_t(k)], ir.response.values, g.integration_weight());
    CHECK(oracles::max_abs_diff(ms.filter_images[size_t(k)].values, want.values) < 1e-9);
  }
}

TEST_CASE("acquisition applies the coded blur before projecting") {
  const WavelengthGrid g(600.0, 900.0, 12);
  const HsiCube cube = oracles::random_cube(6, 5, g, 41);
  const auto ir = IlluminantAndResponse::identity(g);
  const CodedApertureModel m = manual_model(
      g, {0.25, 0.5, 0.25}, std::vector<Image>(12, Image(1, 1, 1.0)));
  const SpectralFilterBank bank = random_bank(2, 12, 42);

  const MeasurementSet ms = acquire_measurements(cube, m, ir, bank);
  const HsiCube blurred = oracles::blur_cube(cube, m.psf, m.k_spec);
  for (int k = 0; k < 2; ++k) {
    const Image want = oracles::project(blurred, bank.filters[size_t(k)], ir.response.values,
                                        g.integration_weight());
    CHECK(oracles::max_abs_diff(ms.filter_images[size_t(k)].values, want.values) < 1e-9);
  }
}

TEST_CASE("quantized patterns stay within the split quantization bound") {
  const WavelengthGrid g(600.0, 900.0, 16);
  const HsiCube cube = oracles::random_cube(4, 4, g, 47);
  const auto ir = IlluminantAndResponse::identity(g);
  SpectralFilterBank bank = random_bank(2, 16, 48);
  for (auto& v : bank.filters[1]) v = std::abs(v);  // exercise the dc-frame path

  const int rows = 1080, dc = 16;
  const MeasurementSet ms =
      acquire_measurements(cube, identity_aperture(g), ir, bank, std::nullopt, rows, dc);
  CHECK(ms.images_captured == 1 + 2 + 1 + 1);  // sum, pos/neg, pos-only, dc

  const std::vector<double> ones(16, 1.0);
  const Image sum = oracles::project(cube, ones, ir.response.values, g.integration_weight());
  for (int k = 0; k < 2; ++k) {
    const Image want = oracles::project(cube, bank.filters[size_t(k)], ir.response.values,
                                        g.integration_weight());
    const double gain = ms.gains[size_t(k)];
    for (size_t i = 0; i < want.values.size(); ++i) {
      const double bound = gain * 0.5 / double(rows - dc) * sum.values[i] + 1e-9;
      CHECK(std::abs(ms.filter_images[size_t(k)].values[i] - want.values[i]) <= bound);
    }
  }
}

TEST_CASE("empty bank acquisition captures only the sum frame") {
  const WavelengthGrid g(600.0, 900.0, 8);
  const HsiCube cube = oracles::random_cube(3, 3, g, 51);
  SpectralFilterBank bank;
  bank.id = "none";
  // Zero filters is a validation error for banks, so the closest legal case is
  // checked through the plan of a single non-negative filter below.
  CHECK_THROWS_AS(
      acquire_measurements(cube, identity_aperture(g), IlluminantAndResponse::identity(g), bank),
      ValidationError);
}

TEST_CASE("acquisition seed reproducibility and budget split") {
  const WavelengthGrid g(600.0, 900.0, 8);
  const HsiCube cube = oracles::random_cube(8, 8, g, 53, 0.5, 1.0);
  const auto ir = IlluminantAndResponse::identity(g);
  const SpectralFilterBank bank = random_bank(2, 8, 54);
  const NoiseModel nm{1e4, 1.0, 7};

  const MeasurementSet a = acquire_measurements(cube, identity_aperture(g), ir, bank, nm);
  const MeasurementSet b = acquire_measurements(cube, identity_aperture(g), ir, bank, nm);
  CHECK(a.sum_image.values == b.sum_image.values);
  for (int k = 0; k < 2; ++k)
    CHECK(a.filter_images[size_t(k)].values == b.filter_images[size_t(k)].values);

  NoiseModel other = nm;
  other.seed = 8;
  const MeasurementSet c = acquire_measurements(cube, identity_aperture(g), ir, bank, other);
  CHECK(a.sum_image.values != c.sum_image.values);
}

TEST_CASE("measurement sets round-trip through the container format") {
  TempDir tmp("meas_rt");
  const WavelengthGrid g(600.0, 900.0, 8);
  const HsiCube cube = oracles::random_cube(5, 4, g, 57);
  const SpectralFilterBank bank = random_bank(2, 8, 58);
  const MeasurementSet ms = acquire_measurements(cube, identity_aperture(g),
                                                 IlluminantAndResponse::identity(g), bank);
  save_measurements(ms, tmp.file("m.hsc"));
  const MeasurementSet back = load_measurements(tmp.file("m.hsc"));

  CHECK(back.images_captured == ms.images_captured);
  CHECK(back.filter_bank_id == ms.filter_bank_id);
  CHECK(back.filter_ids == ms.filter_ids);
  CHECK(back.gains == ms.gains);
  CHECK(!back.noise);
  REQUIRE(back.filter_images.size() == 2);
  // Planes pass through 32-bit storage.
  for (size_t i = 0; i < ms.sum_image.values.size(); ++i)
    CHECK(back.sum_image.values[i] == doctest::Approx(ms.sum_image.values[i]).epsilon(1e-6));
}
