// specbench: simulation workbench for a programmable spectral-filter camera.
// Every subcommand writes a fully resolved <out>.config next to its outputs.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "specbench/aperture.hpp"
#include "specbench/calib.hpp"
#include "specbench/capture.hpp"
#include "specbench/classify.hpp"
#include "specbench/common.hpp"
#include "specbench/io.hpp"
#include "specbench/mlp.hpp"
#include "specbench/scene.hpp"
#include "specbench/slm.hpp"
#include "specbench/svm.hpp"
#include "specbench/threads.hpp"

namespace sb = specbench;

namespace {

struct Usage : sb::Error {
  using Error::Error;
};

std::pair<int, int> parse_size(const std::string& s) {
  const size_t x = s.find('x');
  int w = 0, h = 0;
  try {
    if (x == std::string::npos) throw std::invalid_argument("no separator");
    size_t wend = 0, hend = 0;
    w = std::stoi(s.substr(0, x), &wend);
    h = std::stoi(s.substr(x + 1), &hend);
    if (wend != x || hend != s.size() - x - 1) throw std::invalid_argument("trailing junk");
  } catch (const std::exception&) {
    throw Usage("bad size '" + s + "', expected WxH like 64x64");
  }
  if (w < 1 || h < 1) throw Usage("size must be positive");
  return {w, h};
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t end = 0;
      out.push_back(std::stod(item, &end));
      if (end != item.size()) throw std::invalid_argument("trailing junk");
    } catch (const std::exception&) {
      throw Usage("bad numeric list entry '" + item + "'");
    }
  }
  if (out.empty()) throw Usage("empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_list(s)) {
    if (v != double(int(v))) throw Usage("expected integers in list");
    out.push_back(int(v));
  }
  return out;
}

void write_config(const CLI::App& app, const std::string& out_base) {
  std::ofstream f(out_base + ".config", std::ios::trunc);
  if (!f) throw sb::IoError("cannot write " + out_base + ".config");
  f << app.config_to_str(true, false);
}

sb::CodedApertureModel make_aperture(const std::string& mask_path, bool identity,
                                     const sb::ApertureConfig& cfg,
                                     const sb::WavelengthGrid& grid) {
  if (identity) return sb::identity_aperture(grid);
  const auto mask = mask_path.empty() ? sb::default_aperture_mask() : sb::load_pbm(mask_path);
  return sb::build_aperture_model(mask, cfg, grid);
}

std::optional<sb::NoiseModel> make_noise(double photons, double read_sigma, uint64_t seed) {
  if (photons <= 0.0) return std::nullopt;
  return sb::NoiseModel{photons, read_sigma, seed};
}

sb::LabeledSpectra load_training_data(const std::string& cube_path, const std::string& lbl_path,
                                      double train_frac, double val_frac, double test_frac,
                                      uint64_t seed) {
  const sb::HsiCube cube = sb::load_cube(cube_path);
  const sb::LabelMap labels = sb::load_labels(lbl_path);
  sb::LabeledSpectra data = sb::spectra_from_cube(cube, labels);
  sb::split_dataset(data, train_frac, val_frac, test_frac, seed);
  return data;
}

sb::ScoreMap score_map_from_cube(const sb::HsiCube& cube) {
  sb::ScoreMap sm;
  sm.width = cube.width;
  sm.height = cube.height;
  for (int b = 0; b < cube.bands(); ++b) {
    sb::Image plane(cube.width, cube.height);
    std::copy(cube.band_plane(b), cube.band_plane(b) + plane.size(), plane.values.begin());
    sm.planes.push_back(std::move(plane));
  }
  return sm;
}

sb::Image label_preview(const sb::LabelMap& lm) {
  // 0 = unclassified, classes shifted up one gray step.
  sb::Image img(lm.width, lm.height);
  for (size_t i = 0; i < lm.labels.size(); ++i)
    img.values[i] = lm.labels[i] == sb::kInvalidLabel ? 0.0 : double(lm.labels[i] + 1);
  return img;
}

// ---------------------------------------------------------------- synth ----

struct SynthArgs {
  std::string out = "scene", size = "64x64";
  int classes = 5, patch = 8, bands = 100;
  uint64_t seed = 0;
  bool mixed = false;
  double alpha_lo = 0.5, alpha_hi = 1.5;
  double grid_min = 600.0, grid_max = 900.0;
  double jitter = 0.0;
};

void run_synth(const CLI::App& app, const SynthArgs& a) {
  const auto [w, h] = parse_size(a.size);
  const sb::WavelengthGrid grid(a.grid_min, a.grid_max, a.bands);
  const auto library = sb::surrogate_library(a.classes, grid, a.seed);

  sb::HsiCube cube;
  if (a.mixed) {
    const sb::AbundanceMap abund = sb::random_abundances(w, h, a.classes, sb::mix_seed(a.seed, 1));
    cube = sb::synthesize_mixed_scene(abund, library);
  } else {
    const sb::LabelMap labels = sb::random_patch_labels(w, h, a.classes, a.seed, a.patch);
    const sb::Image alpha = sb::random_alpha(w, h, sb::mix_seed(a.seed, 2), a.alpha_lo, a.alpha_hi);
    cube = sb::synthesize_pure_scene(labels, library, alpha);
    sb::save_labels(labels, a.out + ".lbl");
  }
  if (a.jitter > 0.0) cube = sb::jitter_cube(cube, a.jitter, sb::mix_seed(a.seed, 3));
  sb::save_cube(cube, a.out + ".hsc");

  std::vector<std::vector<double>> rows;
  for (const auto& s : library) rows.push_back(s.values);
  sb::save_csv(rows, a.out + "_library.csv", "surrogate library, one row per class");
  write_config(app, a.out);
  std::cout << "wrote " << a.out << ".hsc (" << w << "x" << h << "x" << a.bands << ", "
            << (a.mixed ? "mixed" : "pure") << ")\n";
}

// ----------------------------------------------------------- import-raw ----

struct ImportArgs {
  std::string data, labels, dtype = "f32", out = "imported";
  int width = 0, height = 0, bands = 0, classes = 0;
  int ignore = -1, label_offset = 0;
  double wl_min = 600.0, wl_max = 900.0;
};

void run_import(const CLI::App& app, const ImportArgs& a) {
  if (a.dtype != "f32" && a.dtype != "u16") throw Usage("dtype must be f32 or u16");
  const sb::RawDtype dt = a.dtype == "f32" ? sb::RawDtype::F32 : sb::RawDtype::U16;
  const sb::HsiCube cube =
      sb::import_raw_bsq(a.data, a.width, a.height, a.bands, dt, a.wl_min, a.wl_max);
  sb::save_cube(cube, a.out + ".hsc");
  std::cout << "wrote " << a.out << ".hsc\n";
  if (!a.labels.empty()) {
    if (a.classes < 1) throw Usage("--classes required with --labels");
    const sb::LabelMap lm = sb::import_raw_labels(a.labels, a.width, a.height, a.classes,
                                                  a.ignore, a.label_offset);
    sb::save_labels(lm, a.out + ".lbl");
    std::cout << "wrote " << a.out << ".lbl\n";
  }
  write_config(app, a.out);
}

// ------------------------------------------------------- capture / scan ----

struct CaptureArgs {
  std::string cube, bank, out = "meas", mask;
  bool identity = false;
  double photons = 0.0, read_sigma = 0.0;
  uint64_t seed = 0;
  int slm_rows = 0, dc_rows = -1;
  sb::ApertureConfig optics;
};

void run_capture(const CLI::App& app, const CaptureArgs& a, bool scan) {
  const sb::HsiCube cube = sb::load_cube(a.cube);
  const sb::SpectralFilterBank bank = sb::load_bank_csv(a.bank);
  const auto ap = make_aperture(a.mask, a.identity, a.optics, cube.grid);
  const auto ir = sb::IlluminantAndResponse::identity(cube.grid);
  const auto noise = make_noise(a.photons, a.read_sigma, a.seed);

  sb::MeasurementSet ms;
  if (scan) {
    ms = sb::full_scan_measurements(cube, ap, ir, bank, noise);
  } else {
    int dc = a.dc_rows;
    if (dc < 0) dc = a.slm_rows > 0 ? 16 : 0;  // hardware default dc band
    ms = sb::acquire_measurements(cube, ap, ir, bank, noise, a.slm_rows, dc);
  }
  sb::save_measurements(ms, a.out + ".hsc");
  write_config(app, a.out);
  std::cout << "images_captured=" << ms.images_captured << " filters=" << bank.count() << "\n";
}

// ---------------------------------------------------------------- train ----

struct TrainArgs {
  std::string data, labels, out = "model";
  double train_frac = 0.2, val_frac = 0.05, test_frac = 0.75;
  uint64_t seed = 0;
  // svm
  double reg = -1.0;
  int svm_epochs = 50, folds = 3;
  // mlp
  int q = 5, batch = 256, mlp_epochs = 60;
  std::string hidden = "64,32,16";
  double dropout = 0.1, lr = 1e-3;
  // matched
  std::string library;
  int pos_class = 1, neg_class = 0;
};

void run_train_svm(const CLI::App& app, const TrainArgs& a) {
  sb::LabeledSpectra data = load_training_data(a.data, a.labels, a.train_frac, a.val_frac,
                                               a.test_frac, a.seed);
  sb::SvmModel model;
  double reg = a.reg;
  if (a.reg < 0.0) {
    auto [best, m] =
        sb::svm_hyperparameter_search(data, sb::default_reg_grid(), a.folds, a.svm_epochs, a.seed);
    reg = best;
    model = std::move(m);
  } else {
    model = sb::train_svm(data, a.reg, a.svm_epochs, a.seed);
  }
  sb::save_svm(model, a.out + ".svm");
  sb::save_bank_csv(sb::extract_filters(model), a.out + "_bank.csv");
  write_config(app, a.out);
  std::cout << "reg=" << sb::format_double(reg)
            << " train_acc=" << sb::format_double(sb::svm_accuracy(model, data, sb::Split::Train));
  if (!data.indices_of(sb::Split::Test).empty())
    std::cout << " test_acc=" << sb::format_double(sb::svm_accuracy(model, data, sb::Split::Test));
  std::cout << "\n";
}

void run_train_mlp(const CLI::App& app, const TrainArgs& a) {
  sb::LabeledSpectra data = load_training_data(a.data, a.labels, a.train_frac, a.val_frac,
                                               a.test_frac, a.seed);
  sb::MlpConfig cfg;
  cfg.filters = a.q;
  cfg.hidden = parse_int_list(a.hidden);
  cfg.dropout = a.dropout;
  cfg.lr = a.lr;
  cfg.epochs = a.mlp_epochs;
  cfg.batch = a.batch;
  cfg.seed = a.seed;
  const sb::MlpModel model = sb::train_mlp(data, cfg);
  sb::save_mlp(model, a.out + ".mlp");
  sb::save_bank_csv(sb::extract_filters(model), a.out + "_bank.csv");
  write_config(app, a.out);
  std::cout << "q=" << a.q
            << " train_acc=" << sb::format_double(sb::mlp_accuracy(model, data, sb::Split::Train));
  if (!data.indices_of(sb::Split::Test).empty())
    std::cout << " test_acc=" << sb::format_double(sb::mlp_accuracy(model, data, sb::Split::Test));
  std::cout << "\n";
}

void run_train_matched(const CLI::App& app, const TrainArgs& a, double grid_min, double grid_max) {
  const auto rows = sb::load_csv(a.library);
  if (a.pos_class < 0 || a.neg_class < 0 || size_t(a.pos_class) >= rows.size() ||
      size_t(a.neg_class) >= rows.size() || a.pos_class == a.neg_class)
    throw Usage("matched filter needs two distinct library rows");
  const sb::WavelengthGrid grid(grid_min, grid_max, int(rows[0].size()));
  // Positive feature = looks like the positive class; the threshold head then
  // assigns label 1 there.
  const sb::Spectrum sp(grid, rows[size_t(a.pos_class)]);
  const sb::Spectrum sn(grid, rows[size_t(a.neg_class)]);
  sb::save_bank_csv(sb::matched_filter(sp, sn), a.out + "_bank.csv");
  write_config(app, a.out);
  std::cout << "wrote " << a.out << "_bank.csv\n";
}

// -------------------------------------------------------------- extract ----

void run_extract(const CLI::App& app, const std::string& model_path, const std::string& out) {
  const auto [kv, blob] = sb::load_model_file(model_path);
  (void)blob;
  const std::string type = sb::kv_get(kv, "type");
  sb::SpectralFilterBank bank;
  if (type == "svm")
    bank = sb::extract_filters(sb::load_svm(model_path));
  else if (type == "mlp")
    bank = sb::extract_filters(sb::load_mlp(model_path));
  else
    throw Usage("unknown model type '" + type + "'");
  sb::save_bank_csv(bank, out + "_bank.csv");
  write_config(app, out);
  std::cout << "wrote " << out << "_bank.csv (" << bank.count() << " filters)\n";
}

// ----------------------------------------------------------------- plan ----

void run_plan(const CLI::App& app, const std::string& bank_path, int dc_rows,
              const std::string& out) {
  const auto bank = sb::load_bank_csv(bank_path);
  const auto plan = sb::plan_measurements(bank, dc_rows);
  std::ostringstream text;
  text << "filters: " << bank.count() << "\n";
  text << "images_captured: " << plan.images_captured << "\n";
  text << "dc_frame: " << (plan.dc_frame ? 1 : 0) << "\n";
  for (int k = 0; k < bank.count(); ++k)
    text << "filter_" << k << "_frames: " << (plan.needs_negative[size_t(k)] ? 2 : 1) << "\n";
  std::cout << text.str();
  if (!out.empty()) {
    std::ofstream f(out + ".txt", std::ios::trunc);
    if (!f) throw sb::IoError("cannot write " + out + ".txt");
    f << text.str();
    write_config(app, out);
  }
}

// ------------------------------------------------------------- classify ----

struct ClassifyArgs {
  std::string measurements, head = "svm", model, out = "pred";
  double threshold = 0.0, floor = -1.0;
};

void run_classify(const CLI::App& app, const ClassifyArgs& a) {
  const sb::MeasurementSet ms = sb::load_measurements(a.measurements);
  const sb::FeatureImageSet f = sb::normalize_features(ms, a.floor);

  sb::ClassificationResult res;
  if (a.head == "svm") {
    if (a.model.empty()) throw Usage("--model required for the svm head");
    res = sb::classify_pixels(f, sb::load_svm(a.model));
  } else if (a.head == "mlp") {
    if (a.model.empty()) throw Usage("--model required for the mlp head");
    res = sb::classify_pixels(f, sb::load_mlp(a.model));
  } else if (a.head == "threshold") {
    res = sb::classify_threshold(f, a.threshold);
  } else {
    throw Usage("head must be svm, mlp, or threshold");
  }

  sb::save_labels(res.labels, a.out + ".lbl");
  sb::save_score_map(res.scores, a.out + "_scores.hsc");
  sb::save_pgm(label_preview(res.labels), a.out + ".pgm");
  write_config(app, a.out);

  size_t valid = 0;
  for (auto v : f.valid) valid += v;
  std::cout << "classified " << valid << "/" << f.valid.size() << " pixels, "
            << res.scores.classes() << " classes, images_captured=" << f.images_captured << "\n";
}

// ------------------------------------------------------- evaluate / roc ----

void run_evaluate(const CLI::App& app, const std::string& pred_path, const std::string& truth_path,
                  int images_captured, const std::string& out) {
  const sb::LabelMap pred = sb::load_labels(pred_path);
  const sb::LabelMap truth = sb::load_labels(truth_path);
  sb::EvalReport rep = sb::confusion_and_accuracy(pred, truth);
  rep.images_captured = images_captured;
  sb::save_eval_report(rep, out);
  write_config(app, out);
  std::cout << "accuracy=" << sb::format_double(rep.accuracy) << " pixels=" << rep.pixels << "\n";
}

void run_roc(const CLI::App& app, const std::string& scores_path, const std::string& pred_path,
             const std::string& truth_path, int positive, const std::string& out) {
  const sb::ScoreMap scores = score_map_from_cube(sb::load_cube(scores_path));
  const sb::LabelMap pred = sb::load_labels(pred_path);
  const sb::LabelMap truth = sb::load_labels(truth_path);
  const sb::RocResult roc = sb::roc_curve(scores, pred, truth, positive);
  sb::save_roc_csv(roc.points, out + "_roc.csv");
  write_config(app, out);
  std::cout << "auc=" << sb::format_double(roc.auc) << " points=" << roc.points.size() << "\n";
}

// ---------------------------------------------------------------- sweep ----

struct SweepArgs {
  std::string data, labels, q_list = "1,3,5,10,20", hidden = "64,32,16", out = "sweep";
  double margin = 0.01, dropout = 0.1, lr = 1e-3;
  double train_frac = 0.2, val_frac = 0.05, test_frac = 0.75;
  int epochs = 60, batch = 256;
  uint64_t seed = 0;
};

void run_sweep(const CLI::App& app, const SweepArgs& a) {
  sb::LabeledSpectra data = load_training_data(a.data, a.labels, a.train_frac, a.val_frac,
                                               a.test_frac, a.seed);
  sb::MlpConfig cfg;
  cfg.hidden = parse_int_list(a.hidden);
  cfg.dropout = a.dropout;
  cfg.lr = a.lr;
  cfg.epochs = a.epochs;
  cfg.batch = a.batch;
  cfg.seed = a.seed;
  const sb::SweepResult sweep =
      sb::sweep_filter_count(data, parse_int_list(a.q_list), cfg, a.margin);
  sb::save_sweep_csv(sweep, a.out + ".csv");
  write_config(app, a.out);
  std::cout << "knee_q=" << sweep.knee_q
            << " max_accuracy=" << sb::format_double(sweep.max_accuracy) << "\n";
  for (const auto& p : sweep.points) {
    std::cout << "  q=" << p.q;
    if (p.ok)
      std::cout << " acc=" << sb::format_double(p.accuracy) << "\n";
    else
      std::cout << " failed: " << p.error << "\n";
  }
}

// ------------------------------------------------------- calibrate / mtf ----

struct CalibrateArgs {
  std::string out = "calib", mask, lasers = "635,850", validate = "780,830";
  sb::ApertureConfig optics;
  double grid_min = 600.0, grid_max = 900.0;
  int bands = 100, band = -1, spokes = 36, star_size = 512;
  double nsr = 1e-3, cal_nsr = 1e-2, noise_frac = 0.0;
  uint64_t seed = 0;
};

sb::Spectrum noisy_capture(const sb::HsiCube& scene, const sb::CodedApertureModel& ap,
                           const sb::IlluminantAndResponse& ir, double frac, uint64_t seed) {
  sb::Spectrum cap = sb::rainbow_plane_spectrum(scene, ap, ir);
  if (frac > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, frac);
    double peak = 0.0;
    for (double v : cap.values) peak = std::max(peak, v);
    for (auto& v : cap.values) v = std::max(0.0, v + peak * g(rng));
  }
  return cap;
}

void run_calibrate(const CLI::App& app, const CalibrateArgs& a) {
  const sb::WavelengthGrid grid(a.grid_min, a.grid_max, a.bands);
  const auto mask = a.mask.empty() ? sb::default_aperture_mask() : sb::load_pbm(a.mask);
  const auto ap = sb::build_aperture_model(mask, a.optics, grid);
  const auto ir = sb::IlluminantAndResponse::identity(grid);

  sb::CalibrationReport rep;

  // Spectral code from a one-band flat field.
  const int code_band = a.bands / 2;
  rep.estimated_code =
      sb::estimate_code(sb::rainbow_plane_spectrum(sb::single_band_scene(grid, code_band, 8, 8),
                                                   ap, ir));

  // Wavelength mapping from two known lasers.
  std::vector<std::pair<double, sb::Spectrum>> caps;
  uint64_t snum = 0;
  for (double nm : parse_list(a.lasers))
    caps.emplace_back(nm, noisy_capture(sb::laser_scene(grid, nm, 8, 8), ap, ir, a.noise_frac,
                                        sb::mix_seed(a.seed, snum++)));
  if (caps.size() != 2) throw Usage("--lasers needs exactly two wavelengths");
  rep.mapping = sb::calibrate_wavelengths(caps, rep.estimated_code, a.cal_nsr);
  std::cout << "mapping: lambda(i) = " << sb::format_double(rep.mapping.intercept) << " + "
            << sb::format_double(rep.mapping.slope) << " * i\n";

  if (!a.validate.empty()) {
    for (double nm : parse_list(a.validate)) {
      const auto cap = noisy_capture(sb::laser_scene(grid, nm, 8, 8), ap, ir, a.noise_frac,
                                     sb::mix_seed(a.seed, snum++));
      const int band = sb::locate_laser_band(cap, rep.estimated_code, a.cal_nsr);
      std::cout << "validate " << sb::format_double(nm) << " nm: band " << band << " -> "
                << sb::format_double(rep.mapping.wavelength_at(band)) << " nm (true index "
                << sb::format_double(grid.bands > 1 ? (nm - grid.lambda_min) / grid.delta : 0.0)
                << ")\n";
    }
  }

  // PSF from a simulated pinhole at one band, then star MTF before and after
  // deconvolution.
  const int band = a.band < 0 ? a.bands / 2 : a.band;
  if (band < 0 || band >= a.bands) throw Usage("--band out of range");
  const sb::Image& truth_psf = ap.psf[size_t(band)];
  sb::Image pinhole(64, 64);
  const int ox = (64 - truth_psf.width) / 2, oy = (64 - truth_psf.height) / 2;
  for (int y = 0; y < truth_psf.height; ++y)
    for (int x = 0; x < truth_psf.width; ++x)
      pinhole.at(x + ox, y + oy) = truth_psf.at(x, y);
  rep.psf_estimate = sb::estimate_psf(pinhole);

  const sb::Image star = sb::sector_star(a.star_size, a.spokes);
  const sb::Image blurred = sb::convolve_2d(star, rep.psf_estimate);
  const sb::MtfResult raw = sb::measure_mtf(blurred, a.spokes);
  const sb::Image sharp = sb::wiener_deconvolve(blurred, rep.psf_estimate, a.nsr);
  const sb::MtfResult dec = sb::measure_mtf(sharp, a.spokes);
  rep.mtf_raw = raw.curve;
  rep.mtf_deconvolved = dec.curve;
  rep.mtf30_raw = raw.mtf30;
  rep.mtf30_deconvolved = dec.mtf30;

  sb::save_calibration_report(rep, a.out);
  write_config(app, a.out);
  std::cout << "mtf30_raw=" << sb::format_double(raw.mtf30)
            << " mtf30_deconvolved=" << sb::format_double(dec.mtf30) << "\n";
}

void run_mtf(const CLI::App& app, const std::string& input, int spokes, int star_size,
             const std::string& out) {
  sb::Image img;
  if (input.empty()) {
    img = sb::sector_star(star_size, spokes);
  } else {
    const sb::HsiCube cube = sb::load_cube(input);
    img = sb::Image(cube.width, cube.height);
    std::copy(cube.band_plane(0), cube.band_plane(0) + img.size(), img.values.begin());
  }
  const sb::MtfResult res = sb::measure_mtf(img, spokes);
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < res.curve.frequency.size(); ++i)
    rows.push_back({res.curve.frequency[i], res.curve.contrast[i]});
  sb::save_csv(rows, out + "_mtf.csv", "frequency (lp/px), contrast");
  write_config(app, out);
  std::cout << "mtf30=" << sb::format_double(res.mtf30) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation workbench for a programmable spectral-filter camera"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; flags override it");
  int threads = 0;
  app.add_option("--threads", threads, "worker cap, 0 = hardware (env SPECBENCH_THREADS)");

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "synthesize a labeled scene cube");
  synth->add_option("--classes", sy.classes)->check(CLI::PositiveNumber);
  synth->add_option("--size", sy.size, "WxH");
  synth->add_option("--seed", sy.seed);
  synth->add_option("--patch", sy.patch)->check(CLI::PositiveNumber);
  synth->add_flag("--mixed", sy.mixed, "linear mixtures instead of pure patches");
  synth->add_option("--alpha-lo", sy.alpha_lo);
  synth->add_option("--alpha-hi", sy.alpha_hi);
  synth->add_option("--jitter", sy.jitter, "per-voxel variability sigma");
  synth->add_option("--grid-min", sy.grid_min);
  synth->add_option("--grid-max", sy.grid_max);
  synth->add_option("--bands", sy.bands)->check(CLI::PositiveNumber);
  synth->add_option("--out", sy.out);

  ImportArgs im;
  auto* import_raw = app.add_subcommand("import-raw", "wrap raw BSQ data as HSC1/LBL1");
  import_raw->add_option("--data", im.data)->required();
  import_raw->add_option("--width", im.width)->required();
  import_raw->add_option("--height", im.height)->required();
  import_raw->add_option("--bands", im.bands)->required();
  import_raw->add_option("--dtype", im.dtype, "f32 | u16");
  import_raw->add_option("--wl-min", im.wl_min);
  import_raw->add_option("--wl-max", im.wl_max);
  import_raw->add_option("--labels", im.labels, "raw u16 label raster");
  import_raw->add_option("--classes", im.classes);
  import_raw->add_option("--ignore", im.ignore, "label value mapped to unlabeled");
  import_raw->add_option("--label-offset", im.label_offset);
  import_raw->add_option("--out", im.out);

  CaptureArgs ca;
  auto* capture = app.add_subcommand("capture", "optical acquisition of a scene with a bank");
  auto* scan = app.add_subcommand("scan", "band-by-band scan of a scene, digital projection");
  for (auto* cmd : {capture, scan}) {
    cmd->add_option("--cube", ca.cube)->required();
    cmd->add_option("--bank", ca.bank)->required();
    cmd->add_option("--out", ca.out);
    cmd->add_option("--noise-photons", ca.photons, "total budget; 0 = noiseless");
    cmd->add_option("--read-sigma", ca.read_sigma);
    cmd->add_option("--seed", ca.seed);
    cmd->add_option("--mask", ca.mask, "PBM aperture mask; default built-in");
    cmd->add_flag("--identity-optics", ca.identity);
    cmd->add_option("--pitch", ca.optics.pitch_mm);
    cmd->add_option("--focal", ca.optics.focal_mm);
    cmd->add_option("--grooves", ca.optics.grooves_per_mm);
  }
  capture->add_option("--slm-rows", ca.slm_rows, "0 = ideal continuous SLM");
  capture->add_option("--dc-rows", ca.dc_rows, "-1 = 16 when quantized, else 0");

  TrainArgs tr;
  double matched_grid_min = 600.0, matched_grid_max = 900.0;
  auto* train = app.add_subcommand("train", "fit a classifier / build a bank");
  train->require_subcommand(1);
  auto* tsvm = train->add_subcommand("svm", "one-vs-all linear SVM");
  auto* tmlp = train->add_subcommand("mlp", "MLP with a spectral filter first layer");
  auto* tmatched = train->add_subcommand("matched", "two-class matched filter");
  for (auto* cmd : {tsvm, tmlp}) {
    cmd->add_option("--data", tr.data)->required();
    cmd->add_option("--labels", tr.labels)->required();
    cmd->add_option("--train-frac", tr.train_frac);
    cmd->add_option("--val-frac", tr.val_frac);
    cmd->add_option("--test-frac", tr.test_frac);
    cmd->add_option("--seed", tr.seed);
    cmd->add_option("--out", tr.out);
  }
  tsvm->add_option("--reg", tr.reg, "hinge regularizer; negative = grid search");
  tsvm->add_option("--epochs", tr.svm_epochs)->check(CLI::PositiveNumber);
  tsvm->add_option("--folds", tr.folds)->check(CLI::PositiveNumber);
  tmlp->add_option("--q", tr.q, "filter count")->check(CLI::PositiveNumber);
  tmlp->add_option("--hidden", tr.hidden);
  tmlp->add_option("--dropout", tr.dropout);
  tmlp->add_option("--lr", tr.lr);
  tmlp->add_option("--epochs", tr.mlp_epochs)->check(CLI::PositiveNumber);
  tmlp->add_option("--batch", tr.batch)->check(CLI::PositiveNumber);
  tmatched->add_option("--library", tr.library)->required();
  tmatched->add_option("--positive", tr.pos_class, "library row treated as label 1");
  tmatched->add_option("--negative", tr.neg_class);
  tmatched->add_option("--grid-min", matched_grid_min);
  tmatched->add_option("--grid-max", matched_grid_max);
  tmatched->add_option("--out", tr.out);

  std::string extract_model, extract_out = "extracted";
  auto* extract = app.add_subcommand("extract", "filter bank CSV from a trained model");
  extract->add_option("--model", extract_model)->required();
  extract->add_option("--out", extract_out);

  std::string plan_bank, plan_out;
  int plan_dc_rows = 16;
  auto* plan = app.add_subcommand("plan", "frame count for a bank");
  plan->add_option("--bank", plan_bank)->required();
  plan->add_option("--dc-rows", plan_dc_rows);
  plan->add_option("--out", plan_out);

  ClassifyArgs cl;
  auto* classify = app.add_subcommand("classify", "per-pixel inference from measurements");
  classify->add_option("--measurements", cl.measurements)->required();
  classify->add_option("--head", cl.head, "svm | mlp | threshold");
  classify->add_option("--model", cl.model);
  classify->add_option("--threshold", cl.threshold);
  classify->add_option("--floor", cl.floor, "validity floor; negative = 1e-6 * max sum");
  classify->add_option("--out", cl.out);

  std::string ev_pred, ev_truth, ev_out = "eval";
  int ev_images = 0;
  auto* evaluate = app.add_subcommand("evaluate", "confusion matrix and accuracy");
  evaluate->add_option("--pred", ev_pred)->required();
  evaluate->add_option("--truth", ev_truth)->required();
  evaluate->add_option("--images-captured", ev_images);
  evaluate->add_option("--out", ev_out);

  std::string roc_scores, roc_pred, roc_truth, roc_out = "roc";
  int roc_positive = 1;
  auto* roc = app.add_subcommand("roc", "binary ROC curve and AUC");
  roc->add_option("--scores", roc_scores)->required();
  roc->add_option("--pred", roc_pred)->required();
  roc->add_option("--truth", roc_truth)->required();
  roc->add_option("--positive", roc_positive);
  roc->add_option("--out", roc_out);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "accuracy vs filter count, knee point");
  sweep->add_option("--data", sw.data)->required();
  sweep->add_option("--labels", sw.labels)->required();
  sweep->add_option("--q", sw.q_list, "comma list, ascending");
  sweep->add_option("--margin", sw.margin);
  sweep->add_option("--hidden", sw.hidden);
  sweep->add_option("--dropout", sw.dropout);
  sweep->add_option("--lr", sw.lr);
  sweep->add_option("--epochs", sw.epochs)->check(CLI::PositiveNumber);
  sweep->add_option("--batch", sw.batch)->check(CLI::PositiveNumber);
  sweep->add_option("--train-frac", sw.train_frac);
  sweep->add_option("--val-frac", sw.val_frac);
  sweep->add_option("--test-frac", sw.test_frac);
  sweep->add_option("--seed", sw.seed);
  sweep->add_option("--out", sw.out);

  CalibrateArgs cb;
  auto* calibrate = app.add_subcommand("calibrate", "simulated calibration loop and report");
  calibrate->add_option("--mask", cb.mask);
  calibrate->add_option("--pitch", cb.optics.pitch_mm);
  calibrate->add_option("--focal", cb.optics.focal_mm);
  calibrate->add_option("--grooves", cb.optics.grooves_per_mm);
  calibrate->add_option("--grid-min", cb.grid_min);
  calibrate->add_option("--grid-max", cb.grid_max);
  calibrate->add_option("--bands", cb.bands)->check(CLI::PositiveNumber);
  calibrate->add_option("--lasers", cb.lasers, "two known nm, comma separated");
  calibrate->add_option("--validate", cb.validate, "extra lasers to localize");
  calibrate->add_option("--noise-frac", cb.noise_frac, "relative capture noise");
  calibrate->add_option("--seed", cb.seed);
  calibrate->add_option("--band", cb.band, "PSF band; -1 = center");
  calibrate->add_option("--spokes", cb.spokes)->check(CLI::PositiveNumber);
  calibrate->add_option("--star-size", cb.star_size)->check(CLI::PositiveNumber);
  calibrate->add_option("--nsr", cb.nsr);
  calibrate->add_option("--cal-nsr", cb.cal_nsr);
  calibrate->add_option("--out", cb.out);

  std::string mtf_input, mtf_out = "mtf";
  int mtf_spokes = 36, mtf_star = 256;
  auto* mtf = app.add_subcommand("mtf", "contrast vs frequency of an image plane");
  mtf->add_option("--input", mtf_input, "HSC1, band 0; empty = ideal star");
  mtf->add_option("--spokes", mtf_spokes)->check(CLI::PositiveNumber);
  mtf->add_option("--star-size", mtf_star)->check(CLI::PositiveNumber);
  mtf->add_option("--out", mtf_out);

  try {
    app.parse(argc, argv);
    if (threads > 0) sb::set_thread_count(threads);

    if (*synth) run_synth(app, sy);
    if (*import_raw) run_import(app, im);
    if (*capture) run_capture(app, ca, false);
    if (*scan) run_capture(app, ca, true);
    if (*tsvm) run_train_svm(app, tr);
    if (*tmlp) run_train_mlp(app, tr);
    if (*tmatched) run_train_matched(app, tr, matched_grid_min, matched_grid_max);
    if (*extract) run_extract(app, extract_model, extract_out);
    if (*plan) run_plan(app, plan_bank, plan_dc_rows, plan_out);
    if (*classify) run_classify(app, cl);
    if (*evaluate) run_evaluate(app, ev_pred, ev_truth, ev_images, ev_out);
    if (*roc) run_roc(app, roc_scores, roc_pred, roc_truth, roc_positive, roc_out);
    if (*sweep) run_sweep(app, sw);
    if (*calibrate) run_calibrate(app, cb);
    if (*mtf) run_mtf(app, mtf_input, mtf_spokes, mtf_star, mtf_out);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // --help lands here with success
  } catch (const Usage& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sb::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
