#include "specbench/classify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "specbench/common.hpp"
#include "specbench/io.hpp"
#include "specbench/threads.hpp"

namespace specbench {
namespace {

void check_features(const FeatureImageSet& f) {
  if (f.count() == 0 || f.width <= 0 || f.height <= 0)
    throw ValidationError("empty feature set");
  if (f.valid.size() != size_t(f.width) * f.height)
    throw ValidationError("validity mask size mismatch");
  for (const auto& img : f.features)
    if (img.width != f.width || img.height != f.height)
      throw ValidationError("feature plane size mismatch");
}

int argmax_lowest(const double* s, int k) {
  int best = 0;
  for (int i = 1; i < k; ++i)
    if (s[i] > s[best]) best = i;
  return best;
}

ClassificationResult make_result(const FeatureImageSet& f, int k) {
  ClassificationResult r;
  r.scores.width = f.width;
  r.scores.height = f.height;
  r.scores.planes.assign(size_t(k), Image(f.width, f.height));
  r.labels = LabelMap(f.width, f.height, k);
  return r;
}

}  // namespace

FeatureImageSet normalize_features(const MeasurementSet& ms, double floor) {
  const Image& sum = ms.sum_image;
  if (sum.width <= 0 || sum.height <= 0 || sum.size() != size_t(sum.width) * sum.height)
    throw ValidationError("malformed sum image");
  if (ms.filter_images.empty()) throw ValidationError("measurement set has no feature images");
  for (const auto& img : ms.filter_images)
    if (img.width != sum.width || img.height != sum.height)
      throw ValidationError("feature image size does not match sum image");

  if (floor <= 0.0) floor = 1e-6 * std::max(sum.max_value(), 0.0);

  FeatureImageSet f;
  f.width = sum.width;
  f.height = sum.height;
  f.images_captured = ms.images_captured;
  f.valid.assign(sum.size(), 0);
  f.features.assign(ms.filter_images.size(), Image(sum.width, sum.height));

  for (size_t i = 0; i < sum.size(); ++i) {
    const double s = sum.values[i];
    // s > 0 guards the degenerate floor = 0 case (an all-dark capture).
    if (!is_finite(s) || s < floor || !(s > 0.0)) continue;
    bool ok = true;
    for (size_t k = 0; k < f.features.size() && ok; ++k)
      ok = is_finite(ms.filter_images[k].values[i] / s);
    if (!ok) continue;
    f.valid[i] = 1;
    for (size_t k = 0; k < f.features.size(); ++k)
      f.features[k].values[i] = ms.filter_images[k].values[i] / s;
  }
  return f;
}

ClassificationResult classify_pixels(const FeatureImageSet& f, const SvmModel& model) {
  check_features(f);
  const int k = model.classes();
  if (k < 2) throw ValidationError("SVM model has fewer than two classes");
  if (f.count() != k) throw ValidationError("feature count does not match SVM class count");

  ClassificationResult r = make_result(f, k);
  std::vector<double> s(static_cast<size_t>(k));
  for (size_t i = 0; i < f.valid.size(); ++i) {
    if (!f.valid[i]) {
      r.labels.labels[i] = kInvalidLabel;
      continue;
    }
    for (int c = 0; c < k; ++c) {
      s[size_t(c)] = f.features[size_t(c)].values[i] + model.c[size_t(c)];
      r.scores.planes[size_t(c)].values[i] = s[size_t(c)];
    }
    r.labels.labels[i] = uint16_t(argmax_lowest(s.data(), k));
  }
  return r;
}

ClassificationResult classify_pixels(const FeatureImageSet& f, const MlpModel& model) {
  check_features(f);
  if (f.count() != model.filter_count())
    throw ValidationError("feature count does not match MLP filter width");
  const int k = model.classes();

  ClassificationResult r = make_result(f, k);
  const int w = f.width;
  parallel_for(f.height, [&](int64_t y0, int64_t y1) {
    Eigen::VectorXd feat(f.count());
    for (int64_t y = y0; y < y1; ++y)
      for (int x = 0; x < w; ++x) {
        const size_t i = size_t(y) * w + x;
        if (!f.valid[i]) {
          r.labels.labels[i] = kInvalidLabel;
          continue;
        }
        for (int q = 0; q < f.count(); ++q) feat(q) = f.features[size_t(q)].values[i];
        const Eigen::VectorXd z = mlp_tail_logits(model, feat);
        for (int c = 0; c < k; ++c) r.scores.planes[size_t(c)].values[i] = z(c);
        r.labels.labels[i] = uint16_t(argmax_lowest(z.data(), k));
      }
  });
  return r;
}

ClassificationResult classify_threshold(const FeatureImageSet& f, double threshold) {
  check_features(f);
  if (f.count() != 1) throw ValidationError("threshold head needs exactly one feature");
  if (!is_finite(threshold)) throw ValidationError("non-finite threshold");

  ClassificationResult r = make_result(f, 2);
  for (size_t i = 0; i < f.valid.size(); ++i) {
    if (!f.valid[i]) {
      r.labels.labels[i] = kInvalidLabel;
      continue;
    }
    const double d = f.features[0].values[i] - threshold;
    r.scores.planes[0].values[i] = -d;
    r.scores.planes[1].values[i] = d;
    r.labels.labels[i] = d > 0.0 ? 1 : 0;
  }
  return r;
}

MeasurementSet full_scan_measurements(const HsiCube& cube, const CodedApertureModel& ap,
                                      const IlluminantAndResponse& ir,
                                      const SpectralFilterBank& bank,
                                      const std::optional<NoiseModel>& noise) {
  validate_bank(bank);
  validate_cube(cube);
  if (bank.bands() != cube.grid.bands)
    throw ValidationError("filter bank band count does not match cube");
  if (!(ir.response.grid == cube.grid)) throw ValidationError("response grid mismatch");

  const HsiCube cube_hat = apply_coded_blur(cube, ap);
  const int bands = cube.grid.bands;
  const int w = cube.width, h = cube.height;
  const double dl = cube.grid.integration_weight();
  const size_t plane = size_t(w) * h;

  double scale = 0.0;
  if (noise) {
    if (!(noise->peak_photons > 0.0) || noise->read_sigma < 0.0)
      throw ValidationError("bad noise model");
    scale = noise->peak_photons / bands / sum_image_peak(cube_hat, ir);
  }

  MeasurementSet ms;
  ms.filter_bank_id = bank.id;
  ms.images_captured = bands;
  ms.noise = noise;
  ms.sum_image = Image(w, h);
  for (int k = 0; k < bank.count(); ++k) {
    ms.filter_images.emplace_back(w, h);
    ms.gains.push_back(1.0);  // projection happens digitally, no split scale
    ms.filter_ids.push_back(bank.id + "/" + std::to_string(k));
  }

  // One frame per band: the single-band SLM profile passes H_b * response_b
  // * delta_lambda and nothing else.
  for (int b = 0; b < bands; ++b) {
    Image img(w, h);
    const double* src = cube_hat.band_plane(b);
    const double gain = ir.response.values[size_t(b)] * dl;
    for (size_t i = 0; i < plane; ++i) img.values[i] = src[i] * gain;
    if (noise)
      add_sensor_noise(img, scale, noise->read_sigma, mix_seed(noise->seed, uint64_t(b)));

    for (size_t i = 0; i < plane; ++i) ms.sum_image.values[i] += img.values[i];
    for (int k = 0; k < bank.count(); ++k) {
      const double dk = bank.filters[size_t(k)][size_t(b)];
      if (dk == 0.0) continue;
      double* dst = ms.filter_images[size_t(k)].values.data();
      for (size_t i = 0; i < plane; ++i) dst[i] += img.values[i] * dk;
    }
  }
  return ms;
}

FeatureImageSet full_scan_then_project(const HsiCube& cube, const CodedApertureModel& ap,
                                       const IlluminantAndResponse& ir,
                                       const SpectralFilterBank& bank,
                                       const std::optional<NoiseModel>& noise, double floor) {
  return normalize_features(full_scan_measurements(cube, ap, ir, bank, noise), floor);
}

RocResult roc_curve(const std::vector<double>& scores, const std::vector<uint8_t>& truth01) {
  if (scores.empty() || scores.size() != truth01.size())
    throw ValidationError("score/truth size mismatch");
  int64_t pos = 0, neg = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!is_finite(scores[i])) throw ValidationError("non-finite score");
    if (truth01[i] > 1) throw ValidationError("truth labels must be 0 or 1");
    ++(truth01[i] ? pos : neg);
  }
  if (pos == 0 || neg == 0) throw ValidationError("single-class truth: ROC undefined");

  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t(0));
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  RocResult r;
  r.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  int64_t tp = 0, fp = 0;
  size_t i = 0;
  while (i < order.size()) {
    const double thr = scores[order[i]];
    while (i < order.size() && scores[order[i]] == thr) {
      ++(truth01[order[i]] ? tp : fp);
      ++i;
    }
    r.points.push_back({double(fp) / double(neg), double(tp) / double(pos), thr});
  }
  for (size_t j = 1; j < r.points.size(); ++j)
    r.auc += (r.points[j].fpr - r.points[j - 1].fpr) *
             (r.points[j].tpr + r.points[j - 1].tpr) * 0.5;
  return r;
}

RocResult roc_curve(const ScoreMap& scores, const LabelMap& pred, const LabelMap& truth,
                    int positive_class) {
  if (scores.classes() != 2) throw ValidationError("ROC needs a two-class score map");
  if (positive_class != 0 && positive_class != 1)
    throw ValidationError("positive class must be 0 or 1");
  if (scores.width != truth.width || scores.height != truth.height ||
      pred.width != truth.width || pred.height != truth.height)
    throw ValidationError("map dimensions differ");

  std::vector<double> s;
  std::vector<uint8_t> t;
  for (size_t i = 0; i < truth.labels.size(); ++i) {
    if (truth.labels[i] == kInvalidLabel || pred.labels[i] == kInvalidLabel) continue;
    if (truth.labels[i] > 1) throw ValidationError("binary truth required");
    s.push_back(scores.planes[size_t(positive_class)].values[i] -
                scores.planes[size_t(1 - positive_class)].values[i]);
    t.push_back(truth.labels[i] == positive_class ? 1 : 0);
  }
  return roc_curve(s, t);
}

EvalReport confusion_and_accuracy(const LabelMap& pred, const LabelMap& truth) {
  if (pred.width != truth.width || pred.height != truth.height)
    throw ValidationError("prediction and truth dimensions differ");
  const int k = std::max(pred.num_classes, truth.num_classes);
  if (k < 1) throw ValidationError("no classes declared");

  EvalReport rep;
  rep.classes = k;
  rep.confusion.assign(size_t(k) * k, 0);
  for (size_t i = 0; i < truth.labels.size(); ++i) {
    const uint16_t p = pred.labels[i], t = truth.labels[i];
    if (p == kInvalidLabel || t == kInvalidLabel) continue;
    if (p >= k || t >= k) throw ValidationError("label out of declared range");
    ++rep.confusion[size_t(t) * k + p];
    ++rep.pixels;
  }
  if (rep.pixels == 0) throw ValidationError("no valid pixels to evaluate");

  rep.confusion_norm.assign(size_t(k) * k, 0.0);
  rep.per_class.assign(size_t(k), 0.0);
  int64_t trace = 0;
  for (int t = 0; t < k; ++t) {
    int64_t row = 0;
    for (int p = 0; p < k; ++p) row += rep.confusion[size_t(t) * k + p];
    trace += rep.confusion[size_t(t) * k + t];
    if (row == 0) continue;
    for (int p = 0; p < k; ++p)
      rep.confusion_norm[size_t(t) * k + p] =
          double(rep.confusion[size_t(t) * k + p]) / double(row);
    rep.per_class[size_t(t)] = double(rep.confusion[size_t(t) * k + t]) / double(row);
  }
  rep.accuracy = double(trace) / double(rep.pixels);
  return rep;
}

SweepResult sweep_filter_count(const LabeledSpectra& data, const std::vector<int>& q_list,
                               MlpConfig cfg, double margin) {
  validate_spectra(data);
  if (q_list.empty()) throw ValidationError("empty filter-count list");
  for (size_t i = 0; i < q_list.size(); ++i) {
    if (q_list[i] < 1) throw ValidationError("filter counts must be positive");
    if (i > 0 && q_list[i] <= q_list[i - 1])
      throw ValidationError("filter counts must be sorted ascending");
  }
  if (!(margin >= 0.0 && margin < 1.0)) throw ValidationError("margin must be in [0,1)");
  if (data.indices_of(Split::Test).empty())
    throw ValidationError("filter-count sweep needs a test split");

  SweepResult out;
  for (int q : q_list) {
    SweepPoint pt;
    pt.q = q;
    cfg.filters = q;
    try {
      const MlpModel m = train_mlp(data, cfg);
      pt.accuracy = mlp_accuracy(m, data, Split::Test);
      pt.ok = true;
    } catch (const Error& e) {
      pt.error = e.what();
    }
    out.points.push_back(std::move(pt));
  }

  double best = -1.0;
  for (const auto& p : out.points)
    if (p.ok) best = std::max(best, p.accuracy);
  if (best < 0.0) throw ValidationError("every filter count failed to train");
  out.max_accuracy = best;
  for (const auto& p : out.points)
    if (p.ok && p.accuracy >= (1.0 - margin) * best) {
      out.knee_q = p.q;
      break;
    }
  return out;
}

void save_eval_report(const EvalReport& rep, const std::string& base) {
  const int k = rep.classes;
  if (k < 1 || rep.confusion.size() != size_t(k) * k)
    throw ValidationError("malformed evaluation report");

  std::ofstream out(base + ".txt", std::ios::trunc);
  if (!out) throw IoError("cannot write " + base + ".txt");
  out << "classes: " << k << "\n";
  out << "pixels: " << rep.pixels << "\n";
  out << "images_captured: " << rep.images_captured << "\n";
  out << "accuracy: " << format_double(rep.accuracy) << "\n";
  if (rep.auc >= 0.0) out << "auc: " << format_double(rep.auc) << "\n";
  out << "per_class_accuracy:";
  for (double v : rep.per_class) out << " " << format_double(v);
  out << "\n";
  out << "confusion_counts:\n";
  for (int t = 0; t < k; ++t) {
    out << " ";
    for (int p = 0; p < k; ++p) out << " " << rep.confusion[size_t(t) * k + p];
    out << "\n";
  }
  out << "confusion_row_normalized:\n";
  for (int t = 0; t < k; ++t) {
    out << " ";
    for (int p = 0; p < k; ++p)
      out << " " << format_double(rep.confusion_norm[size_t(t) * k + p]);
    out << "\n";
  }
  out.flush();
  if (!out) throw IoError("failed writing " + base + ".txt");

  std::vector<std::vector<double>> rows(static_cast<size_t>(k), std::vector<double>(static_cast<size_t>(k)));
  for (int t = 0; t < k; ++t)
    for (int p = 0; p < k; ++p) rows[size_t(t)][size_t(p)] = double(rep.confusion[size_t(t) * k + p]);
  save_csv(rows, base + "_confusion.csv", "confusion counts, rows = truth");
  if (!rep.roc.empty()) save_roc_csv(rep.roc, base + "_roc.csv");
}

void save_roc_csv(const std::vector<RocPoint>& points, const std::string& path) {
  std::vector<std::vector<double>> rows;
  for (const auto& p : points) rows.push_back({p.fpr, p.tpr, p.threshold});
  save_csv(rows, path, "fpr,tpr,threshold");
}

void save_sweep_csv(const SweepResult& sweep, const std::string& path) {
  std::vector<std::vector<double>> rows;
  for (const auto& p : sweep.points)
    rows.push_back({double(p.q), p.accuracy, p.ok ? 1.0 : 0.0});
  save_csv(rows, path,
           "q,accuracy,trained; knee_q=" + std::to_string(sweep.knee_q) +
               " max_accuracy=" + format_double(sweep.max_accuracy));
}

void save_score_map(const ScoreMap& scores, const std::string& path,
                    const std::string& preview_base) {
  const int k = scores.classes();
  if (k < 1 || scores.width <= 0 || scores.height <= 0)
    throw ValidationError("empty score map");
  // Placeholder grid 1..k: HSC1 wants positive increasing centers.
  HsiCube cube(scores.width, scores.height, k > 1 ? WavelengthGrid(1.0, double(k), k)
                                                  : WavelengthGrid(1.0, 1.0, 1));
  for (int c = 0; c < k; ++c) {
    const Image& plane = scores.planes[size_t(c)];
    if (plane.width != scores.width || plane.height != scores.height)
      throw ValidationError("score plane size mismatch");
    std::copy(plane.values.begin(), plane.values.end(), cube.band_plane(c));
  }
  save_cube(cube, path);
  if (!preview_base.empty())
    for (int c = 0; c < k; ++c)
      save_pgm(scores.planes[size_t(c)], preview_base + "_class" + std::to_string(c) + ".pgm");
}

}  // namespace specbench
