#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specbench/capture.hpp"
#include "specbench/mlp.hpp"
#include "specbench/svm.hpp"

namespace specbench {

// Sum-normalized feature planes I_k / I_sum with a per-pixel validity mask.
// Invalid pixels (sum below the floor) keep a zero placeholder in the planes;
// the mask, not the value, is authoritative.
struct FeatureImageSet {
  std::vector<Image> features;  // Q planes
  std::vector<uint8_t> valid;   // W*H, 1 = usable
  int width = 0;
  int height = 0;
  int images_captured = 0;

  int count() const { return int(features.size()); }
  bool is_valid(int x, int y) const { return valid[size_t(y) * width + x] != 0; }
};

// floor <= 0 picks the default 1e-6 * max(I_sum).
FeatureImageSet normalize_features(const MeasurementSet& ms, double floor = -1.0);

// Per-pixel class scores, one plane per class.
struct ScoreMap {
  int width = 0;
  int height = 0;
  std::vector<Image> planes;

  int classes() const { return int(planes.size()); }
};

struct ClassificationResult {
  ScoreMap scores;
  LabelMap labels;  // argmax, ties to the lower index; invalid pixels -> kInvalidLabel
};

// SVM head: score_k = F_k + c_k. The bank the features came from must be the
// model's own hyperplanes, so the optical capture already applied W.
ClassificationResult classify_pixels(const FeatureImageSet& f, const SvmModel& model);

// MLP head: first-layer bias plus the remaining layers on top of the features.
ClassificationResult classify_pixels(const FeatureImageSet& f, const MlpModel& model);

// Two-class threshold on a single feature: scores {thr - F, F - thr}.
ClassificationResult classify_threshold(const FeatureImageSet& f, double threshold);

// Scan baseline: one capture per band (single-band profiles, budget split
// across B frames), bands reassembled and projected digitally onto the bank.
// noise.peak_photons is the total budget, matching acquire_measurements.
MeasurementSet full_scan_measurements(const HsiCube& cube, const CodedApertureModel& ap,
                                      const IlluminantAndResponse& ir,
                                      const SpectralFilterBank& bank,
                                      const std::optional<NoiseModel>& noise = std::nullopt);

FeatureImageSet full_scan_then_project(const HsiCube& cube, const CodedApertureModel& ap,
                                       const IlluminantAndResponse& ir,
                                       const SpectralFilterBank& bank,
                                       const std::optional<NoiseModel>& noise = std::nullopt,
                                       double floor = -1.0);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

struct RocResult {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// TPR/FPR over every distinct threshold, AUC by trapezoid. truth01 holds 0/1.
RocResult roc_curve(const std::vector<double>& scores, const std::vector<uint8_t>& truth01);

// Binary convenience: score = s[positive] - s[other] on pixels that are valid
// in the score map and labeled in truth.
RocResult roc_curve(const ScoreMap& scores, const LabelMap& pred, const LabelMap& truth,
                    int positive_class = 1);

struct EvalReport {
  int classes = 0;
  std::vector<int64_t> confusion;      // K*K row-major, rows = truth
  std::vector<double> confusion_norm;  // rows divided by their pixel counts
  std::vector<double> per_class;       // recall per truth class
  double accuracy = 0.0;
  int64_t pixels = 0;
  int images_captured = 0;
  double auc = -1.0;  // set when a binary ROC was attached
  std::vector<RocPoint> roc;
};

// Pixels invalid on either side are excluded; errors if nothing remains.
EvalReport confusion_and_accuracy(const LabelMap& pred, const LabelMap& truth);

struct SweepPoint {
  int q = 0;
  double accuracy = 0.0;
  bool ok = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  int knee_q = 0;
  double max_accuracy = 0.0;
};

// Trains one MLP per filter count and records test accuracy. The knee is the
// smallest Q within margin (relative) of the best accuracy over the list.
// A training failure marks its point and the sweep moves on.
SweepResult sweep_filter_count(const LabeledSpectra& data, const std::vector<int>& q_list,
                               MlpConfig cfg, double margin = 0.01);

// base + ".txt" (key: value plus matrices) and base + "_confusion.csv".
void save_eval_report(const EvalReport& report, const std::string& base);
void save_roc_csv(const std::vector<RocPoint>& points, const std::string& path);
void save_sweep_csv(const SweepResult& sweep, const std::string& path);

// Score planes as an HSC1 cube on a placeholder 1..K grid, plus per-plane
// graymap previews when preview_base is non-empty.
void save_score_map(const ScoreMap& scores, const std::string& path,
                    const std::string& preview_base = "");

}  // namespace specbench
