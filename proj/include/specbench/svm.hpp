#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "specbench/dataset.hpp"
#include "specbench/filterbank.hpp"

namespace specbench {

// One-vs-all linear SVM. Decision: argmax_k W_k . x + c_k, ties to the lower
// class index.
struct SvmModel {
  std::vector<std::vector<double>> w;  // K x B
  std::vector<double> c;               // K
  double reg = 0.0;

  int classes() const { return int(w.size()); }
  int bands() const { return w.empty() ? 0 : int(w[0].size()); }
};

// Per-hyperplane objective of the one-vs-all problem:
// (1/N) sum max(0, 1 - y~ (w.x + c)) + reg ||w||^2, y~ in {-1,+1}.
double svm_binary_objective(const std::vector<double>& w, double c, double reg,
                            const LabeledSpectra& data, const std::vector<size_t>& rows,
                            int positive_class);

// Deterministic per-sample subgradient descent, one hyperplane per class.
// Features are internally rescaled to mean unit norm for a usable fixed step
// schedule, then the hyperplanes are mapped back. The returned iterate per
// class is the epoch checkpoint with the lowest full training objective, so
// an optional trace of those checkpoints is non-increasing.
SvmModel train_svm(const LabeledSpectra& data, double reg, int epochs, uint64_t seed,
                   std::vector<std::vector<double>>* objective_trace = nullptr);

int svm_predict(const SvmModel& model, const double* x);
double svm_accuracy(const SvmModel& model, const LabeledSpectra& data, Split split);

// Mean k-fold cross-validation accuracy per candidate reg; ties break toward
// the stronger regularizer. Returns the winning reg and a model retrained on
// the full train split.
std::pair<double, SvmModel> svm_hyperparameter_search(const LabeledSpectra& data,
                                                      const std::vector<double>& reg_grid,
                                                      int folds, int epochs, uint64_t seed);

// 6 log-spaced points, 1e-5 .. 1.
std::vector<double> default_reg_grid();

SpectralFilterBank extract_filters(const SvmModel& model);

// key=value header + f32 blob (w rows then c).
void save_svm(const SvmModel& model, const std::string& path);
SvmModel load_svm(const std::string& path);

}  // namespace specbench
