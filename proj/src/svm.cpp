#include "specbench/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "specbench/common.hpp"
#include "specbench/io.hpp"

namespace specbench {
namespace {

double dot(const std::vector<double>& w, const double* x) {
  double s = 0.0;
  for (size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
  return s;
}

}  // namespace

double svm_binary_objective(const std::vector<double>& w, double c, double reg,
                            const LabeledSpectra& data, const std::vector<size_t>& rows,
                            int positive_class) {
  if (rows.empty()) throw ValidationError("objective over empty sample set");
  double hinge = 0.0;
  for (size_t i : rows) {
    const double yt = data.y[i] == positive_class ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - yt * (dot(w, data.row(i)) + c));
  }
  double wn = 0.0;
  for (double v : w) wn += v * v;
  return hinge / double(rows.size()) + reg * wn;
}

SvmModel train_svm(const LabeledSpectra& data, double reg, int epochs, uint64_t seed,
                   std::vector<std::vector<double>>* objective_trace) {
  validate_spectra(data);
  if (!(reg >= 0.0)) throw ValidationError("regularization must be non-negative");
  if (epochs < 1) throw ValidationError("need at least one epoch");
  const std::vector<size_t> rows = data.indices_of(Split::Train);
  if (rows.empty()) throw ValidationError("empty train split");

  std::vector<bool> present(size_t(data.num_classes), false);
  for (size_t i : rows) present[data.y[i]] = true;
  if (std::count(present.begin(), present.end(), true) < 2)
    throw ValidationError("training needs at least two classes in the train split");

  // Rescale features to mean unit norm so one step schedule fits any data.
  const int b = data.bands;
  double mean_norm = 0.0;
  for (size_t i : rows) {
    double n2 = 0.0;
    for (int j = 0; j < b; ++j) n2 += data.row(i)[j] * data.row(i)[j];
    mean_norm += std::sqrt(n2);
  }
  mean_norm /= double(rows.size());
  if (!(mean_norm > 0.0)) throw ValidationError("train spectra are all zero");
  std::vector<double> scaled(rows.size() * size_t(b));
  for (size_t r = 0; r < rows.size(); ++r)
    for (int j = 0; j < b; ++j) scaled[r * size_t(b) + j] = data.row(rows[r])[j] / mean_norm;

  LabeledSpectra local;
  local.x = std::move(scaled);
  local.bands = b;
  local.num_classes = data.num_classes;
  for (size_t i : rows) {
    local.y.push_back(data.y[i]);
    local.split.push_back(Split::Train);
  }
  std::vector<size_t> local_rows(rows.size());
  std::iota(local_rows.begin(), local_rows.end(), 0);

  SvmModel model;
  model.reg = reg;
  model.w.assign(size_t(data.num_classes), std::vector<double>(size_t(b), 0.0));
  model.c.assign(size_t(data.num_classes), 0.0);
  if (objective_trace) objective_trace->assign(size_t(data.num_classes), {});

  for (int k = 0; k < data.num_classes; ++k) {
    std::vector<double> w(size_t(b), 0.0), best_w = w;
    double c = 0.0, best_c = 0.0;
    double best_obj = svm_binary_objective(w, c, reg, local, local_rows, k);

    // One stream shared by every class: hyperplane k depends on the data only
    // through the indicator y == k, so relabeling classes permutes the rows of
    // W exactly.
    std::mt19937_64 rng(mix_seed(seed, 0x73766du));
    std::vector<size_t> order = local_rows;
    for (int e = 0; e < epochs; ++e) {
      const double lr = 0.5 / (1.0 + e);
      std::shuffle(order.begin(), order.end(), rng);
      for (size_t i : order) {
        const double* x = local.row(i);
        const double yt = local.y[i] == k ? 1.0 : -1.0;
        const double margin = yt * (dot(w, x) + c);
        const double shrink = std::max(0.0, 1.0 - lr * 2.0 * reg);
        for (auto& v : w) v *= shrink;
        if (margin < 1.0) {
          for (int j = 0; j < b; ++j) w[size_t(j)] += lr * yt * x[j];
          c += lr * yt;
        }
      }
      const double obj = svm_binary_objective(w, c, reg, local, local_rows, k);
      if (!is_finite(obj)) throw TrainingError("SVM objective diverged", e);
      if (obj < best_obj) {
        best_obj = obj;
        best_w = w;
        best_c = c;
      }
      if (objective_trace) (*objective_trace)[size_t(k)].push_back(best_obj);
    }

    for (int j = 0; j < b; ++j) model.w[size_t(k)][size_t(j)] = best_w[size_t(j)] / mean_norm;
    model.c[size_t(k)] = best_c;
  }
  return model;
}

int svm_predict(const SvmModel& model, const double* x) {
  int best = 0;
  double best_score = dot(model.w[0], x) + model.c[0];
  for (int k = 1; k < model.classes(); ++k) {
    const double s = dot(model.w[size_t(k)], x) + model.c[size_t(k)];
    if (s > best_score) {
      best_score = s;
      best = k;
    }
  }
  return best;
}

double svm_accuracy(const SvmModel& model, const LabeledSpectra& data, Split split) {
  const auto rows = data.indices_of(split);
  if (rows.empty()) throw ValidationError("accuracy over empty split");
  size_t hits = 0;
  for (size_t i : rows) hits += svm_predict(model, data.row(i)) == data.y[i];
  return double(hits) / double(rows.size());
}

std::vector<double> default_reg_grid() {
  // 6 log-spaced points spanning 1e-5 .. 1.
  std::vector<double> grid;
  for (int i = 0; i < 6; ++i) grid.push_back(std::pow(10.0, -5.0 + i));
  return grid;
}

std::pair<double, SvmModel> svm_hyperparameter_search(const LabeledSpectra& data,
                                                      const std::vector<double>& reg_grid,
                                                      int folds, int epochs, uint64_t seed) {
  validate_spectra(data);
  if (reg_grid.empty()) throw ValidationError("empty regularization grid");
  if (folds < 2) throw ValidationError("need at least 2 folds");
  const std::vector<size_t> rows = data.indices_of(Split::Train);
  if (rows.size() < size_t(folds)) throw ValidationError("fold count exceeds samples");

  // Stratified fold assignment: per class, shuffled round-robin.
  std::vector<int> fold_of(data.count(), -1);
  for (int k = 0; k < data.num_classes; ++k) {
    std::vector<size_t> cls;
    for (size_t i : rows)
      if (data.y[i] == k) cls.push_back(i);
    std::mt19937_64 rng(mix_seed(seed, 0x666f6c64u + uint64_t(k)));
    std::shuffle(cls.begin(), cls.end(), rng);
    for (size_t j = 0; j < cls.size(); ++j) fold_of[cls[j]] = int(j % size_t(folds));
  }

  double best_reg = reg_grid[0];
  double best_acc = -1.0;
  for (double reg : reg_grid) {
    double acc_sum = 0.0;
    int used_folds = 0;
    for (int f = 0; f < folds; ++f) {
      LabeledSpectra cv;
      cv.bands = data.bands;
      cv.num_classes = data.num_classes;
      size_t held = 0;
      for (size_t i : rows) {
        cv.x.insert(cv.x.end(), data.row(i), data.row(i) + data.bands);
        cv.y.push_back(data.y[i]);
        const bool hold = fold_of[i] == f;
        cv.split.push_back(hold ? Split::Val : Split::Train);
        held += hold;
      }
      if (held == 0 || held == rows.size()) continue;
      const SvmModel m = train_svm(cv, reg, epochs, mix_seed(seed, uint64_t(f)));
      acc_sum += svm_accuracy(m, cv, Split::Val);
      ++used_folds;
    }
    if (used_folds == 0) throw ValidationError("cross-validation produced no usable folds");
    const double acc = acc_sum / used_folds;
    if (acc > best_acc || (acc == best_acc && reg > best_reg)) {
      best_acc = acc;
      best_reg = reg;
    }
  }

  return {best_reg, train_svm(data, best_reg, epochs, seed)};
}

SpectralFilterBank extract_filters(const SvmModel& model) {
  if (model.w.empty()) throw ValidationError("empty SVM model");
  SpectralFilterBank bank;
  bank.filters = model.w;
  bank.offsets = model.c;
  bank.source = "svm";
  bank.id = "svm-" + std::to_string(model.classes());
  validate_bank(bank);
  return bank;
}

void save_svm(const SvmModel& model, const std::string& path) {
  if (model.w.empty()) throw ValidationError("empty SVM model");
  KeyValues kv;
  kv.emplace_back("type", "svm");
  kv.emplace_back("classes", std::to_string(model.classes()));
  kv.emplace_back("bands", std::to_string(model.bands()));
  kv.emplace_back("reg", format_double(model.reg));
  std::vector<float> blob;
  for (const auto& row : model.w)
    for (double v : row) blob.push_back(float(v));
  for (double v : model.c) blob.push_back(float(v));
  save_model_file(kv, blob, path);
}

SvmModel load_svm(const std::string& path) {
  const auto [kv, blob] = load_model_file(path);
  if (kv_get(kv, "type") != "svm")
    throw ParseError(ParseError::Kind::Malformed, path + ": not an SVM model file");
  const int k = std::stoi(kv_get(kv, "classes"));
  const int b = std::stoi(kv_get(kv, "bands"));
  if (k <= 0 || b <= 0 || blob.size() != size_t(k) * b + size_t(k))
    throw ParseError(ParseError::Kind::Truncated, path + ": SVM blob size mismatch");
  SvmModel m;
  m.reg = std::stod(kv_get(kv, "reg"));
  size_t p = 0;
  for (int i = 0; i < k; ++i) {
    std::vector<double> row(static_cast<size_t>(b));
    for (auto& v : row) v = blob[p++];
    m.w.push_back(std::move(row));
  }
  for (int i = 0; i < k; ++i) m.c.push_back(blob[p++]);
  return m;
}

}  // namespace specbench
