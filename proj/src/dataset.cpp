#include "specbench/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "specbench/common.hpp"

namespace specbench {

std::vector<size_t> LabeledSpectra::indices_of(Split s) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < split.size(); ++i)
    if (split[i] == s) out.push_back(i);
  return out;
}

void validate_spectra(const LabeledSpectra& data) {
  if (data.bands <= 0 || data.num_classes <= 0)
    throw ValidationError("labeled spectra need positive bands and classes");
  if (data.x.size() != data.count() * size_t(data.bands) || data.split.size() != data.count())
    throw ValidationError("labeled spectra dimensions inconsistent");
  for (double v : data.x)
    if (!is_finite(v)) throw ValidationError("non-finite spectrum entry");
  for (uint16_t label : data.y)
    if (label >= data.num_classes) throw ValidationError("label out of range");
}

std::vector<double> sum_normalize(const std::vector<double>& spectrum) {
  double s = 0.0;
  for (double v : spectrum) {
    if (!is_finite(v) || v < 0.0) throw ValidationError("spectrum must be non-negative");
    s += v;
  }
  if (!(s > 0.0)) throw ValidationError("cannot sum-normalize an all-zero spectrum");
  std::vector<double> out(spectrum);
  for (auto& v : out) v /= s;
  return out;
}

LabeledSpectra spectra_from_cube(const HsiCube& cube, const LabelMap& labels) {
  if (cube.width != labels.width || cube.height != labels.height)
    throw ValidationError("cube and label dimensions differ");
  validate_cube(cube);
  validate_labels(labels, true);

  LabeledSpectra data;
  data.bands = cube.grid.bands;
  data.num_classes = labels.num_classes;
  const size_t plane = size_t(cube.width) * cube.height;
  for (size_t p = 0; p < plane; ++p) {
    const uint16_t label = labels.labels[p];
    if (label == kInvalidLabel) continue;
    double s = 0.0;
    for (int b = 0; b < data.bands; ++b) s += cube.data[size_t(b) * plane + p];
    if (!(s > 0.0)) continue;
    for (int b = 0; b < data.bands; ++b) data.x.push_back(cube.data[size_t(b) * plane + p] / s);
    data.y.push_back(label);
    data.split.push_back(Split::Train);
  }
  if (data.y.empty()) throw ValidationError("no usable labeled pixels");
  return data;
}

void split_dataset(LabeledSpectra& data, double train_frac, double val_frac, double test_frac,
                   uint64_t seed) {
  validate_spectra(data);
  if (train_frac < 0.0 || val_frac < 0.0 || test_frac < 0.0 ||
      train_frac + val_frac + test_frac > 1.0 + 1e-9)
    throw ValidationError("split fractions must be non-negative and sum to at most 1");

  int active = (train_frac > 0.0) + (val_frac > 0.0) + (test_frac > 0.0);
  if (active == 0) throw ValidationError("all split fractions are zero");

  std::vector<std::vector<size_t>> per_class(size_t(data.num_classes));
  for (size_t i = 0; i < data.count(); ++i) per_class[data.y[i]].push_back(i);

  for (int k = 0; k < data.num_classes; ++k) {
    auto& idx = per_class[size_t(k)];
    if (idx.empty()) continue;
    if (int(idx.size()) < active)
      throw ValidationError("class " + std::to_string(k) + " has fewer samples than splits");
    std::mt19937_64 rng(mix_seed(seed, 0x73706c69u + uint64_t(k)));
    std::shuffle(idx.begin(), idx.end(), rng);

    const size_t n = idx.size();
    size_t n_train = size_t(std::lround(train_frac * double(n)));
    size_t n_val = size_t(std::lround(val_frac * double(n)));
    if (train_frac > 0.0 && n_train == 0) n_train = 1;
    if (val_frac > 0.0 && n_val == 0) n_val = 1;
    while (n_train + n_val + (test_frac > 0.0 ? 1 : 0) > n) {
      if (n_val > 1)
        --n_val;
      else
        --n_train;
    }
    // Rounding remainder goes to test, or to the last active split when the
    // test fraction is zero.
    if (test_frac == 0.0) {
      if (val_frac > 0.0)
        n_val = n - n_train;
      else
        n_train = n;
    }

    size_t i = 0;
    for (; i < n_train; ++i) data.split[idx[i]] = Split::Train;
    for (; i < n_train + n_val; ++i) data.split[idx[i]] = Split::Val;
    for (; i < n; ++i) data.split[idx[i]] = Split::Test;
  }
}

}  // namespace specbench
