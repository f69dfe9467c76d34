#pragma once

#include <cstdint>
#include <vector>

#include "specbench/cube.hpp"

namespace specbench {

enum class Split : uint8_t { Train, Val, Test };

// Row-major N x B matrix of sum-normalized spectra with labels and split
// assignment. Rows sum to 1, which is what makes optically captured
// sum-normalized features equal plain dot products with these rows.
struct LabeledSpectra {
  std::vector<double> x;  // N * bands
  std::vector<uint16_t> y;
  std::vector<Split> split;
  int bands = 0;
  int num_classes = 0;

  size_t count() const { return y.size(); }
  const double* row(size_t i) const { return x.data() + i * size_t(bands); }
  std::vector<size_t> indices_of(Split s) const;
};

void validate_spectra(const LabeledSpectra& data);

// x / sum(x); rejects non-positive sums.
std::vector<double> sum_normalize(const std::vector<double>& spectrum);

// One row per labeled pixel (invalid-label and zero-sum pixels are skipped),
// each row sum-normalized. Split defaults to Train.
LabeledSpectra spectra_from_cube(const HsiCube& cube, const LabelMap& labels);

// Deterministic stratified split. val/test take their rounded shares per
// class; test absorbs the remainder. Every class lands in every split whose
// fraction is positive.
void split_dataset(LabeledSpectra& data, double train_frac, double val_frac, double test_frac,
                   uint64_t seed);

}  // namespace specbench
