#pragma once

#include <string>
#include <vector>

#include "specbench/grid.hpp"

namespace specbench {

// Signed spectral filters d_k plus per-filter offsets beta_k. The optics only
// ever realize d_k; offsets ride along for classification-time score assembly
// (SVM intercepts, MLP first-layer bias). gains hold the SLM split scale
// max|d_k| once encoded.
struct SpectralFilterBank {
  std::vector<std::vector<double>> filters;  // Q x B
  std::vector<double> offsets;               // Q
  std::vector<double> gains;                 // Q, filled by SLM encoding
  std::string source;                        // svm | mlp | matched
  std::string id;

  int count() const { return int(filters.size()); }
  int bands() const { return filters.empty() ? 0 : int(filters[0].size()); }
};

void validate_bank(const SpectralFilterBank& bank);

// d = s1 - s2: the hand-built two-class discriminant.
SpectralFilterBank matched_filter(const Spectrum& s1, const Spectrum& s2);

// One row per filter, first column the offset.
void save_bank_csv(const SpectralFilterBank& bank, const std::string& path);
SpectralFilterBank load_bank_csv(const std::string& path);

}  // namespace specbench
