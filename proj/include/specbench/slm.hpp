#pragma once

#include <vector>

namespace specbench {

// Binary SLM patterns realizing a signed spectral filter as two non-negative
// transmittance profiles. Grayscale per column comes from the count of on
// rows; dc_rows center rows stay on in every column to pin the diffraction
// background, which is measured once and subtracted.
struct SlmPatternPair {
  std::vector<std::vector<bool>> positive;  // [row][col]
  std::vector<std::vector<bool>> negative;
  int rows = 0;
  int dc_rows = 0;
  std::vector<int> column_heights_pos;  // total on rows per column, dc included
  std::vector<int> column_heights_neg;
  double gain = 0.0;  // max |d|; restores the filter's scale after decode
};

// Splits d = gain * (d_pos - d_neg) with both parts in [0,1], then quantizes
// each to round(value * (rows - dc_rows)) code rows stacked outward from the
// center band.
SlmPatternPair encode_filter_to_slm(const std::vector<double>& d, int rows, int dc_rows);

// Per-column transmittance of a pattern as displayed (on rows / rows).
std::vector<double> slm_transmittance(const std::vector<std::vector<bool>>& pattern);

// Recovers the unsigned profile the column encodes: on rows above the DC band
// divided by the code capacity. Within 0.5/(rows - dc_rows) of the encoded
// value by construction.
std::vector<double> decode_slm_pattern(const std::vector<std::vector<bool>>& pattern,
                                       int dc_rows);

}  // namespace specbench
