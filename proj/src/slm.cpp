#include "specbench/slm.hpp"

#include <cmath>

#include "specbench/common.hpp"

namespace specbench {
namespace {

// Center band occupies dc_rows rows starting here; code rows alternate below
// and above it, nearest first.
int dc_start(int rows, int dc_rows) { return (rows - dc_rows) / 2; }

std::vector<std::vector<bool>> render_pattern(const std::vector<int>& code_heights, int rows,
                                              int dc_rows) {
  const int cols = int(code_heights.size());
  std::vector<std::vector<bool>> grid(rows, std::vector<bool>(cols, false));
  const int d0 = dc_start(rows, dc_rows);
  for (int c = 0; c < cols; ++c) {
    for (int r = d0; r < d0 + dc_rows; ++r) grid[r][c] = true;
    int below = d0 - 1, above = d0 + dc_rows;
    for (int i = 0; i < code_heights[c]; ++i) {
      if (i % 2 == 0 && below >= 0)
        grid[below--][c] = true;
      else if (above < rows)
        grid[above++][c] = true;
      else
        grid[below--][c] = true;
    }
  }
  return grid;
}

}  // namespace

SlmPatternPair encode_filter_to_slm(const std::vector<double>& d, int rows, int dc_rows) {
  if (dc_rows < 0 || rows <= dc_rows)
    throw ValidationError("SLM rows must exceed dc_rows and dc_rows must be non-negative");
  if (d.empty()) throw ValidationError("empty filter");
  double m = 0.0;
  for (double v : d) {
    if (!is_finite(v)) throw ValidationError("non-finite filter value");
    m = std::max(m, std::abs(v));
  }

  const int capacity = rows - dc_rows;
  const int cols = int(d.size());
  std::vector<int> hp(cols, 0), hn(cols, 0);
  if (m > 0.0) {
    for (int c = 0; c < cols; ++c) {
      const double unit = d[c] / m;
      if (unit >= 0.0)
        hp[c] = int(std::lround(unit * capacity));
      else
        hn[c] = int(std::lround(-unit * capacity));
    }
  }

  SlmPatternPair pair;
  pair.rows = rows;
  pair.dc_rows = dc_rows;
  pair.gain = m;
  pair.positive = render_pattern(hp, rows, dc_rows);
  pair.negative = render_pattern(hn, rows, dc_rows);
  pair.column_heights_pos.resize(cols);
  pair.column_heights_neg.resize(cols);
  for (int c = 0; c < cols; ++c) {
    pair.column_heights_pos[c] = hp[c] + dc_rows;
    pair.column_heights_neg[c] = hn[c] + dc_rows;
  }
  return pair;
}

std::vector<double> slm_transmittance(const std::vector<std::vector<bool>>& pattern) {
  if (pattern.empty() || pattern[0].empty()) throw ValidationError("empty SLM pattern");
  const int rows = int(pattern.size()), cols = int(pattern[0].size());
  std::vector<double> t(cols, 0.0);
  for (const auto& row : pattern) {
    if (int(row.size()) != cols) throw ValidationError("ragged SLM pattern");
    for (int c = 0; c < cols; ++c) t[c] += row[c];
  }
  for (auto& v : t) v /= rows;
  return t;
}

std::vector<double> decode_slm_pattern(const std::vector<std::vector<bool>>& pattern,
                                       int dc_rows) {
  const int rows = int(pattern.size());
  if (rows <= dc_rows) throw ValidationError("dc_rows exceeds pattern rows");
  std::vector<double> t = slm_transmittance(pattern);
  const double capacity = rows - dc_rows;
  for (auto& v : t) v = (v * rows - dc_rows) / capacity;
  return t;
}

}  // namespace specbench
