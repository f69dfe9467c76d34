#include "specbench/filterbank.hpp"

#include "specbench/common.hpp"
#include "specbench/io.hpp"

namespace specbench {

void validate_bank(const SpectralFilterBank& bank) {
  if (bank.filters.empty()) throw ValidationError("filter bank is empty");
  const size_t b = bank.filters[0].size();
  if (b == 0) throw ValidationError("filter bank has zero bands");
  for (const auto& f : bank.filters) {
    if (f.size() != b) throw ValidationError("filter bank rows have mixed lengths");
    for (double v : f)
      if (!is_finite(v)) throw ValidationError("non-finite filter value");
  }
  if (bank.offsets.size() != bank.filters.size())
    throw ValidationError("offset count does not match filter count");
  for (double v : bank.offsets)
    if (!is_finite(v)) throw ValidationError("non-finite filter offset");
}

SpectralFilterBank matched_filter(const Spectrum& s1, const Spectrum& s2) {
  if (!(s1.grid == s2.grid)) throw ValidationError("matched filter spectra on different grids");
  SpectralFilterBank bank;
  std::vector<double> d(s1.values.size());
  for (size_t i = 0; i < d.size(); ++i) d[i] = s1.values[i] - s2.values[i];
  bank.filters.push_back(std::move(d));
  bank.offsets.push_back(0.0);
  bank.source = "matched";
  bank.id = "matched-1";
  return bank;
}

void save_bank_csv(const SpectralFilterBank& bank, const std::string& path) {
  validate_bank(bank);
  std::vector<std::vector<double>> rows;
  rows.reserve(bank.filters.size());
  for (size_t k = 0; k < bank.filters.size(); ++k) {
    std::vector<double> row;
    row.reserve(1 + bank.filters[k].size());
    row.push_back(bank.offsets[k]);
    row.insert(row.end(), bank.filters[k].begin(), bank.filters[k].end());
    rows.push_back(std::move(row));
  }
  save_csv(rows, path, "offset, then one weight per band; source=" + bank.source);
}

SpectralFilterBank load_bank_csv(const std::string& path) {
  const auto rows = load_csv(path);
  if (rows.empty()) throw ParseError(ParseError::Kind::Malformed, path + ": empty filter bank");
  SpectralFilterBank bank;
  for (const auto& row : rows) {
    if (row.size() < 2)
      throw ParseError(ParseError::Kind::Malformed, path + ": filter row needs offset + weights");
    if (row.size() != rows[0].size())
      throw ParseError(ParseError::Kind::Malformed, path + ": ragged filter rows");
    bank.offsets.push_back(row[0]);
    bank.filters.emplace_back(row.begin() + 1, row.end());
  }
  bank.source = "csv";
  bank.id = path;
  validate_bank(bank);
  return bank;
}

}  // namespace specbench
