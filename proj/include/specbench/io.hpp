#pragma once

#include <string>
#include <utility>
#include <vector>

#include "specbench/cube.hpp"

namespace specbench {

// HSC1 container: magic "HSC1"; little-endian u32 width, height, bands;
// bands f32 wavelength centers in nm; width*height*bands f32 samples in
// band-major planes (band 0 row-major, then band 1, ...).
void save_cube(const HsiCube& cube, const std::string& path);
HsiCube load_cube(const std::string& path);

// LBL1 container: magic "LBL1"; u32 width, height, classes; width*height u16
// labels; then per class a u32 byte length followed by the UTF-8 name.
void save_labels(const LabelMap& labels, const std::string& path);
LabelMap load_labels(const std::string& path);

enum class RawDtype { F32, U16 };

// Band-sequential raw import (headerless), same plane order as HSC1.
HsiCube import_raw_bsq(const std::string& path, int width, int height, int bands,
                       RawDtype dtype, double wl_min, double wl_max);

// Headerless u16 label raster. Stored values have offset subtracted; a value
// equal to ignore_value (before the offset) maps to the invalid-label sentinel.
LabelMap import_raw_labels(const std::string& path, int width, int height, int num_classes,
                           int ignore_value = -1, int offset = 0);

// Portable bitmap masks (P1 or P4 accepted; P1 written). true = open cell.
std::vector<std::vector<bool>> load_pbm(const std::string& path);
void save_pbm(const std::vector<std::vector<bool>>& mask, const std::string& path);

// 8-bit binary PGM preview, linearly scaled to [lo, hi] (auto range when lo >= hi).
void save_pgm(const Image& img, const std::string& path, double lo = 0.0, double hi = -1.0);

// Plain key=value text files ('#' starts a comment line). Order preserved on write.
using KeyValues = std::vector<std::pair<std::string, std::string>>;
void save_key_values(const KeyValues& kv, const std::string& path);
KeyValues load_key_values(const std::string& path);
std::string kv_get(const KeyValues& kv, const std::string& key);
bool kv_has(const KeyValues& kv, const std::string& key);

// Model container: key=value header lines, a "---" separator line, then one
// little-endian f32 blob with every tensor in header-declared order.
void save_model_file(const KeyValues& header, const std::vector<float>& blob,
                     const std::string& path);
std::pair<KeyValues, std::vector<float>> load_model_file(const std::string& path);

// Numeric CSV without quoting; '#' comment lines are skipped on read.
void save_csv(const std::vector<std::vector<double>>& rows, const std::string& path,
              const std::string& header = "");
std::vector<std::vector<double>> load_csv(const std::string& path);

}  // namespace specbench
