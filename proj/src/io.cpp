#include "specbench/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "specbench/common.hpp"

namespace specbench {
namespace {

void put_u32(std::string& out, uint32_t v) {
  out.push_back(char(v & 0xFF));
  out.push_back(char((v >> 8) & 0xFF));
  out.push_back(char((v >> 16) & 0xFF));
  out.push_back(char((v >> 24) & 0xFF));
}

void put_u16(std::string& out, uint16_t v) {
  out.push_back(char(v & 0xFF));
  out.push_back(char((v >> 8) & 0xFF));
}

void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<uint32_t>(v)); }

// Sequential little-endian reader over a whole file image.
class Reader {
 public:
  Reader(std::string bytes, std::string path) : bytes_(std::move(bytes)), path_(std::move(path)) {}

  uint32_t u32() {
    need(4);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data() + pos_);
    pos_ += 4;
    return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24;
  }

  uint16_t u16() {
    need(2);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data() + pos_);
    pos_ += 2;
    return uint16_t(uint32_t(p[0]) | uint32_t(p[1]) << 8);
  }

  float f32() { return std::bit_cast<float>(u32()); }

  std::string raw(size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool expect_magic(const char* magic) {
    if (bytes_.size() < pos_ + 4) return false;
    bool ok = std::memcmp(bytes_.data() + pos_, magic, 4) == 0;
    pos_ += 4;
    return ok;
  }

  size_t remaining() const { return bytes_.size() - pos_; }
  const std::string& path() const { return path_; }

 private:
  void need(size_t n) {
    if (bytes_.size() - pos_ < n)
      throw ParseError(ParseError::Kind::Truncated, path_ + ": unexpected end of file");
  }

  std::string bytes_;
  std::string path_;
  size_t pos_ = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in) throw IoError("read failed: " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(bytes.data(), std::streamsize(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

size_t checked_pixel_count(uint32_t w, uint32_t h, uint32_t b, const std::string& path) {
  if (w == 0 || h == 0 || b == 0)
    throw ParseError(ParseError::Kind::Malformed, path + ": zero dimension in header");
  if (uint64_t(w) * h * b > (uint64_t(1) << 34))
    throw ParseError(ParseError::Kind::Malformed, path + ": implausible dimensions");
  return size_t(w) * h * b;
}

}  // namespace

void save_cube(const HsiCube& cube, const std::string& path) {
  // Finiteness only: measurement sets reuse this container and their feature
  // planes are signed. Radiometric non-negativity is enforced where cubes are
  // built, not at the container boundary.
  for (double v : cube.data)
    if (!is_finite(v)) throw ValidationError("refusing to write non-finite cube sample");
  std::string out;
  out.reserve(16 + 4 * (cube.grid.bands + cube.data.size()));
  out += "HSC1";
  put_u32(out, uint32_t(cube.width));
  put_u32(out, uint32_t(cube.height));
  put_u32(out, uint32_t(cube.grid.bands));
  for (double wl : cube.grid.centers) put_f32(out, float(wl));
  for (double v : cube.data) put_f32(out, float(v));
  write_file(path, out);
}

HsiCube load_cube(const std::string& path) {
  Reader r(read_file(path), path);
  if (!r.expect_magic("HSC1"))
    throw ParseError(ParseError::Kind::BadMagic, path + ": not an HSC1 cube");
  const uint32_t w = r.u32(), h = r.u32(), b = r.u32();
  const size_t n = checked_pixel_count(w, h, b, path);

  std::vector<double> centers(b);
  for (auto& c : centers) c = r.f32();
  for (size_t i = 1; i < centers.size(); ++i)
    if (!(centers[i] > centers[i - 1]))
      throw ParseError(ParseError::Kind::Malformed, path + ": wavelength centers not increasing");
  if (!std::isfinite(centers.front()) || !std::isfinite(centers.back()) || centers.front() <= 0.0)
    throw ParseError(ParseError::Kind::NonFinite, path + ": bad wavelength centers");

  // Rebuild the uniform grid in double precision from the f32 endpoints, then
  // check the stored centers against it. Deviations beyond f32 rounding mean
  // the file does not describe a uniform grid.
  WavelengthGrid grid(centers.front(), centers.back(), int(b));
  for (size_t i = 0; i < centers.size(); ++i)
    if (std::abs(centers[i] - grid.centers[i]) > 1e-2)
      throw ParseError(ParseError::Kind::Malformed, path + ": wavelength grid not uniform");

  HsiCube cube(int(w), int(h), grid);
  for (size_t i = 0; i < n; ++i) {
    const double v = r.f32();
    if (!std::isfinite(v))
      throw ParseError(ParseError::Kind::NonFinite, path + ": non-finite sample");
    cube.data[i] = v;
  }
  return cube;
}

void save_labels(const LabelMap& labels, const std::string& path) {
  validate_labels(labels, true);
  std::string out;
  out += "LBL1";
  put_u32(out, uint32_t(labels.width));
  put_u32(out, uint32_t(labels.height));
  put_u32(out, uint32_t(labels.num_classes));
  for (uint16_t v : labels.labels) put_u16(out, v);
  for (const auto& name : labels.class_names) {
    put_u32(out, uint32_t(name.size()));
    out += name;
  }
  write_file(path, out);
}

LabelMap load_labels(const std::string& path) {
  Reader r(read_file(path), path);
  if (!r.expect_magic("LBL1"))
    throw ParseError(ParseError::Kind::BadMagic, path + ": not an LBL1 label map");
  const uint32_t w = r.u32(), h = r.u32(), k = r.u32();
  if (w == 0 || h == 0 || k == 0 || k > 0xFFFF)
    throw ParseError(ParseError::Kind::Malformed, path + ": bad header");

  LabelMap lm(static_cast<int>(w), static_cast<int>(h), static_cast<int>(k));
  for (auto& v : lm.labels) {
    v = r.u16();
    if (v >= k && v != kInvalidLabel)
      throw ParseError(ParseError::Kind::Malformed, path + ": label out of range");
  }
  lm.class_names.clear();
  for (uint32_t i = 0; i < k; ++i) {
    const uint32_t len = r.u32();
    if (len > (1u << 20))
      throw ParseError(ParseError::Kind::Malformed, path + ": implausible name length");
    lm.class_names.push_back(r.raw(len));
  }
  return lm;
}

HsiCube import_raw_bsq(const std::string& path, int width, int height, int bands,
                       RawDtype dtype, double wl_min, double wl_max) {
  if (width <= 0 || height <= 0 || bands <= 0)
    throw ValidationError("raw import: dimensions must be positive");
  const std::string bytes = read_file(path);
  const size_t n = size_t(width) * height * bands;
  const size_t elem = dtype == RawDtype::F32 ? 4 : 2;
  if (bytes.size() != n * elem)
    throw ParseError(ParseError::Kind::Truncated,
                     path + ": expected " + std::to_string(n * elem) + " bytes, found " +
                         std::to_string(bytes.size()));

  Reader r(bytes, path);
  HsiCube cube(width, height, WavelengthGrid(wl_min, wl_max, bands));
  for (size_t i = 0; i < n; ++i) {
    double v = dtype == RawDtype::F32 ? double(r.f32()) : double(r.u16());
    if (!std::isfinite(v))
      throw ParseError(ParseError::Kind::NonFinite, path + ": non-finite sample");
    cube.data[i] = v;
  }
  return cube;
}

LabelMap import_raw_labels(const std::string& path, int width, int height, int num_classes,
                           int ignore_value, int offset) {
  if (width <= 0 || height <= 0 || num_classes <= 0)
    throw ValidationError("raw import: dimensions must be positive");
  const std::string bytes = read_file(path);
  const size_t n = size_t(width) * height;
  if (bytes.size() != n * 2)
    throw ParseError(ParseError::Kind::Truncated, path + ": bad raw label raster size");

  Reader r(bytes, path);
  LabelMap lm(width, height, num_classes);
  for (auto& dst : lm.labels) {
    const int v = r.u16();
    if (ignore_value >= 0 && v == ignore_value) {
      dst = kInvalidLabel;
      continue;
    }
    const int mapped = v - offset;
    if (mapped < 0 || mapped >= num_classes)
      throw ParseError(ParseError::Kind::Malformed, path + ": label out of range");
    dst = uint16_t(mapped);
  }
  for (int i = 0; i < num_classes; ++i) lm.class_names[i] = "class_" + std::to_string(i);
  return lm;
}

namespace {

// Pulls whitespace/comment-aware tokens from a PBM/PGM style header.
std::string next_token(const std::string& s, size_t& pos, const std::string& path) {
  while (pos < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[pos]))) {
      ++pos;
    } else if (s[pos] == '#') {
      while (pos < s.size() && s[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  if (pos >= s.size()) throw ParseError(ParseError::Kind::Truncated, path + ": truncated header");
  size_t start = pos;
  while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '#') ++pos;
  return s.substr(start, pos - start);
}

int parse_dim(const std::string& tok, const std::string& path) {
  try {
    size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size() || v <= 0 || v > 1 << 16) throw std::invalid_argument("range");
    return v;
  } catch (const std::exception&) {
    throw ParseError(ParseError::Kind::Malformed, path + ": bad dimension '" + tok + "'");
  }
}

}  // namespace

std::vector<std::vector<bool>> load_pbm(const std::string& path) {
  const std::string s = read_file(path);
  size_t pos = 0;
  const std::string magic = next_token(s, pos, path);
  if (magic != "P1" && magic != "P4")
    throw ParseError(ParseError::Kind::BadMagic, path + ": not a PBM bitmap");
  const int w = parse_dim(next_token(s, pos, path), path);
  const int h = parse_dim(next_token(s, pos, path), path);

  std::vector<std::vector<bool>> mask(h, std::vector<bool>(w, false));
  if (magic == "P1") {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const std::string tok = next_token(s, pos, path);
        if (tok == "1")
          mask[y][x] = true;
        else if (tok != "0")
          throw ParseError(ParseError::Kind::Malformed, path + ": bad P1 digit '" + tok + "'");
      }
  } else {
    // P4: single whitespace after height, then packed rows, MSB first.
    if (pos >= s.size()) throw ParseError(ParseError::Kind::Truncated, path + ": missing raster");
    ++pos;
    const size_t row_bytes = size_t((w + 7) / 8);
    if (s.size() - pos < row_bytes * h)
      throw ParseError(ParseError::Kind::Truncated, path + ": raster too short");
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const unsigned char byte = s[pos + y * row_bytes + x / 8];
        mask[y][x] = (byte >> (7 - x % 8)) & 1;
      }
  }
  return mask;
}

void save_pbm(const std::vector<std::vector<bool>>& mask, const std::string& path) {
  if (mask.empty() || mask[0].empty()) throw ValidationError("empty mask");
  const size_t w = mask[0].size();
  std::ostringstream out;
  out << "P1\n" << w << " " << mask.size() << "\n";
  for (const auto& row : mask) {
    if (row.size() != w) throw ValidationError("ragged mask rows");
    for (size_t x = 0; x < w; ++x) out << (row[x] ? '1' : '0') << (x + 1 == w ? '\n' : ' ');
  }
  write_file(path, out.str());
}

void save_pgm(const Image& img, const std::string& path, double lo, double hi) {
  if (hi <= lo) {
    lo = img.values.empty() ? 0.0 : *std::min_element(img.values.begin(), img.values.end());
    hi = img.values.empty() ? 1.0 : *std::max_element(img.values.begin(), img.values.end());
    if (hi <= lo) hi = lo + 1.0;
  }
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.values.size());
  for (double v : img.values) {
    const double t = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
    out.push_back(char(uint8_t(std::lround(t * 255.0))));
  }
  write_file(path, out);
}

void save_key_values(const KeyValues& kv, const std::string& path) {
  std::ostringstream out;
  for (const auto& [k, v] : kv) {
    if (k.empty() || k.find('=') != std::string::npos || k.find('\n') != std::string::npos)
      throw ValidationError("bad key '" + k + "'");
    if (v.find('\n') != std::string::npos) throw ValidationError("newline in value for " + k);
    out << k << "=" << v << "\n";
  }
  write_file(path, out.str());
}

KeyValues load_key_values(const std::string& path) {
  const std::string s = read_file(path);
  KeyValues kv;
  std::istringstream in(s);
  std::string line;
  auto trim = [](std::string t) {
    const char* ws = " \t\r";
    const size_t a = t.find_first_not_of(ws);
    if (a == std::string::npos) return std::string();
    return t.substr(a, t.find_last_not_of(ws) - a + 1);
  };
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParseError(ParseError::Kind::Malformed, path + ": expected key=value, got '" + t + "'");
    kv.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return kv;
}

std::string kv_get(const KeyValues& kv, const std::string& key) {
  for (const auto& [k, v] : kv)
    if (k == key) return v;
  throw ParseError(ParseError::Kind::Malformed, "missing key '" + key + "'");
}

bool kv_has(const KeyValues& kv, const std::string& key) {
  for (const auto& [k, v] : kv)
    if (k == key) return true;
  return false;
}

void save_model_file(const KeyValues& header, const std::vector<float>& blob,
                     const std::string& path) {
  std::string out;
  for (const auto& [k, v] : header) {
    if (k.empty() || k.find('=') != std::string::npos) throw ValidationError("bad header key");
    out += k + "=" + v + "\n";
  }
  out += "---\n";
  for (float f : blob) put_f32(out, f);
  write_file(path, out);
}

std::pair<KeyValues, std::vector<float>> load_model_file(const std::string& path) {
  const std::string s = read_file(path);
  KeyValues kv;
  size_t pos = 0;
  bool found_sep = false;
  while (pos < s.size()) {
    size_t eol = s.find('\n', pos);
    if (eol == std::string::npos)
      throw ParseError(ParseError::Kind::Truncated, path + ": header not terminated");
    const std::string line = s.substr(pos, eol - pos);
    pos = eol + 1;
    if (line == "---") {
      found_sep = true;
      break;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParseError(ParseError::Kind::Malformed, path + ": bad header line '" + line + "'");
    kv.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  if (!found_sep)
    throw ParseError(ParseError::Kind::Truncated, path + ": missing header separator");
  const size_t bytes = s.size() - pos;
  if (bytes % 4 != 0)
    throw ParseError(ParseError::Kind::Truncated, path + ": blob not a multiple of 4 bytes");
  Reader r(s.substr(pos), path);
  std::vector<float> blob(bytes / 4);
  for (auto& f : blob) {
    f = r.f32();
    if (!std::isfinite(f))
      throw ParseError(ParseError::Kind::NonFinite, path + ": non-finite weight");
  }
  return {std::move(kv), std::move(blob)};
}

void save_csv(const std::vector<std::vector<double>>& rows, const std::string& path,
              const std::string& header) {
  std::ostringstream out;
  out.precision(17);
  if (!header.empty()) out << "# " << header << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  write_file(path, out.str());
}

std::vector<std::vector<double>> load_csv(const std::string& path) {
  const std::string s = read_file(path);
  std::vector<std::vector<double>> rows;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        size_t used = 0;
        row.push_back(std::stod(cell, &used));
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument("trailing junk");
      } catch (const std::exception&) {
        throw ParseError(ParseError::Kind::Malformed, path + ": bad number '" + cell + "'");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace specbench
