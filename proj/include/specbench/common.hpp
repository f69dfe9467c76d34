#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace specbench {

// Base class for all workbench errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments, broken invariants, unusable configuration. CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed input files. Kind distinguishes the common failure modes.
class ParseError : public Error {
 public:
  enum class Kind { BadMagic, Truncated, NonFinite, Malformed };

  ParseError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Filesystem / OS level failures. CLI exit code 1.
class IoError : public Error {
 public:
  using Error::Error;
};

// Optimization diverged or could not produce a model.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& msg, int epoch) : Error(msg), epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_ = -1;
};

// splitmix64; used to derive independent stream seeds from one base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline bool is_finite(double v) { return std::isfinite(v); }

// Shortest text that round-trips a double exactly.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace specbench
