#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace korn {

// Error hierarchy. Every failure mode the library reports deliberately gets
// its own type so callers (CLI, tests) can map them to exit codes precisely.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};
struct ResolutionError : Error {
  using Error::Error;
};
struct TraceError : Error {
  using Error::Error;
};
struct AdmissibilityError : Error {
  using Error::Error;
};
struct DegenerateInputError : Error {
  using Error::Error;
};
// Eigensolver-specific errors carry diagnostic payloads.
struct KernelError : Error {
  std::vector<double> kernel_vector;
  KernelError(const std::string& msg, std::vector<double> vec)
      : Error(msg), kernel_vector(std::move(vec)) {}
};
struct IterationCapError : Error {
  double best_value;
  double best_residual;
  IterationCapError(const std::string& msg, double value, double residual)
      : Error(msg), best_value(value), best_residual(residual) {}
};
struct ConditionError : Error {
  double pivot_ratio;
  ConditionError(const std::string& msg, double ratio)
      : Error(msg), pivot_ratio(ratio) {}
};

// Compensated (Kahan-Neumaier) accumulator for the L2 norms; grids are small
// but constants are compared at 1e-12, so plain summation is not good enough.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Deterministic RNG. std::uniform_real_distribution is implementation
// defined, so draws are derived from raw mt19937_64 output to keep corpora
// byte-stable across standard libraries.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  // Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * unit(); }
  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Shortest-faithful decimal with 17 significant digits; used everywhere a
// number lands in an emitted artifact so outputs are byte-reproducible.
std::string format17(double x);
// Parse a format17 string back (round-trips bit-exactly).
double parse17(const std::string& s);

// SHA-1 digest (hex) of a byte string, git-blob style prefixing is up to the
// caller; used for config content hashes in emitted artifacts.
std::string sha1_hex(const std::string& data);

// Thread cap honoured by the sweep runner: KORN_THREADS if set, else 1 core
// fallback to hardware_concurrency.
int thread_cap();

}  // namespace korn
