#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "korn/ansatz.hpp"
#include "korn/mode_reduction.hpp"

namespace korn::sweep {

struct IoError : Error {
  using Error::Error;
};

std::string to_string(modes::Path p);
modes::Path path_from_string(const std::string& s);

// What a sweep measures per h: an eigenvalue envelope (one of the quotient
// kinds) or the closed-form oscillatory-field quotient at optimal scales.
struct SweepConfig {
  std::vector<double> hs;  // strictly decreasing, all in (0, 1)
  double L = 2.0;
  SpaceTag space = SpaceTag::V1;
  modes::QuotientKind kind = modes::QuotientKind::Korn;
  modes::Path path = modes::Path::TwoD;
  modes::Resolution res;  // 0 = policy default
  int n_max = 0;          // 0 = policy default
  int m_max = 8;          // 1D path truncation
  double tol = 1e-8;
  std::uint64_t seed = 1;
  bool ansatz = false;  // closed-form quadrature sweep instead of eigensolve
  bool timing = false;  // write wall-clock seconds (forfeits byte identity)

  void validate() const;
};

struct SweepRow {
  double h = 0.0;
  double value = 0.0;
  int mode_n = -1;  // achieving mode (-1 where not applicable)
  int mode_m = -1;
  double residual = 0.0;
  int nr = 0;
  int nz = 0;
  double seconds = 0.0;
  bool ok = true;
  std::string error;  // failure message when !ok
  bool truncation_warning = false;
};

struct Fit {
  double slope = 0.0;
  double intercept = 0.0;        // log-log intercept: value ~ e^b * h^slope
  double max_rel_residual = 0.0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;
  Fit fit;
  bool fit_ok = false;  // >= 2 successful rows with positive values
};

// Least-squares line through (log h, log value) of the successful rows.
// Throws DegenerateInputError naming the offending row on nonpositive
// values, ConfigError when fewer than two rows are available.
Fit fit_exponent(const std::vector<SweepRow>& rows);

// Runs one value per h (concurrency lives inside the per-h mode envelope;
// rows are finalized in deterministic h order).
SweepResult run_sweep(const SweepConfig& cfg);

// Canonical key=value listing of a config (also the CLI's resolved-config
// echo) and its content hash, embedded in every emitted artifact.
std::string config_echo(const SweepConfig& cfg);
std::string config_hash(const SweepConfig& cfg);

// Serializations. All floating-point numbers are written via format17, so
// identical configs + seed produce byte-identical artifacts (seconds are 0
// unless timing was requested).
std::string to_csv(const SweepResult& result);
std::string to_json(const SweepResult& result);
SweepResult from_json(const std::string& text);
std::string to_svg(const SweepResult& result);

// Writes content to path, surfacing failures as IoError.
void write_file(const std::string& path, const std::string& content);

}  // namespace korn::sweep
