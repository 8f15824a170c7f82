#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "korn/eigensolver.hpp"
#include "korn/fields.hpp"

namespace korn::modes {

// Which Rayleigh quotient a mode problem encodes:
//   Korn             N = |e(phi)|^2,            D = |grad phi|^2  (minimize)
//   ComponentRTheta  N = |(grad phi)_{r,theta}|^2, D = |e(phi)|^2 (maximize)
//   ComponentRZ      N = |phi_{r,z}|^2,            D = |e(phi)|^2 (maximize)
//   ComponentThetaZ  N = |phi_{theta,z}|^2,        D = |e(phi)|^2 (maximize)
enum class QuotientKind { Korn, ComponentRTheta, ComponentRZ, ComponentThetaZ };

enum class Path { TwoD, OneD };

QuotientKind kind_from_string(const std::string& s);
std::string to_string(QuotientKind k);

// 0 = resolution policy default (nr = 10; nz scaled with the axial length).
struct Resolution {
  int nr = 0;
  int nz = 0;
};
Resolution resolve_resolution(const ShellGeometry& geom, Resolution req);

struct ModeIndex {
  int n = 0;   // circumferential wavenumber
  int m = -1;  // axial index; -1 on the 2D path
};

// One assembled pencil: forms over real radial(-axial) profiles
// (f_r, f_theta, f_z) with the theta (and axial, on the 1D path) structure
// integrated out exactly. Restricted to the trace-satisfying subspace by
// basis restriction (boundary collocation rows removed, never penalized).
struct ModeProblem {
  Eigen::MatrixXd N;
  Eigen::MatrixXd D;
  ModeIndex index;
  QuotientKind kind = QuotientKind::Korn;
  SpaceTag space = SpaceTag::Free;
  ShellGeometry geom;
  int nr = 0;
  int nz = 1;  // 1 on the 1D path
  std::vector<int> dofs;  // kept indices into the stacked full profile
  int full_size = 0;      // 3*nr*nz
};

// 2D path: exact circumferential reduction at wavenumber n; valid for every
// space tag (trace constraints imposed at z = 0, L).
ModeProblem reduce_theta(const ShellGeometry& geom, SpaceTag space, int n,
                         QuotientKind kind, Resolution res = {});
// Trace-set variant (constraint-free and custom-trace problems in tests).
ModeProblem reduce_theta(const ShellGeometry& geom, const TraceSet& traces,
                         SpaceTag label, int n, QuotientKind kind,
                         Resolution res = {});

// 1D fast path: exact only for the parity tags (sine/cosine axial structure).
ModeProblem reduce_theta_z(const ShellGeometry& geom, SpaceTag parity_space,
                           int m, int n, QuotientKind kind,
                           Resolution res = {});

// Evaluate the assembled numerator/denominator form on a full profile stack
// (must satisfy the restriction; layout: component-major, r-major, z-minor).
double eval_form(const ModeProblem& p, const Eigen::VectorXd& full_profile,
                 bool numerator);

// Reconstruct the real 3D displacement of a profile (for quadrature oracles).
// For the 2D path the grid must match the problem's (nr, nz) nodes.
DisplacementField synthesize_mode(const ModeProblem& p, GridPtr grid,
                                  const Eigen::VectorXd& full_profile);

struct ModeValue {
  ModeIndex index;
  double value = 0.0;
  double residual = 0.0;
  int deflated = 0;  // kernel directions projected out before solving
  bool skipped = false;
  std::string note;
};

struct EnvelopeResult {
  double value = 0.0;
  ModeIndex index;      // achieving mode
  double residual = 0.0;
  int nr = 0, nz = 0;
  bool truncation_warning = false;
  std::vector<ModeValue> per_mode;
};

struct EnvelopeOptions {
  int n_max = 0;  // 0 = policy default ceil(4 h^-1/4)
  int m_max = 8;  // 1D path only
  Resolution res;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  bool auto_enlarge = true;  // grow the truncation when the extreme sits on it
};

int default_n_max(double h);

// Extreme of the per-mode extreme eigenvalues over the truncation window:
// min over modes for Korn, max for the component kinds.
EnvelopeResult mode_envelope(const ShellGeometry& geom, SpaceTag space,
                             QuotientKind kind, Path path,
                             const EnvelopeOptions& opt = {});

}  // namespace korn::modes
