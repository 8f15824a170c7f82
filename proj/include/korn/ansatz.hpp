#pragma once

#include <vector>

#include "korn/fields.hpp"
#include "korn/geometry.hpp"

namespace korn::ansatz {

// Oscillatory displacement built from a compactly supported polynomial bump
// W(eta, zeta) = (1-eta^2)^6 (1-zeta^2)^6 with scaled coordinates
// eta = (theta - theta_c)/a and zeta = (z - L/2)/b_eff. The scales obey
// sqrt(h) <= a <= 1 and h < b <= 1 (AdmissibilityError otherwise); long
// bumps are clipped axially to b_eff = min(b, L/2). Components:
//   phi_r     = -W_ee
//   phi_theta =  r a W_e + ((r-1)/a) W_eee
//   phi_z     = -(a^2/b_eff) W_z + ((r-1)/b_eff) W_eez
// (subscripts: e = d/d eta, z = d/d zeta). The field vanishes identically
// outside the bump support, so it belongs to every trace family.

// Partial derivative W_{eta^di zeta^dj} (polynomial, exact); di, dj <= 4.
double bump_partial(int di, int dj, double eta, double zeta);

// Pointwise evaluation: components and the cylindrical gradient (with 1/r
// factors) at radius r and bump coordinates (eta, zeta), |eta|,|zeta| <= 1.
struct AnsatzSample {
  std::array<double, 3> phi;          // (phi_r, phi_theta, phi_z)
  std::array<std::array<double, 3>, 3> g;  // cylindrical gradient entries
};
AnsatzSample eval_ansatz(const ShellGeometry& geom, double a, double b,
                         double r, double eta, double zeta);

// Quadratic-form values of the ansatz over the shell, by tensor
// Gauss-Legendre quadrature in (r, eta, zeta). The (eta, zeta) integrands
// are polynomial and integrated exactly; the 1/r factors are analytic on the
// thin radial interval and resolved to machine precision.
struct QuotientBreakdown {
  double strain_sq = 0.0;       // |e(phi)|^2
  double grad_sq = 0.0;         // |grad phi|^2
  double comp_rtheta_sq = 0.0;  // |(grad phi)_{r,theta}|^2
  double comp_rz_sq = 0.0;
  double comp_thetaz_sq = 0.0;
  double rayleigh = 0.0;        // strain_sq / grad_sq
  double ratio_rtheta = 0.0;    // comp_*_sq / strain_sq
  double ratio_rz = 0.0;
  double ratio_thetaz = 0.0;
  double a = 0.0, b = 0.0;
  double b_effective = 0.0;
  bool support_shrunk = false;  // b exceeded L/2 and was clipped
};

QuotientBreakdown ansatz_quotient(const ShellGeometry& geom, double a,
                                  double b);

// Sample the ansatz onto a collocation grid, centered at theta = pi so the
// angular support avoids the periodic seam. Declared in V0 (it vanishes near
// both ends whenever b_eff <= L/2, which the admissibility bounds ensure).
DisplacementField build_ansatz(GridPtr grid, double a, double b);

// Scan the Rayleigh quotient over the admissible scale grid
// a = h^{k/8} (k = 0..4), b = h^{j/4} (j = 0..3).
struct ScanEntry {
  int k8 = 0, j4 = 0;
  double a = 0.0, b = 0.0;
  double rayleigh = 0.0;
  double ratio_rtheta = 0.0, ratio_rz = 0.0, ratio_thetaz = 0.0;
  bool support_shrunk = false;
};

struct ScanResult {
  std::vector<ScanEntry> entries;
  double best_a = 0.0, best_b = 0.0, best_rayleigh = 0.0;
  int best_k8 = 0, best_j4 = 0;
  // true when the minimum sits at (a, b) = (h^{1/4}, 1)
  bool minimum_at_quarter_power = false;
};

ScanResult scan_scales(const ShellGeometry& geom);

}  // namespace korn::ansatz
