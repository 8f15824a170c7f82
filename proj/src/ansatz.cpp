#include "korn/ansatz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "korn/basis1d.hpp"
#include "korn/util.hpp"

namespace korn::ansatz {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Dense ascending coefficient polynomials; small fixed degrees.
using Poly = std::vector<double>;

double eval(const Poly& p, double x) {
  double acc = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

Poly deriv(const Poly& p) {
  if (p.size() <= 1) return {0.0};
  Poly d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) {
    d[i - 1] = static_cast<double>(i) * p[i];
  }
  return d;
}

// (1 - x^2)^6 and its first four derivatives.
const std::array<Poly, 5>& bump_table() {
  static const std::array<Poly, 5> table = [] {
    Poly base(13, 0.0);
    // binomial expansion of (1 - x^2)^6
    double c = 1.0;
    for (int i = 0; i <= 6; ++i) {
      base[static_cast<std::size_t>(2 * i)] = (i % 2 == 0 ? c : -c);
      c = c * static_cast<double>(6 - i) / static_cast<double>(i + 1);
    }
    std::array<Poly, 5> t;
    t[0] = base;
    for (int k = 1; k <= 4; ++k) t[static_cast<std::size_t>(k)] =
        deriv(t[static_cast<std::size_t>(k - 1)]);
    return t;
  }();
  return table;
}

struct Scales {
  double a = 0.0;
  double b_eff = 0.0;
  bool shrunk = false;
};

Scales admit(const ShellGeometry& geom, double a, double b) {
  geom.validate();
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw AdmissibilityError("scales must be finite");
  }
  const double root_h = std::sqrt(geom.h);
  const double slack = 1e-12;
  if (a < root_h * (1.0 - slack) || a > 1.0 + slack) {
    throw AdmissibilityError("angular scale must lie in [sqrt(h), 1]");
  }
  if (b <= geom.h * (1.0 + slack) || b > 1.0 + slack) {
    throw AdmissibilityError("axial scale must lie in (h, 1]");
  }
  Scales s;
  s.a = a;
  s.b_eff = std::min(b, 0.5 * geom.L);
  s.shrunk = b > 0.5 * geom.L;
  return s;
}

struct Partials {
  // w[i][j] = W_{eta^i zeta^j}
  double w[5][5];
};

Partials bump_partials(double eta, double zeta) {
  const auto& t = bump_table();
  double pe[5], pz[5];
  for (int k = 0; k <= 4; ++k) {
    pe[k] = eval(t[static_cast<std::size_t>(k)], eta);
    pz[k] = eval(t[static_cast<std::size_t>(k)], zeta);
  }
  Partials out;
  for (int i = 0; i <= 4; ++i) {
    for (int j = 0; j <= 4; ++j) out.w[i][j] = pe[i] * pz[j];
  }
  return out;
}

AnsatzSample eval_at(double a, double b_eff, double r, double eta,
                     double zeta) {
  const Partials W = bump_partials(eta, zeta);
  const double rm1 = r - 1.0;
  const double inv_r = 1.0 / r;

  const double phi_r = -W.w[2][0];
  const double phi_t = r * a * W.w[1][0] + (rm1 / a) * W.w[3][0];
  const double phi_z = -(a * a / b_eff) * W.w[0][1] + (rm1 / b_eff) * W.w[2][1];

  // Raw partial derivatives; d/dtheta = (1/a) d/deta, d/dz = (1/b_eff) d/dzeta.
  const double dr_phi_r = 0.0;
  const double dt_phi_r = -(1.0 / a) * W.w[3][0];
  const double dz_phi_r = -(1.0 / b_eff) * W.w[2][1];

  const double dr_phi_t = a * W.w[1][0] + (1.0 / a) * W.w[3][0];
  const double dt_phi_t = r * W.w[2][0] + (rm1 / (a * a)) * W.w[4][0];
  const double dz_phi_t =
      (r * a / b_eff) * W.w[1][1] + (rm1 / (a * b_eff)) * W.w[3][1];

  const double dr_phi_z = (1.0 / b_eff) * W.w[2][1];
  const double dt_phi_z =
      -(a / b_eff) * W.w[1][1] + (rm1 / (a * b_eff)) * W.w[3][1];
  const double dz_phi_z = -(a * a / (b_eff * b_eff)) * W.w[0][2] +
                          (rm1 / (b_eff * b_eff)) * W.w[2][2];

  AnsatzSample s;
  s.phi = {phi_r, phi_t, phi_z};
  s.g[0][0] = dr_phi_r;
  s.g[0][1] = (dt_phi_r - phi_t) * inv_r;
  s.g[0][2] = dz_phi_r;
  s.g[1][0] = dr_phi_t;
  s.g[1][1] = (dt_phi_t + phi_r) * inv_r;
  s.g[1][2] = dz_phi_t;
  s.g[2][0] = dr_phi_z;
  s.g[2][1] = dt_phi_z * inv_r;
  s.g[2][2] = dz_phi_z;
  return s;
}

}  // namespace

double bump_partial(int di, int dj, double eta, double zeta) {
  if (di < 0 || di > 4 || dj < 0 || dj > 4) {
    throw ConfigError("bump derivatives are provided up to order four");
  }
  if (std::abs(eta) > 1.0 || std::abs(zeta) > 1.0) return 0.0;
  const auto& t = bump_table();
  return eval(t[static_cast<std::size_t>(di)], eta) *
         eval(t[static_cast<std::size_t>(dj)], zeta);
}

AnsatzSample eval_ansatz(const ShellGeometry& geom, double a, double b,
                         double r, double eta, double zeta) {
  Scales s = admit(geom, a, b);
  if (std::abs(eta) > 1.0 || std::abs(zeta) > 1.0) {
    AnsatzSample out{};
    return out;
  }
  return eval_at(s.a, s.b_eff, r, eta, zeta);
}

QuotientBreakdown ansatz_quotient(const ShellGeometry& geom, double a,
                                  double b) {
  Scales s = admit(geom, a, b);

  // Polynomial degree in eta and zeta is at most 22 per squared integrand;
  // 14-point Gauss-Legendre is exact beyond that. The radial integrands are
  // low-degree polynomials times 1/r or 1/r^2; 12 points on the thin interval
  // leave the analytic factors at machine precision.
  Quad1D qe = gauss_legendre(14, -1.0, 1.0);
  Quad1D qz = gauss_legendre(14, -1.0, 1.0);
  Quad1D qr = gauss_legendre(12, geom.r_inner(), geom.r_outer());

  KahanSum strain, grad, c_rt, c_rz, c_tz;
  for (int ir = 0; ir < qr.x.size(); ++ir) {
    const double r = qr.x[ir];
    for (int ie = 0; ie < qe.x.size(); ++ie) {
      for (int iz = 0; iz < qz.x.size(); ++iz) {
        AnsatzSample smp = eval_at(s.a, s.b_eff, r, qe.x[ie], qz.x[iz]);
        // dtheta = a deta, dz = b_eff dzeta, measure r dr dtheta dz.
        const double w =
            qr.w[ir] * r * (qe.w[ie] * s.a) * (qz.w[iz] * s.b_eff);
        double gsq = 0.0;
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) gsq += smp.g[i][j] * smp.g[i][j];
        }
        double esq = 0.0;
        for (int i = 0; i < 3; ++i) {
          esq += smp.g[i][i] * smp.g[i][i];
          for (int j = i + 1; j < 3; ++j) {
            const double eij = 0.5 * (smp.g[i][j] + smp.g[j][i]);
            esq += 2.0 * eij * eij;
          }
        }
        grad.add(w * gsq);
        strain.add(w * esq);
        c_rt.add(w * smp.g[0][1] * smp.g[0][1]);
        c_rz.add(w * smp.g[0][2] * smp.g[0][2]);
        c_tz.add(w * smp.g[1][2] * smp.g[1][2]);
      }
    }
  }

  QuotientBreakdown out;
  out.strain_sq = strain.value();
  out.grad_sq = grad.value();
  out.comp_rtheta_sq = c_rt.value();
  out.comp_rz_sq = c_rz.value();
  out.comp_thetaz_sq = c_tz.value();
  if (!(out.grad_sq > 0.0) || !(out.strain_sq > 0.0)) {
    throw DegenerateInputError("ansatz field degenerated to zero energy");
  }
  out.rayleigh = out.strain_sq / out.grad_sq;
  out.ratio_rtheta = out.comp_rtheta_sq / out.strain_sq;
  out.ratio_rz = out.comp_rz_sq / out.strain_sq;
  out.ratio_thetaz = out.comp_thetaz_sq / out.strain_sq;
  out.a = a;
  out.b = b;
  out.b_effective = s.b_eff;
  out.support_shrunk = s.shrunk;
  return out;
}

DisplacementField build_ansatz(GridPtr grid, double a, double b) {
  if (!grid) throw ConfigError("null grid");
  const ShellGeometry& geom = grid->geometry();
  Scales s = admit(geom, a, b);
  const double zc = 0.5 * geom.L;

  auto window = [&](double theta, double z, double* eta, double* zeta) {
    *eta = (theta - kPi) / s.a;
    *zeta = (z - zc) / s.b_eff;
    return std::abs(*eta) <= 1.0 && std::abs(*zeta) <= 1.0;
  };

  std::array<Scalar3, 3> comps;
  for (auto& c : comps) c = Scalar3::Zero(grid->size());
  for (int i = 0; i < grid->nr(); ++i) {
    const double r = grid->r().x[i];
    for (int j = 0; j < grid->ntheta(); ++j) {
      const double th = grid->theta().x[j];
      for (int k = 0; k < grid->nz(); ++k) {
        const double z = grid->z().x[k];
        double eta, zeta;
        if (!window(th, z, &eta, &zeta)) continue;
        AnsatzSample smp = eval_at(s.a, s.b_eff, r, eta, zeta);
        const Eigen::Index id = grid->idx(i, j, k);
        comps[0][id] = smp.phi[0];
        comps[1][id] = smp.phi[1];
        comps[2][id] = smp.phi[2];
      }
    }
  }
  return DisplacementField(grid, SpaceTag::V0, std::move(comps));
}

ScanResult scan_scales(const ShellGeometry& geom) {
  geom.validate();
  ScanResult out;
  bool first = true;
  for (int k8 = 0; k8 <= 4; ++k8) {
    const double a = std::pow(geom.h, static_cast<double>(k8) / 8.0);
    for (int j4 = 0; j4 <= 3; ++j4) {
      const double b = std::pow(geom.h, static_cast<double>(j4) / 4.0);
      QuotientBreakdown q = ansatz_quotient(geom, a, b);
      ScanEntry e;
      e.k8 = k8;
      e.j4 = j4;
      e.a = a;
      e.b = b;
      e.rayleigh = q.rayleigh;
      e.ratio_rtheta = q.ratio_rtheta;
      e.ratio_rz = q.ratio_rz;
      e.ratio_thetaz = q.ratio_thetaz;
      e.support_shrunk = q.support_shrunk;
      out.entries.push_back(e);
      if (first || q.rayleigh < out.best_rayleigh) {
        first = false;
        out.best_rayleigh = q.rayleigh;
        out.best_a = a;
        out.best_b = b;
        out.best_k8 = k8;
        out.best_j4 = j4;
      }
    }
  }
  out.minimum_at_quarter_power = (out.best_k8 == 2 && out.best_j4 == 0);
  return out;
}

}  // namespace korn::ansatz
