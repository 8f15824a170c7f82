#include "korn/mode_reduction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <thread>
#include <utility>

#include "korn/basis1d.hpp"
#include "korn/util.hpp"

namespace korn::modes {

namespace {

constexpr double kPi = 3.14159265358979323846;

double theta_weight(int n) { return n == 0 ? 2.0 * kPi : kPi; }

// ---------------------------------------------------------------------------
// 2D path: per-n reduction to radial-axial profiles (f_r, f_theta, f_z)(r,z).
//
// With the real family (f_r cos n t, f_theta sin n t, f_z cos n t) the nine
// cylindrical gradient entries are pure cos(nt) or sin(nt) multiples of
// profile expressions; both trig squares integrate to pi (2*pi at n = 0 where
// every factor is the constant 1). Each entry below lists the profile
// expression as terms (component, radial operator, axial operator).
// ---------------------------------------------------------------------------

struct Term2D {
  int comp;
  Eigen::MatrixXd R;
  const Eigen::MatrixXd* Z;
};

struct Entry2D {
  std::vector<Term2D> terms;
  double weight = 1.0;  // 2 for the off-diagonal strain entries
};

struct Ops2D {
  Eigen::MatrixXd Dr, Rinv, Ir, Dz, Iz;
  Eigen::VectorXd wr;  // radial weights including the measure factor r
  Eigen::VectorXd wz;
  int nr = 0, nz = 0;
};

void accumulate_entry(Eigen::MatrixXd& F, const Entry2D& e, double tweight,
                      const Ops2D& ops) {
  const int nr = ops.nr, nz = ops.nz;
  const int sz = nr * nz;
  for (const Term2D& a : e.terms) {
    for (const Term2D& b : e.terms) {
      Eigen::MatrixXd A = a.R.transpose() * ops.wr.asDiagonal() * b.R;
      Eigen::MatrixXd B = a.Z->transpose() * ops.wz.asDiagonal() * (*b.Z);
      const double coeff = e.weight * tweight;
      const int row0 = a.comp * sz;
      const int col0 = b.comp * sz;
      for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < nr; ++j) {
          const double c = coeff * A(i, j);
          if (c == 0.0) continue;
          F.block(row0 + i * nz, col0 + j * nz, nz, nz) += c * B;
        }
      }
    }
  }
}

struct EntryTable2D {
  // Gradient entries in row-major (r, theta, z) x (r, theta, z) order.
  std::array<Entry2D, 9> g;
  // Off-diagonal strain entries e12, e13, e23 (each carries weight 2).
  std::array<Entry2D, 3> e_off;
};

EntryTable2D make_entries_2d(int n, const Ops2D& o) {
  const double dn = static_cast<double>(n);
  EntryTable2D t;
  auto term = [](int c, Eigen::MatrixXd R, const Eigen::MatrixXd& Z) {
    return Term2D{c, std::move(R), &Z};
  };
  // Row 1: derivatives of phi_r.
  t.g[0].terms = {term(0, o.Dr, o.Iz)};
  t.g[1].terms = {term(0, -dn * o.Rinv, o.Iz), term(1, -o.Rinv, o.Iz)};
  t.g[2].terms = {term(0, o.Ir, o.Dz)};
  // Row 2: derivatives of phi_theta.
  t.g[3].terms = {term(1, o.Dr, o.Iz)};
  t.g[4].terms = {term(1, dn * o.Rinv, o.Iz), term(0, o.Rinv, o.Iz)};
  t.g[5].terms = {term(1, o.Ir, o.Dz)};
  // Row 3: derivatives of phi_z.
  t.g[6].terms = {term(2, o.Dr, o.Iz)};
  t.g[7].terms = {term(2, -dn * o.Rinv, o.Iz)};
  t.g[8].terms = {term(2, o.Ir, o.Dz)};

  t.e_off[0].terms = {term(0, -0.5 * dn * o.Rinv, o.Iz),
                      term(1, 0.5 * (o.Dr - o.Rinv).eval(), o.Iz)};
  t.e_off[1].terms = {term(0, 0.5 * o.Ir, o.Dz), term(2, 0.5 * o.Dr, o.Iz)};
  t.e_off[2].terms = {term(1, 0.5 * o.Ir, o.Dz),
                      term(2, -0.5 * dn * o.Rinv, o.Iz)};
  for (auto& e : t.e_off) e.weight = 2.0;
  return t;
}

Eigen::MatrixXd form_2d(const EntryTable2D& t, const Ops2D& o, double tweight,
                        const std::vector<int>& grad_entries,
                        bool strain_offdiag) {
  const int size = 3 * o.nr * o.nz;
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(size, size);
  for (int k : grad_entries) accumulate_entry(F, t.g[k], tweight, o);
  if (strain_offdiag) {
    for (const auto& e : t.e_off) accumulate_entry(F, e, tweight, o);
  }
  return F;
}

// ---------------------------------------------------------------------------
// 1D path: for the parity families the axial structure is a single sine or
// cosine and the z-integrals are closed form, leaving radial profiles only.
// Component c carries axial placement sin(kz) or cos(kz) (k = pi m / L):
// odd parity uses (sin, sin, cos), even parity (cos, cos, sin). An entry
// without an axial derivative inherits its component's placement; an axial
// derivative maps sin -> +k cos, cos -> -k sin.
// ---------------------------------------------------------------------------

enum class ZTrig { Sin, Cos };

struct Term1D {
  int comp;
  Eigen::MatrixXd R;
};

struct Entry1D {
  std::vector<Term1D> terms;
  ZTrig ztype = ZTrig::Sin;
  double weight = 1.0;
};

struct Ops1D {
  Eigen::MatrixXd Dr, Rinv, Ir;
  Eigen::VectorXd wr;
  int nr = 0;
};

double z_integral(ZTrig t, int m, double L) {
  if (m >= 1) return 0.5 * L;
  return t == ZTrig::Cos ? L : 0.0;
}

void accumulate_entry(Eigen::MatrixXd& F, const Entry1D& e, double tweight,
                      int m, double L, const Ops1D& ops) {
  const double zw = z_integral(e.ztype, m, L);
  if (zw == 0.0) return;
  for (const Term1D& a : e.terms) {
    for (const Term1D& b : e.terms) {
      Eigen::MatrixXd A = a.R.transpose() * ops.wr.asDiagonal() * b.R;
      F.block(a.comp * ops.nr, b.comp * ops.nr, ops.nr, ops.nr) +=
          (e.weight * tweight * zw) * A;
    }
  }
}

struct EntryTable1D {
  std::array<Entry1D, 9> g;
  std::array<Entry1D, 3> e_off;
};

EntryTable1D make_entries_1d(int n, int m, double L, bool odd,
                             const Ops1D& o) {
  const double dn = static_cast<double>(n);
  const double k = kPi * static_cast<double>(m) / L;
  // Placements per component and the effect of d/dz on each.
  const ZTrig zf[3] = {odd ? ZTrig::Sin : ZTrig::Cos,
                       odd ? ZTrig::Sin : ZTrig::Cos,
                       odd ? ZTrig::Cos : ZTrig::Sin};
  auto flip = [](ZTrig t) {
    return t == ZTrig::Sin ? ZTrig::Cos : ZTrig::Sin;
  };
  auto dz_factor = [&](int c) { return zf[c] == ZTrig::Sin ? k : -k; };

  EntryTable1D t;
  t.g[0] = {{{0, o.Dr}}, zf[0]};
  t.g[1] = {{{0, -dn * o.Rinv}, {1, -o.Rinv}}, zf[0]};
  t.g[2] = {{{0, dz_factor(0) * o.Ir}}, flip(zf[0])};
  t.g[3] = {{{1, o.Dr}}, zf[1]};
  t.g[4] = {{{1, dn * o.Rinv}, {0, o.Rinv}}, zf[1]};
  t.g[5] = {{{1, dz_factor(1) * o.Ir}}, flip(zf[1])};
  t.g[6] = {{{2, o.Dr}}, zf[2]};
  t.g[7] = {{{2, -dn * o.Rinv}}, zf[2]};
  t.g[8] = {{{2, dz_factor(2) * o.Ir}}, flip(zf[2])};

  t.e_off[0] = {{{0, -0.5 * dn * o.Rinv}, {1, 0.5 * (o.Dr - o.Rinv).eval()}},
                zf[0],
                2.0};
  t.e_off[1] = {{{0, 0.5 * dz_factor(0) * o.Ir}, {2, 0.5 * o.Dr}},
                flip(zf[0]),
                2.0};
  t.e_off[2] = {{{1, 0.5 * dz_factor(1) * o.Ir}, {2, -0.5 * dn * o.Rinv}},
                flip(zf[1]),
                2.0};
  return t;
}

Eigen::MatrixXd form_1d(const EntryTable1D& t, const Ops1D& o, double tweight,
                        int m, double L, const std::vector<int>& grad_entries,
                        bool strain_offdiag) {
  const int size = 3 * o.nr;
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(size, size);
  for (int k : grad_entries) accumulate_entry(F, t.g[k], tweight, m, L, o);
  if (strain_offdiag) {
    for (const auto& e : t.e_off) accumulate_entry(F, e, tweight, m, L, o);
  }
  return F;
}

// Gradient-entry index sets for the four quotients. Row-major indexing of
// the 3x3 gradient: 0..8. Strain diagonals coincide with gradient diagonals.
const std::vector<int> kAllEntries = {0, 1, 2, 3, 4, 5, 6, 7, 8};
const std::vector<int> kDiagEntries = {0, 4, 8};
const std::vector<int> kEntryRTheta = {1};
const std::vector<int> kEntryRZ = {2};
const std::vector<int> kEntryThetaZ = {5};

struct FormPlan {
  std::vector<int> num_entries;
  bool num_strain = false;
  std::vector<int> den_entries;
  bool den_strain = false;
};

FormPlan plan_for(QuotientKind kind) {
  switch (kind) {
    case QuotientKind::Korn:
      return {kDiagEntries, true, kAllEntries, false};
    case QuotientKind::ComponentRTheta:
      return {kEntryRTheta, false, kDiagEntries, true};
    case QuotientKind::ComponentRZ:
      return {kEntryRZ, false, kDiagEntries, true};
    case QuotientKind::ComponentThetaZ:
      return {kEntryThetaZ, false, kDiagEntries, true};
  }
  throw ConfigError("unknown quotient kind");
}

Eigen::MatrixXd restrict_form(const Eigen::MatrixXd& F,
                              const std::vector<int>& keep) {
  Eigen::MatrixXd G(keep.size(), keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a) {
    for (std::size_t b = 0; b < keep.size(); ++b) {
      G(a, b) = F(keep[a], keep[b]);
    }
  }
  return G;
}

std::vector<int> kept_dofs_2d(const TraceSet& traces, int nr, int nz) {
  std::vector<int> keep;
  keep.reserve(3 * nr * nz);
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < nr; ++i) {
      for (int k = 0; k < nz; ++k) {
        if (k == 0 && traces.pinned[c][0]) continue;
        if (k == nz - 1 && traces.pinned[c][1]) continue;
        keep.push_back((c * nr + i) * nz + k);
      }
    }
  }
  return keep;
}

std::vector<int> kept_dofs_1d(bool odd, int m, int nr) {
  std::vector<int> keep;
  keep.reserve(3 * nr);
  for (int c = 0; c < 3; ++c) {
    // At m = 0 a sine placement vanishes identically; those components carry
    // no degrees of freedom.
    const bool sine = odd ? (c != 2) : (c == 2);
    if (m == 0 && sine) continue;
    for (int i = 0; i < nr; ++i) keep.push_back(c * nr + i);
  }
  return keep;
}

}  // namespace

QuotientKind kind_from_string(const std::string& s) {
  if (s == "korn") return QuotientKind::Korn;
  if (s == "rtheta") return QuotientKind::ComponentRTheta;
  if (s == "rz") return QuotientKind::ComponentRZ;
  if (s == "thetaz") return QuotientKind::ComponentThetaZ;
  throw ConfigError("unknown quotient kind '" + s +
                    "' (expected korn|rtheta|rz|thetaz)");
}

std::string to_string(QuotientKind k) {
  switch (k) {
    case QuotientKind::Korn:
      return "korn";
    case QuotientKind::ComponentRTheta:
      return "rtheta";
    case QuotientKind::ComponentRZ:
      return "rz";
    case QuotientKind::ComponentThetaZ:
      return "thetaz";
  }
  return "?";
}

Resolution resolve_resolution(const ShellGeometry& geom, Resolution req) {
  Resolution out;
  if (req.nr < 0 || req.nz < 0) {
    throw ResolutionError("resolution values must be nonnegative");
  }
  if ((req.nr > 0 && req.nr < 4) || (req.nz > 0 && req.nz < 4)) {
    throw ResolutionError("resolution must be at least 4 nodes per direction");
  }
  out.nr = req.nr > 0 ? req.nr : 10;
  out.nz = req.nz > 0
               ? req.nz
               : std::max<int>(24, static_cast<int>(std::lround(
                                       16.0 + 8.0 * geom.L)));
  return out;
}

int default_n_max(double h) {
  return static_cast<int>(std::ceil(4.0 * std::pow(h, -0.25)));
}

ModeProblem reduce_theta(const ShellGeometry& geom, const TraceSet& traces,
                         SpaceTag label, int n, QuotientKind kind,
                         Resolution res) {
  geom.validate();
  Resolution r = resolve_resolution(geom, res);
  const int nr = r.nr, nz = r.nz;

  Cheb1D cr = cheb_lobatto(nr, geom.r_inner(), geom.r_outer());
  Cheb1D cz = cheb_lobatto(nz, 0.0, geom.L);

  Ops2D ops;
  ops.nr = nr;
  ops.nz = nz;
  ops.Dr = cr.D;
  ops.Dz = cz.D;
  ops.Ir = Eigen::MatrixXd::Identity(nr, nr);
  ops.Iz = Eigen::MatrixXd::Identity(nz, nz);
  ops.Rinv = cr.x.cwiseInverse().asDiagonal();
  ops.wr = cr.w.cwiseProduct(cr.x);
  ops.wz = cz.w;

  EntryTable2D table = make_entries_2d(n, ops);
  const double tw = theta_weight(std::abs(n));
  FormPlan plan = plan_for(kind);

  ModeProblem p;
  p.index = {n, -1};
  p.kind = kind;
  p.space = label;
  p.geom = geom;
  p.nr = nr;
  p.nz = nz;
  p.full_size = 3 * nr * nz;
  p.dofs = kept_dofs_2d(traces, nr, nz);
  Eigen::MatrixXd N = form_2d(table, ops, tw, plan.num_entries,
                              plan.num_strain);
  Eigen::MatrixXd D = form_2d(table, ops, tw, plan.den_entries,
                              plan.den_strain);
  p.N = restrict_form(N, p.dofs);
  p.D = restrict_form(D, p.dofs);
  return p;
}

ModeProblem reduce_theta(const ShellGeometry& geom, SpaceTag space, int n,
                         QuotientKind kind, Resolution res) {
  return reduce_theta(geom, trace_conditions(space), space, n, kind, res);
}

ModeProblem reduce_theta_z(const ShellGeometry& geom, SpaceTag parity_space,
                           int m, int n, QuotientKind kind, Resolution res) {
  geom.validate();
  if (parity_space != SpaceTag::ParityOdd &&
      parity_space != SpaceTag::ParityEven) {
    throw ConfigError(
        "the axial fast path applies to the parity families only");
  }
  if (m < 0) throw ConfigError("axial index must be nonnegative");
  const bool odd = parity_space == SpaceTag::ParityOdd;
  Resolution r = resolve_resolution(geom, res);
  const int nr = r.nr;

  Cheb1D cr = cheb_lobatto(nr, geom.r_inner(), geom.r_outer());
  Ops1D ops;
  ops.nr = nr;
  ops.Dr = cr.D;
  ops.Ir = Eigen::MatrixXd::Identity(nr, nr);
  ops.Rinv = cr.x.cwiseInverse().asDiagonal();
  ops.wr = cr.w.cwiseProduct(cr.x);

  EntryTable1D table = make_entries_1d(n, m, geom.L, odd, ops);
  const double tw = theta_weight(std::abs(n));
  FormPlan plan = plan_for(kind);

  ModeProblem p;
  p.index = {n, m};
  p.kind = kind;
  p.space = parity_space;
  p.geom = geom;
  p.nr = nr;
  p.nz = 1;
  p.full_size = 3 * nr;
  p.dofs = kept_dofs_1d(odd, m, nr);
  Eigen::MatrixXd N =
      form_1d(table, ops, tw, m, geom.L, plan.num_entries, plan.num_strain);
  Eigen::MatrixXd D =
      form_1d(table, ops, tw, m, geom.L, plan.den_entries, plan.den_strain);
  p.N = restrict_form(N, p.dofs);
  p.D = restrict_form(D, p.dofs);
  return p;
}

double eval_form(const ModeProblem& p, const Eigen::VectorXd& full_profile,
                 bool numerator) {
  if (full_profile.size() != p.full_size) {
    throw ConfigError("profile length does not match the mode problem");
  }
  std::vector<char> kept(static_cast<std::size_t>(p.full_size), 0);
  for (int d : p.dofs) kept[static_cast<std::size_t>(d)] = 1;
  const double scale =
      std::max(1.0, full_profile.cwiseAbs().maxCoeff());
  for (int i = 0; i < p.full_size; ++i) {
    if (!kept[static_cast<std::size_t>(i)] &&
        std::abs(full_profile[i]) > 1e-10 * scale) {
      throw TraceError(
          "profile violates the trace restriction of the mode problem");
    }
  }
  Eigen::VectorXd x(p.dofs.size());
  for (std::size_t a = 0; a < p.dofs.size(); ++a) {
    x[a] = full_profile[p.dofs[a]];
  }
  const Eigen::MatrixXd& F = numerator ? p.N : p.D;
  return x.dot(F * x);
}

DisplacementField synthesize_mode(const ModeProblem& p, GridPtr grid,
                                  const Eigen::VectorXd& full_profile) {
  if (!grid) throw ConfigError("null grid");
  if (full_profile.size() != p.full_size) {
    throw ConfigError("profile length does not match the mode problem");
  }
  const ShellGeometry& g = grid->geometry();
  if (std::abs(g.h - p.geom.h) > 1e-14 || std::abs(g.L - p.geom.L) > 1e-14) {
    throw ConfigError("grid geometry does not match the mode problem");
  }
  if (grid->nr() != p.nr) {
    throw ResolutionError(
        "grid radial resolution must match the mode problem");
  }
  const bool two_d = p.nz > 1;
  if (two_d && grid->nz() != p.nz) {
    throw ResolutionError("grid axial resolution must match the mode problem");
  }
  const int n = p.index.n;
  const int nr = grid->nr(), nth = grid->ntheta(), nzg = grid->nz();

  std::array<Scalar3, 3> comps;
  for (auto& c : comps) c = Scalar3::Zero(grid->size());

  // Angular placement: (cos, sin, cos) at wavenumber n; constant 1 at n = 0.
  Eigen::VectorXd cn(nth), sn(nth);
  for (int j = 0; j < nth; ++j) {
    const double t = grid->theta().x[j];
    cn[j] = n == 0 ? 1.0 : std::cos(n * t);
    sn[j] = n == 0 ? 1.0 : std::sin(n * t);
  }

  if (two_d) {
    const int sz = p.nr * p.nz;
    for (int c = 0; c < 3; ++c) {
      const Eigen::VectorXd& ang = (c == 1) ? sn : cn;
      for (int i = 0; i < nr; ++i) {
        for (int k = 0; k < nzg; ++k) {
          const double f = full_profile[c * sz + i * p.nz + k];
          for (int j = 0; j < nth; ++j) {
            comps[c][grid->idx(i, j, k)] = f * ang[j];
          }
        }
      }
    }
  } else {
    const bool odd = p.space == SpaceTag::ParityOdd;
    const double k = kPi * static_cast<double>(p.index.m) / g.L;
    for (int c = 0; c < 3; ++c) {
      const Eigen::VectorXd& ang = (c == 1) ? sn : cn;
      const bool sine = odd ? (c != 2) : (c == 2);
      for (int i = 0; i < nr; ++i) {
        const double f = full_profile[c * nr + i];
        for (int kk = 0; kk < nzg; ++kk) {
          const double z = grid->z().x[kk];
          const double zfac = sine ? std::sin(k * z) : std::cos(k * z);
          for (int j = 0; j < nth; ++j) {
            comps[c][grid->idx(i, j, kk)] = f * zfac * ang[j];
          }
        }
      }
    }
  }
  return DisplacementField(grid, p.space, std::move(comps));
}

namespace {

ModeValue solve_mode(const ModeProblem& p, double tol, std::uint64_t seed) {
  ModeValue out;
  out.index = p.index;
  eig::PencilSpec spec;
  spec.N = p.N;
  spec.D = p.D;
  spec.which = p.kind == QuotientKind::Korn ? eig::Extreme::Smallest
                                            : eig::Extreme::Largest;
  spec.tol = tol;
  spec.seed = seed;

  auto run = [&](const eig::PencilSpec& s) {
    eig::EigResult r = eig::extreme_eig(s);
    out.value = r.value;
    out.residual = r.residual;
  };

  try {
    run(spec);
    return out;
  } catch (const KernelError&) {
    // The denominator has a null direction on this mode (a rigid profile).
    // Project it out and solve on the complement, recording the deflation.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.D);
    if (es.info() != Eigen::Success) {
      out.skipped = true;
      out.note = "denominator eigendecomposition failed";
      return out;
    }
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double vmax = ev.size() ? ev.maxCoeff() : 0.0;
    if (!(vmax > 0.0)) {
      out.skipped = true;
      out.note = "denominator vanishes on the whole mode subspace";
      return out;
    }
    const double thresh = 1e-12 * vmax;
    std::vector<int> cols;
    for (int i = 0; i < ev.size(); ++i) {
      if (ev[i] > thresh) cols.push_back(i);
    }
    if (cols.empty()) {
      out.skipped = true;
      out.note = "denominator vanishes on the whole mode subspace";
      return out;
    }
    Eigen::MatrixXd V(p.D.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t a = 0; a < cols.size(); ++a) {
      V.col(static_cast<Eigen::Index>(a)) = es.eigenvectors().col(cols[a]);
    }
    out.deflated = static_cast<int>(p.D.rows()) - static_cast<int>(cols.size());
    eig::PencilSpec s2 = spec;
    s2.N = V.transpose() * p.N * V;
    s2.D = V.transpose() * p.D * V;
    try {
      run(s2);
      out.note = "denominator kernel deflated";
      return out;
    } catch (const Error& e) {
      out.skipped = true;
      out.note = std::string("deflated solve failed: ") + e.what();
      return out;
    }
  } catch (const IterationCapError& e) {
    if (e.best_residual <= std::max(1e-6, 100.0 * tol)) {
      out.value = e.best_value;
      out.residual = e.best_residual;
      out.note = "iteration cap reached; best iterate within loose tolerance";
      return out;
    }
    out.skipped = true;
    out.note = std::string("iteration cap: ") + e.what();
    return out;
  } catch (const ConditionError& e) {
    out.skipped = true;
    out.note = std::string("ill-conditioned denominator: ") + e.what();
    return out;
  }
}

struct Job {
  int n;
  int m;  // -1 on the 2D path
};

std::uint64_t job_seed(std::uint64_t base, const Job& j) {
  // Keyed by mode identity so results are independent of scheduling order.
  return base + 1000003ull * static_cast<std::uint64_t>(j.n + 1) +
         7919ull * static_cast<std::uint64_t>(j.m + 2);
}

void run_jobs(const std::vector<Job>& jobs,
              const std::function<ModeValue(const Job&)>& solve,
              std::vector<ModeValue>& out) {
  const std::size_t base = out.size();
  out.resize(base + jobs.size());
  int cap = thread_cap();
  cap = std::min<int>(cap, static_cast<int>(jobs.size()));
  if (cap <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      out[base + i] = solve(jobs[i]);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) break;
      ModeValue v;
      try {
        v = solve(jobs[i]);
      } catch (const std::exception& e) {
        v.index = {jobs[i].n, jobs[i].m};
        v.skipped = true;
        v.note = e.what();
      }
      out[base + i] = std::move(v);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(cap));
  for (int t = 0; t < cap; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace

EnvelopeResult mode_envelope(const ShellGeometry& geom, SpaceTag space,
                             QuotientKind kind, Path path,
                             const EnvelopeOptions& opt) {
  geom.validate();
  if (path == Path::OneD && space != SpaceTag::ParityOdd &&
      space != SpaceTag::ParityEven) {
    throw ConfigError(
        "the axial fast path applies to the parity families only");
  }
  Resolution res = resolve_resolution(geom, opt.res);

  const bool minimize = kind == QuotientKind::Korn;
  int n_hi = opt.n_max > 0 ? opt.n_max : default_n_max(geom.h);
  int m_hi = path == Path::OneD ? std::max(0, opt.m_max) : -1;

  auto solve = [&](const Job& j) -> ModeValue {
    try {
      ModeProblem p =
          path == Path::TwoD
              ? reduce_theta(geom, space, j.n, kind, res)
              : reduce_theta_z(geom, space, j.m, j.n, kind, res);
      return solve_mode(p, opt.tol, job_seed(opt.seed, j));
    } catch (const Error& e) {
      ModeValue v;
      v.index = {j.n, j.m};
      v.skipped = true;
      v.note = e.what();
      return v;
    }
  };

  std::vector<ModeValue> results;
  auto enqueue = [&](int n_lo, int n_up, int m_lo, int m_up) {
    std::vector<Job> jobs;
    for (int n = n_lo; n <= n_up; ++n) {
      if (path == Path::TwoD) {
        jobs.push_back({n, -1});
      } else {
        for (int m = m_lo; m <= m_up; ++m) jobs.push_back({n, m});
      }
    }
    run_jobs(jobs, solve, results);
  };

  enqueue(0, n_hi, 0, m_hi);

  const int kMaxEnlarge = 3;
  const int kNCap = 256;
  const int kMCap = 64;
  int enlargements = 0;
  bool on_boundary = false;

  auto best_index = [&]() -> int {
    int best = -1;
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i].skipped) continue;
      if (best < 0 ||
          (minimize ? results[i].value < results[best].value
                    : results[i].value > results[best].value)) {
        best = static_cast<int>(i);
      }
    }
    return best;
  };

  for (;;) {
    int best = best_index();
    if (best < 0) {
      throw DegenerateInputError(
          "every mode in the truncation window failed to solve");
    }
    const ModeIndex bi = results[static_cast<std::size_t>(best)].index;
    const bool n_edge = bi.n >= n_hi && n_hi < kNCap;
    const bool m_edge =
        path == Path::OneD && bi.m >= m_hi && m_hi < kMCap;
    on_boundary = (bi.n >= n_hi) || (path == Path::OneD && bi.m >= m_hi);
    if (!on_boundary || !opt.auto_enlarge || enlargements >= kMaxEnlarge ||
        (!n_edge && !m_edge)) {
      break;
    }
    ++enlargements;
    const int new_n_hi =
        n_edge ? std::min(kNCap, n_hi + std::max(2, n_hi / 2)) : n_hi;
    const int new_m_hi =
        m_edge ? std::min(kMCap, m_hi + std::max(2, m_hi / 2)) : m_hi;
    if (new_n_hi > n_hi) enqueue(n_hi + 1, new_n_hi, 0, new_m_hi);
    if (new_m_hi > m_hi) enqueue(0, n_hi, m_hi + 1, new_m_hi);
    n_hi = new_n_hi;
    m_hi = new_m_hi;
  }

  int best = best_index();
  EnvelopeResult out;
  out.value = results[static_cast<std::size_t>(best)].value;
  out.index = results[static_cast<std::size_t>(best)].index;
  out.residual = results[static_cast<std::size_t>(best)].residual;
  out.nr = res.nr;
  out.nz = path == Path::TwoD ? res.nz : 1;
  out.truncation_warning = on_boundary;
  std::sort(results.begin(), results.end(),
            [](const ModeValue& a, const ModeValue& b) {
              if (a.index.n != b.index.n) return a.index.n < b.index.n;
              return a.index.m < b.index.m;
            });
  out.per_mode = std::move(results);
  return out;
}

}  // namespace korn::modes
