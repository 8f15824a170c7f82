// Tests for the circumferential / axial mode reduction: assembled pencils
// against 3D quadrature, closed forms, structural properties, and the
// envelope search.
#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "korn/basis1d.hpp"
#include "korn/fields.hpp"
#include "korn/geometry.hpp"
#include "korn/mode_reduction.hpp"
#include "korn/util.hpp"

using namespace korn;
using modes::ModeProblem;
using modes::QuotientKind;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Random profile supported on the kept dofs (so it satisfies the traces).
Eigen::VectorXd admissible_profile(const ModeProblem& p, SeededRng& rng) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(p.full_size);
  for (int d : p.dofs) full[d] = rng.uniform(-1.0, 1.0);
  return full;
}

// Quadrature values of the numerator/denominator quantity each kind encodes,
// computed from the synthesized 3D field (independent of the assembly).
double quad_form(const ModeProblem& p, const DisplacementField& f,
                 bool numerator) {
  GradField g = cylindrical_gradient(f);
  if (!numerator) {
    return p.kind == QuotientKind::Korn ? l2_norm_sq(g)
                                        : l2_norm_sq(symmetrize(g));
  }
  switch (p.kind) {
    case QuotientKind::Korn:
      return l2_norm_sq(symmetrize(g));
    case QuotientKind::ComponentRTheta:
      return l2_norm_sq(f.grid(), g.at(0, 1));
    case QuotientKind::ComponentRZ:
      return l2_norm_sq(f.grid(), g.at(0, 2));
    case QuotientKind::ComponentThetaZ:
      return l2_norm_sq(f.grid(), g.at(1, 2));
  }
  return 0.0;
}

// Extreme generalized eigenvalue with the denominator kernel projected out,
// as a dense oracle for envelope comparisons.
double dense_extreme_deflated(const Eigen::MatrixXd& N, const Eigen::MatrixXd& D,
                              bool smallest) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ed(D);
  const double cut = 1e-12 * ed.eigenvalues().maxCoeff();
  std::vector<int> cols;
  for (int i = 0; i < D.rows(); ++i) {
    if (ed.eigenvalues()[i] > cut) cols.push_back(i);
  }
  REQUIRE(!cols.empty());
  Eigen::MatrixXd V(D.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t a = 0; a < cols.size(); ++a) {
    V.col(static_cast<Eigen::Index>(a)) = ed.eigenvectors().col(cols[a]);
  }
  Eigen::MatrixXd Nr = V.transpose() * N * V;
  Eigen::MatrixXd Dr = V.transpose() * D * V;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Nr, Dr);
  return smallest ? ges.eigenvalues().minCoeff()
                  : ges.eigenvalues().maxCoeff();
}

}  // namespace

TEST_SUITE_BEGIN("mode_reduction");

TEST_CASE("assembled pencils are symmetric and positive semidefinite") {
  const ShellGeometry geom(0.2, 2.0);
  const modes::Resolution res{6, 8};
  for (QuotientKind kind :
       {QuotientKind::Korn, QuotientKind::ComponentRTheta,
        QuotientKind::ComponentRZ, QuotientKind::ComponentThetaZ}) {
    for (int n : {0, 2}) {
      ModeProblem p = modes::reduce_theta(geom, SpaceTag::V1, n, kind, res);
      const double nn = p.N.norm(), dn = p.D.norm();
      CHECK((p.N - p.N.transpose()).norm() <= 1e-12 * nn);
      CHECK((p.D - p.D.transpose()).norm() <= 1e-12 * dn);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> en(p.N);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ed(p.D);
      CHECK(en.eigenvalues().minCoeff() >= -1e-10 * nn);
      CHECK(ed.eigenvalues().minCoeff() >= -1e-10 * dn);
    }
  }
}

TEST_CASE("the infinitesimal rotation profile carries no strain energy") {
  // At n = 0 the profile f_theta(r) = r synthesizes phi = (0, r, 0), a rigid
  // rotation about the axis: strain form exactly zero, gradient form 4*pi*L*h.
  const double h = 0.2, L = 2.0;
  const ShellGeometry geom(h, L);
  TraceSet none;  // constraint-free
  ModeProblem p = modes::reduce_theta(geom, none, SpaceTag::Free, 0,
                                      QuotientKind::Korn, {8, 8});
  Cheb1D cr = cheb_lobatto(8, geom.r_inner(), geom.r_outer());
  Eigen::VectorXd prof = Eigen::VectorXd::Zero(p.full_size);
  for (int i = 0; i < 8; ++i) {
    for (int k = 0; k < 8; ++k) prof[(1 * 8 + i) * 8 + k] = cr.x[i];
  }
  const double num = modes::eval_form(p, prof, true);
  const double den = modes::eval_form(p, prof, false);
  CHECK(den == doctest::Approx(4.0 * kPi * L * h).epsilon(1e-12));
  CHECK(num <= 1e-12 * den);
}

TEST_CASE("2D-path forms match 3D quadrature on random admissible profiles") {
  const ShellGeometry geom(0.15, 2.0);
  const int nr = 8, nz = 10, nth = 16;
  SeededRng rng(42);
  GridPtr grid = Grid3::make(geom, nr, nth, nz);
  for (QuotientKind kind :
       {QuotientKind::Korn, QuotientKind::ComponentRTheta,
        QuotientKind::ComponentRZ, QuotientKind::ComponentThetaZ}) {
    ModeProblem p =
        modes::reduce_theta(geom, SpaceTag::V1, 3, kind, {nr, nz});
    Eigen::VectorXd prof = admissible_profile(p, rng);
    DisplacementField f = modes::synthesize_mode(p, grid, prof);
    for (bool numerator : {true, false}) {
      const double form = modes::eval_form(p, prof, numerator);
      const double quad = quad_form(p, f, numerator);
      CHECK(form == doctest::Approx(quad).epsilon(1e-9));
    }
  }
}

TEST_CASE("1D-path forms match closed-form axial integrals") {
  const double h = 0.2, L = 2.0;
  const ShellGeometry geom(h, L);
  const int nr = 10;
  const double k = kPi / L;  // axial wavenumber of the m = 1 mode
  ModeProblem p = modes::reduce_theta_z(geom, SpaceTag::ParityOdd, 1, 0,
                                        QuotientKind::Korn, {nr, 0});
  Cheb1D cr = cheb_lobatto(nr, geom.r_inner(), geom.r_outer());

  SUBCASE("constant axial profile") {
    // phi = (0, 0, cos(k z)): only e_zz = -k sin(k z) survives, giving
    // |e|^2 = |grad|^2 = k^2 * pi * L * h.
    Eigen::VectorXd prof = Eigen::VectorXd::Zero(p.full_size);
    for (int i = 0; i < nr; ++i) prof[2 * nr + i] = 1.0;
    const double expect = k * k * kPi * L * h;
    CHECK(modes::eval_form(p, prof, true) ==
          doctest::Approx(expect).epsilon(1e-12));
    CHECK(modes::eval_form(p, prof, false) ==
          doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("linear axial profile") {
    // phi = (0, 0, (r-1) cos(k z)): e_zz and e_rz contribute
    //   |e|^2 = k^2 pi L h^3/12 + pi L h / 2,
    //   |grad|^2 = k^2 pi L h^3/12 + pi L h.
    Eigen::VectorXd prof = Eigen::VectorXd::Zero(p.full_size);
    for (int i = 0; i < nr; ++i) prof[2 * nr + i] = cr.x[i] - 1.0;
    const double bend = k * k * kPi * L * h * h * h / 12.0;
    CHECK(modes::eval_form(p, prof, true) ==
          doctest::Approx(bend + kPi * L * h / 2.0).epsilon(1e-12));
    CHECK(modes::eval_form(p, prof, false) ==
          doctest::Approx(bend + kPi * L * h).epsilon(1e-12));
  }
}

TEST_CASE("1D and 2D paths agree on a parity space") {
  // Same quotient, two independent discretizations of the axial direction.
  const ShellGeometry geom(0.2, 2.0);
  ModeProblem p1 = modes::reduce_theta_z(geom, SpaceTag::ParityOdd, 1, 2,
                                         QuotientKind::Korn, {10, 0});
  ModeProblem p2 = modes::reduce_theta(geom, SpaceTag::ParityOdd, 2,
                                       QuotientKind::Korn, {10, 24});
  const double v1 = dense_extreme_deflated(p1.N, p1.D, true);
  // The 2D path sees every axial structure at once; its minimum over the
  // pencil cannot exceed the single-m value and the m-envelope recovers it.
  const double v2 = dense_extreme_deflated(p2.N, p2.D, true);
  CHECK(v2 <= v1 * (1.0 + 1e-9));
  double best_1d = v1;
  for (int m = 0; m <= 8; ++m) {
    ModeProblem pm = modes::reduce_theta_z(geom, SpaceTag::ParityOdd, m, 2,
                                           QuotientKind::Korn, {10, 0});
    best_1d = std::min(best_1d, dense_extreme_deflated(pm.N, pm.D, true));
  }
  CHECK(best_1d == doctest::Approx(v2).epsilon(5e-2));
}

TEST_CASE("distinct circumferential modes decouple in the 3D energy") {
  const ShellGeometry geom(0.15, 2.0);
  const int nr = 8, nz = 10, nth = 16;
  SeededRng rng(7);
  GridPtr grid = Grid3::make(geom, nr, nth, nz);
  ModeProblem p1 =
      modes::reduce_theta(geom, SpaceTag::V1, 2, QuotientKind::Korn, {nr, nz});
  ModeProblem p2 =
      modes::reduce_theta(geom, SpaceTag::V1, 5, QuotientKind::Korn, {nr, nz});
  Eigen::VectorXd a = admissible_profile(p1, rng);
  Eigen::VectorXd b = admissible_profile(p2, rng);
  DisplacementField fa = modes::synthesize_mode(p1, grid, a);
  DisplacementField fb = modes::synthesize_mode(p2, grid, b);
  std::array<Scalar3, 3> comps = {fa.comp(0) + fb.comp(0),
                                  fa.comp(1) + fb.comp(1),
                                  fa.comp(2) + fb.comp(2)};
  DisplacementField sum(grid, SpaceTag::V1, comps);
  const double e_sum = l2_norm_sq(symmetrize(cylindrical_gradient(sum)));
  const double e_parts =
      modes::eval_form(p1, a, true) + modes::eval_form(p2, b, true);
  CHECK(e_sum == doctest::Approx(e_parts).epsilon(1e-9));
}

TEST_CASE("nested trace spaces order the Korn quotient") {
  // More constraints can only raise the infimum: V0 pins everything V1 pins,
  // and V1 pins everything the odd parity family pins.
  const ShellGeometry geom(0.2, 2.0);
  const modes::Resolution res{8, 16};
  auto smallest = [&](SpaceTag s) {
    ModeProblem p = modes::reduce_theta(geom, s, 2, QuotientKind::Korn, res);
    return dense_extreme_deflated(p.N, p.D, true);
  };
  const double v0 = smallest(SpaceTag::V0);
  const double v1 = smallest(SpaceTag::V1);
  const double podd = smallest(SpaceTag::ParityOdd);
  CHECK(v0 >= v1 * (1.0 - 1e-9));
  CHECK(v1 >= podd * (1.0 - 1e-9));
}

TEST_CASE("envelope over a small window matches dense brute force") {
  const ShellGeometry geom(0.2, 2.0);
  modes::EnvelopeOptions opt;
  opt.n_max = 2;
  opt.m_max = 3;
  opt.res = {8, 0};
  opt.auto_enlarge = false;
  modes::EnvelopeResult env = modes::mode_envelope(
      geom, SpaceTag::ParityOdd, QuotientKind::Korn, modes::Path::OneD, opt);
  double best = std::numeric_limits<double>::infinity();
  modes::ModeIndex arg;
  for (int n = 0; n <= 2; ++n) {
    for (int m = 0; m <= 3; ++m) {
      ModeProblem p = modes::reduce_theta_z(geom, SpaceTag::ParityOdd, m, n,
                                            QuotientKind::Korn, {8, 0});
      if (p.dofs.empty()) continue;
      const double v = dense_extreme_deflated(p.N, p.D, true);
      if (v < best) {
        best = v;
        arg = {n, m};
      }
    }
  }
  CHECK(env.value == doctest::Approx(best).epsilon(1e-7));
  CHECK(env.index.n == arg.n);
  CHECK(env.index.m == arg.m);
  CHECK(env.per_mode.size() == 12);
}

TEST_CASE("envelope flags or escapes a truncation that clips the extreme") {
  const ShellGeometry geom(0.05, 2.0);
  modes::EnvelopeOptions opt;
  opt.n_max = 1;
  opt.m_max = 4;
  opt.res = {8, 0};

  opt.auto_enlarge = false;
  modes::EnvelopeResult capped = modes::mode_envelope(
      geom, SpaceTag::ParityOdd, QuotientKind::Korn, modes::Path::OneD, opt);
  CHECK(capped.truncation_warning);
  CHECK(capped.index.n == 1);

  opt.auto_enlarge = true;
  modes::EnvelopeResult grown = modes::mode_envelope(
      geom, SpaceTag::ParityOdd, QuotientKind::Korn, modes::Path::OneD, opt);
  CHECK(grown.index.n > 1);
  CHECK(grown.value < capped.value * (1.0 - 1e-6));
  CHECK_FALSE(grown.truncation_warning);
}

TEST_CASE("achieving wavenumber tracks the quarter-power of thickness") {
  auto star = [](double h) {
    modes::EnvelopeOptions opt;
    opt.res = {8, 0};
    modes::EnvelopeResult env =
        modes::mode_envelope(ShellGeometry(h, 2.0), SpaceTag::ParityOdd,
                             QuotientKind::Korn, modes::Path::OneD, opt);
    return env.index.n;
  };
  const int n_coarse = star(0.1);
  const int n_fine = star(0.025);
  CHECK(n_fine > n_coarse);
  CHECK(n_coarse >= 2);
  CHECK(static_cast<double>(n_coarse) >= 1.0 * std::pow(0.1, -0.25));
  CHECK(static_cast<double>(n_coarse) <= 4.0 * std::pow(0.1, -0.25));
  CHECK(static_cast<double>(n_fine) >= 1.0 * std::pow(0.025, -0.25));
  CHECK(static_cast<double>(n_fine) <= 4.0 * std::pow(0.025, -0.25));
}

TEST_CASE("invalid requests are rejected") {
  const ShellGeometry geom(0.2, 2.0);
  CHECK_THROWS_AS(modes::reduce_theta_z(geom, SpaceTag::V1, 1, 2,
                                        QuotientKind::Korn, {8, 0}),
                  ConfigError);
  CHECK_THROWS_AS(modes::reduce_theta_z(geom, SpaceTag::ParityOdd, -1, 2,
                                        QuotientKind::Korn, {8, 0}),
                  ConfigError);
  CHECK_THROWS_AS(modes::reduce_theta(geom, SpaceTag::V1, 2,
                                      QuotientKind::Korn, {3, 8}),
                  ResolutionError);

  ModeProblem p =
      modes::reduce_theta(geom, SpaceTag::V1, 2, QuotientKind::Korn, {6, 8});
  CHECK_THROWS_AS(modes::eval_form(p, Eigen::VectorXd::Zero(5), true),
                  ConfigError);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(p.full_size);
  bad[0] = 1.0;  // phi_r at z = 0 is pinned in this space
  CHECK_THROWS_AS(modes::eval_form(p, bad, true), TraceError);

  GridPtr wrong = Grid3::make(geom, 12, 8, 8);
  CHECK_THROWS_AS(
      modes::synthesize_mode(p, wrong, Eigen::VectorXd::Zero(p.full_size)),
      ResolutionError);
  CHECK_THROWS_AS(
      modes::synthesize_mode(p, nullptr, Eigen::VectorXd::Zero(p.full_size)),
      ConfigError);
}

TEST_CASE("quotient kind names round-trip") {
  for (QuotientKind k :
       {QuotientKind::Korn, QuotientKind::ComponentRTheta,
        QuotientKind::ComponentRZ, QuotientKind::ComponentThetaZ}) {
    CHECK(modes::kind_from_string(modes::to_string(k)) == k);
  }
  CHECK_THROWS_AS(modes::kind_from_string("bogus"), ConfigError);
}

TEST_SUITE_END();
