// Python bindings for the main operations: eigenvalue-based constants,
// the oscillatory-field quotient, rectangle checks, and sweeps.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "korn/ansatz.hpp"
#include "korn/eigensolver.hpp"
#include "korn/experiments.hpp"
#include "korn/geometry.hpp"
#include "korn/mode_reduction.hpp"
#include "korn/rectangle.hpp"

namespace py = pybind11;
using namespace korn;

namespace {

py::dict envelope_dict(const modes::EnvelopeResult& env) {
  py::dict d;
  d["value"] = env.value;
  d["n"] = env.index.n;
  d["m"] = env.index.m;
  d["residual"] = env.residual;
  d["nr"] = env.nr;
  d["nz"] = env.nz;
  d["truncation_warning"] = env.truncation_warning;
  return d;
}

py::dict korn_constant(double h, double L, const std::string& space,
                       const std::string& kind, const std::string& path,
                       int nr, int nz, int n_max, int m_max, double tol,
                       std::uint64_t seed) {
  modes::EnvelopeOptions opt;
  opt.n_max = n_max;
  opt.m_max = m_max;
  opt.res = {nr, nz};
  opt.tol = tol;
  opt.seed = seed;
  modes::EnvelopeResult env = modes::mode_envelope(
      ShellGeometry(h, L), space_from_string(space),
      modes::kind_from_string(kind), sweep::path_from_string(path), opt);
  return envelope_dict(env);
}

py::dict quotient_dict(const ansatz::QuotientBreakdown& q) {
  py::dict d;
  d["strain_sq"] = q.strain_sq;
  d["grad_sq"] = q.grad_sq;
  d["comp_rtheta_sq"] = q.comp_rtheta_sq;
  d["comp_rz_sq"] = q.comp_rz_sq;
  d["comp_thetaz_sq"] = q.comp_thetaz_sq;
  d["rayleigh"] = q.rayleigh;
  d["ratio_rtheta"] = q.ratio_rtheta;
  d["ratio_rz"] = q.ratio_rz;
  d["ratio_thetaz"] = q.ratio_thetaz;
  d["a"] = q.a;
  d["b"] = q.b;
  d["b_effective"] = q.b_effective;
  d["support_shrunk"] = q.support_shrunk;
  return d;
}

py::dict run_sweep(const std::vector<double>& hs, double L,
                   const std::string& space, const std::string& kind,
                   const std::string& path, bool ansatz_sweep, int nr, int nz,
                   int n_max, int m_max, double tol, std::uint64_t seed) {
  sweep::SweepConfig cfg;
  cfg.hs = hs;
  cfg.L = L;
  cfg.space = space_from_string(space);
  cfg.kind = modes::kind_from_string(kind);
  cfg.path = sweep::path_from_string(path);
  cfg.res = {nr, nz};
  cfg.n_max = n_max;
  cfg.m_max = m_max;
  cfg.tol = tol;
  cfg.seed = seed;
  cfg.ansatz = ansatz_sweep;
  sweep::SweepResult res = sweep::run_sweep(cfg);

  py::list rows;
  for (const auto& r : res.rows) {
    py::dict row;
    row["h"] = r.h;
    row["value"] = r.value;
    row["mode_n"] = r.mode_n;
    row["mode_m"] = r.mode_m;
    row["residual"] = r.residual;
    row["nr"] = r.nr;
    row["nz"] = r.nz;
    row["ok"] = r.ok;
    row["error"] = r.error;
    rows.append(row);
  }
  py::dict d;
  d["rows"] = rows;
  d["fit_ok"] = res.fit_ok;
  d["slope"] = res.fit.slope;
  d["intercept"] = res.fit.intercept;
  d["max_rel_residual"] = res.fit.max_rel_residual;
  d["csv"] = sweep::to_csv(res);
  d["json"] = sweep::to_json(res);
  d["svg"] = sweep::to_svg(res);
  d["config_hash"] = sweep::config_hash(cfg);
  return d;
}

py::dict extreme_eig(const Eigen::MatrixXd& N, const Eigen::MatrixXd& D,
                     const std::string& which, double tol, std::uint64_t seed,
                     int block) {
  eig::PencilSpec spec;
  spec.N = N;
  spec.D = D;
  spec.which =
      which == "largest" ? eig::Extreme::Largest : eig::Extreme::Smallest;
  spec.tol = tol;
  spec.seed = seed;
  spec.block = block;
  eig::EigResult pair = eig::extreme_eig(spec);
  py::dict d;
  d["value"] = pair.value;
  d["vector"] = pair.vector;
  d["residual"] = pair.residual;
  d["iterations"] = pair.iterations;
  return d;
}

}  // namespace

PYBIND11_MODULE(_kornlab, m) {
  m.doc() = "Korn-constant laboratory for thin cylindrical shells";

  m.def("k0_constant", &rect::k0_constant,
        "Explicit constant (sqrt(2) + 1/pi) / pi of the harmonic-projection "
        "bounds");
  m.def("psi", &rect::psi, py::arg("tau"),
        "Psi(tau) = tau^4 / (sinh^2 tau - tau^2)");
  m.def(
      "psi_checks",
      []() {
        rect::PsiChecks c = rect::psi_limit_checks();
        py::dict d;
        d["value_small"] = c.value_small;
        d["limit_gap"] = c.limit_gap;
        d["limit_ok"] = c.limit_ok;
        d["monotone"] = c.monotone;
        d["branch_gap"] = c.branch_gap;
        d["branch_ok"] = c.branch_ok;
        d["pass"] = c.pass;
        return d;
      },
      "Limit, monotonicity, and branch-agreement checks for Psi");
  m.def(
      "sharp_harmonic_check",
      [](double h, double p) {
        rect::SharpCheck c = rect::sharp_harmonic_check(h, p);
        py::dict d;
        d["h"] = c.h;
        d["p"] = c.p;
        d["lhs"] = c.lhs;
        d["lhs_closed"] = c.lhs_closed;
        d["tau"] = c.tau;
        d["rhs_tau"] = c.rhs_tau;
        d["tau1"] = c.tau1;
        d["rhs_tau1"] = c.rhs_tau1;
        d["equality_rel_gap"] = c.equality_rel_gap;
        d["equality_at_tau"] = c.equality_at_tau;
        d["tau1_discrepancy"] = c.tau1_discrepancy;
        return d;
      },
      py::arg("h"), py::arg("p"),
      "Equality of the extremal harmonic field in the sharp bound");
  m.def(
      "ansatz_quotient",
      [](double h, double L, double a, double b) {
        return quotient_dict(ansatz::ansatz_quotient(ShellGeometry(h, L), a, b));
      },
      py::arg("h"), py::arg("L"), py::arg("a"), py::arg("b"),
      "Closed-form Rayleigh quotient of the oscillatory field at scales "
      "(a, b)");
  m.def(
      "scan_scales",
      [](double h, double L) {
        ansatz::ScanResult s = ansatz::scan_scales(ShellGeometry(h, L));
        py::dict d;
        d["best_a"] = s.best_a;
        d["best_b"] = s.best_b;
        d["best_rayleigh"] = s.best_rayleigh;
        d["best_k8"] = s.best_k8;
        d["best_j4"] = s.best_j4;
        d["minimum_at_quarter_power"] = s.minimum_at_quarter_power;
        py::list entries;
        for (const auto& e : s.entries) {
          py::dict row;
          row["a"] = e.a;
          row["b"] = e.b;
          row["rayleigh"] = e.rayleigh;
          row["ratio_rtheta"] = e.ratio_rtheta;
          row["ratio_rz"] = e.ratio_rz;
          row["ratio_thetaz"] = e.ratio_thetaz;
          entries.append(row);
        }
        d["entries"] = entries;
        return d;
      },
      py::arg("h"), py::arg("L") = 2.0,
      "Rayleigh quotient over the admissible scale grid");
  m.def("korn_constant", &korn_constant, py::arg("h"), py::arg("L") = 2.0,
        py::arg("space") = "v1", py::arg("kind") = "korn",
        py::arg("path") = "2d", py::arg("nr") = 0, py::arg("nz") = 0,
        py::arg("n_max") = 0, py::arg("m_max") = 8, py::arg("tol") = 1e-8,
        py::arg("seed") = 1,
        "Extreme quotient over the mode envelope of a trace space");
  m.def("run_sweep", &run_sweep, py::arg("hs"), py::arg("L") = 2.0,
        py::arg("space") = "v1", py::arg("kind") = "korn",
        py::arg("path") = "2d", py::arg("ansatz") = false, py::arg("nr") = 0,
        py::arg("nz") = 0, py::arg("n_max") = 0, py::arg("m_max") = 8,
        py::arg("tol") = 1e-8, py::arg("seed") = 1,
        "Thickness sweep with power-law fit and emitted artifacts");
  m.def("extreme_eig", &extreme_eig, py::arg("N"), py::arg("D"),
        py::arg("which") = "smallest", py::arg("tol") = 1e-8,
        py::arg("seed") = 1, py::arg("block") = 4,
        "Extreme generalized eigenvalue of a symmetric pencil");
  m.def(
      "inequality_corpus",
      [](const std::string& which, int count, std::uint64_t seed) {
        rect::CorpusConfig cfg;
        cfg.count = count;
        cfg.seed = seed;
        rect::CorpusReport r =
            rect::inequality_corpus(rect::inequality_from_string(which), cfg);
        py::dict d;
        d["count"] = r.count;
        d["max_required_constant"] = r.max_required_constant;
        d["min_margin"] = r.min_margin;
        d["fixed_constant"] = r.fixed_constant;
        d["worst_h"] = r.worst_h;
        d["worst_alpha"] = r.worst_alpha;
        return d;
      },
      py::arg("which"), py::arg("count") = 500, py::arg("seed") = 1,
      "Seeded random-field corpus for one rectangle inequality");
  m.def(
      "projection_corpus",
      [](int count, std::uint64_t seed) {
        rect::CorpusConfig cfg;
        cfg.count = count;
        cfg.seed = seed;
        rect::ProjectionCorpusReport r = rect::projection_corpus(cfg);
        py::dict d;
        d["count"] = r.count;
        d["min_margin_grad"] = r.min_margin_grad;
        d["min_margin_u"] = r.min_margin_u;
        d["max_residual"] = r.max_residual;
        return d;
      },
      py::arg("count") = 500, py::arg("seed") = 1,
      "Seeded corpus for the harmonic-projection bounds");
}
