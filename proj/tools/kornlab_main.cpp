// kornlab — command-line laboratory for thin-shell rigidity constants and
// the companion strip inequalities.
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "korn/ansatz.hpp"
#include "korn/eigensolver.hpp"
#include "korn/experiments.hpp"
#include "korn/fields.hpp"
#include "korn/mode_reduction.hpp"
#include "korn/random_fields.hpp"
#include "korn/rectangle.hpp"

namespace {

constexpr int kExitVerification = 2;

// The thickness flag is spelled --h, so help must not claim the short -h.
void long_help_only(CLI::App* cmd) {
  cmd->set_help_flag("--help", "print this help message and exit");
}

// CLI11 only processes a config option attached to the root app; on a
// subcommand it is parsed but never read back, so the file is applied here
// after parsing. Flat key=value lines, keys named like the long flags,
// command-line flags override file values.
void apply_config(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::vector<CLI::ConfigItem> items;
  try {
    items = cmd->get_config_formatter()->from_file(path);
  } catch (const CLI::Error& e) {
    throw korn::ConfigError(std::string("config file '") + path +
                            "': " + e.what());
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty()) {
      throw korn::ConfigError("config key '" + item.fullname() +
                              "' is sectioned; use flat key=value lines");
    }
    if (item.name == "config") {
      throw korn::ConfigError("config files cannot nest --config");
    }
    CLI::Option* opt = cmd->get_option_no_throw("--" + item.name);
    if (opt == nullptr) {
      throw korn::ConfigError("unknown config key '" + item.name + "' for '" +
                              cmd->get_name() + "'");
    }
    if (opt->count() > 0) continue;  // explicit flag wins
    if (opt->get_items_expected_max() == 1 && item.inputs.size() > 1) {
      // The file parser splits comma lists; single-argument options (like the
      // sweep's --h CSV) take the line back as one token.
      std::string joined;
      for (const auto& input : item.inputs) {
        if (!joined.empty()) joined += ',';
        joined += input;
      }
      opt->add_result(joined);
    } else {
      for (const auto& input : item.inputs) opt->add_result(input);
    }
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw korn::ConfigError("config key '" + item.name + "': " + e.what());
    }
  }
}

std::string short6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::vector<double> parse_h_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) continue;
    out.push_back(korn::parse17(tok));
  }
  if (out.empty()) throw korn::ConfigError("empty h list");
  return out;
}

struct EnvelopeFlags {
  double h = 0.1;
  double L = 2.0;
  std::string space = "v1";
  std::string path = "2d";
  int nr = 0, nz = 0;
  int n_max = 0, m_max = 8;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  bool per_mode = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--h", h, "shell thickness in (0,1)");
    cmd->add_option("--length", L, "axial length L");
    cmd->add_option("--space", space,
                    "trace family: v0|v1|v2|vstar|parity-odd|parity-even");
    cmd->add_option("--path", path, "reduction path: 2d|1d");
    cmd->add_option("--nr", nr, "radial nodes (0 = policy default)");
    cmd->add_option("--nz", nz, "axial nodes (0 = policy default)");
    cmd->add_option("--n-max", n_max,
                    "circumferential truncation (0 = policy default)");
    cmd->add_option("--m-max", m_max, "axial truncation on the 1d path");
    cmd->add_option("--tol", tol, "eigensolver relative-residual target");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_flag("--per-mode", per_mode, "print the per-mode table");
  }

  korn::modes::EnvelopeOptions options() const {
    korn::modes::EnvelopeOptions opt;
    opt.n_max = n_max;
    opt.m_max = m_max;
    opt.res = {nr, nz};
    opt.tol = tol;
    opt.seed = seed;
    return opt;
  }

  void echo(const std::string& kind) const {
    std::cout << "# resolved config\n"
              << "kind=" << kind << "\nspace=" << space << "\npath=" << path
              << "\nh=" << korn::format17(h) << "\nL=" << korn::format17(L)
              << "\nn_r=" << nr << "\nn_z=" << nz << "\nn_max=" << n_max
              << "\nm_max=" << m_max << "\ntol=" << korn::format17(tol)
              << "\nseed=" << seed << "\n";
  }
};

void print_envelope(const std::string& label,
                    const korn::modes::EnvelopeResult& env, bool per_mode) {
  if (per_mode) {
    std::cout << "  n    m        value     residual  note\n";
    for (const auto& mv : env.per_mode) {
      std::printf("%3d %4d %12.6g %12.3g  %s\n", mv.index.n, mv.index.m,
                  mv.value, mv.residual,
                  mv.skipped ? ("skipped: " + mv.note).c_str()
                             : mv.note.c_str());
    }
  }
  std::cout << label << "=" << korn::format17(env.value)
            << " mode_n=" << env.index.n << " mode_m=" << env.index.m
            << " residual=" << short6(env.residual) << " n_r=" << env.nr
            << " n_z=" << env.nz
            << (env.truncation_warning ? " truncation_warning=1" : "")
            << "\n";
}

int cmd_korn_constant(const EnvelopeFlags& f) {
  f.echo("korn");
  const korn::ShellGeometry geom(f.h, f.L);
  const auto env = korn::modes::mode_envelope(
      geom, korn::space_from_string(f.space), korn::modes::QuotientKind::Korn,
      korn::sweep::path_from_string(f.path), f.options());
  print_envelope("korn_constant", env, f.per_mode);
  return 0;
}

int cmd_component_ratios(const EnvelopeFlags& f) {
  f.echo("component-ratios");
  const korn::ShellGeometry geom(f.h, f.L);
  const auto space = korn::space_from_string(f.space);
  const auto path = korn::sweep::path_from_string(f.path);
  using QK = korn::modes::QuotientKind;
  for (QK kind : {QK::ComponentRTheta, QK::ComponentRZ, QK::ComponentThetaZ}) {
    const auto env =
        korn::modes::mode_envelope(geom, space, kind, path, f.options());
    print_envelope("ratio_" + korn::modes::to_string(kind), env, f.per_mode);
  }
  return 0;
}

int cmd_ansatz_check(double h, double L) {
  std::cout << "# resolved config\nkind=ansatz\nh=" << korn::format17(h)
            << "\nL=" << korn::format17(L) << "\n";
  const korn::ShellGeometry geom(h, L);
  const auto scan = korn::ansatz::scan_scales(geom);
  std::cout << "  a            b            rayleigh     ratio_rtheta "
               "ratio_rz     ratio_thetaz\n";
  for (const auto& e : scan.entries) {
    std::printf("%-12.6g %-12.6g %-12.6g %-12.6g %-12.6g %-12.6g%s\n", e.a,
                e.b, e.rayleigh, e.ratio_rtheta, e.ratio_rz, e.ratio_thetaz,
                e.support_shrunk ? "  (axial support clipped)" : "");
  }
  const auto best =
      korn::ansatz::ansatz_quotient(geom, scan.best_a, scan.best_b);
  std::cout << "best: a=" << korn::format17(scan.best_a)
            << " b=" << korn::format17(scan.best_b)
            << " rayleigh=" << korn::format17(scan.best_rayleigh) << "\n";
  std::cout << "breakdown: strain_sq=" << short6(best.strain_sq)
            << " grad_sq=" << short6(best.grad_sq)
            << " ratio_rtheta=" << short6(best.ratio_rtheta)
            << " ratio_rz=" << short6(best.ratio_rz)
            << " ratio_thetaz=" << short6(best.ratio_thetaz) << "\n";
  std::cout << "minimum_at_quarter_power="
            << (scan.minimum_at_quarter_power ? "true" : "false") << "\n";
  if (!scan.minimum_at_quarter_power) {
    std::cerr << "verification failure: scale-grid minimum is not at "
                 "(h^1/4, 1)\n";
    return kExitVerification;
  }
  return 0;
}

struct RectFlags {
  std::string which = "all";
  int count = 500;
  std::uint64_t seed = 1;
  std::vector<double> hs = {0.2, 0.1, 0.05};
  std::vector<double> alphas = {-1.0, 0.0, 1.0};
  double p = 1.0;
  int nx = 10, ny = 36;
};

int verify_rect_corpus(korn::rect::Inequality which,
                       const korn::rect::CorpusConfig& cfg) {
  const auto rep = korn::rect::inequality_corpus(which, cfg);
  std::cout << "which=" << korn::rect::to_string(which)
            << " count=" << rep.count << " max_required_constant="
            << korn::format17(rep.max_required_constant);
  if (rep.fixed_constant) {
    std::cout << " min_margin=" << korn::format17(rep.min_margin);
  }
  std::cout << " worst_h=" << short6(rep.worst_h)
            << " worst_alpha=" << short6(rep.worst_alpha)
            << " worst_index=" << rep.worst_index << "\n";
  if (which == korn::rect::Inequality::Crazy) {
    std::cout << "  measured-constant h-threshold: h < "
              << short6(korn::rect::crazy_h_threshold(
                     rep.max_required_constant))
              << " keeps the absorption step valid\n";
  }
  if (rep.fixed_constant && rep.min_margin < 0.0) {
    std::cerr << "verification failure: negative margin for "
              << korn::rect::to_string(which) << "\n";
    return kExitVerification;
  }
  return 0;
}

int cmd_rectangle_verify(const RectFlags& f) {
  std::cout << "# resolved config\nwhich=" << f.which << "\ncount=" << f.count
            << "\nseed=" << f.seed << "\np=" << korn::format17(f.p)
            << "\nnx=" << f.nx << "\nny=" << f.ny << "\nh_values=";
  for (std::size_t i = 0; i < f.hs.size(); ++i) {
    std::cout << (i ? "," : "") << korn::format17(f.hs[i]);
  }
  std::cout << "\n";

  korn::rect::CorpusConfig cfg;
  cfg.count = f.count;
  cfg.seed = f.seed;
  cfg.hs = f.hs;
  cfg.alphas = f.alphas;
  cfg.p = f.p;
  cfg.nx = f.nx;
  cfg.ny = f.ny;

  int status = 0;
  const bool all = f.which == "all";
  auto want = [&](const char* name) { return all || f.which == name; };

  if (want("basicineq100")) {
    status = std::max(status, verify_rect_corpus(
                                  korn::rect::Inequality::Basicineq100, cfg));
  }
  if (want("poltora")) {
    status = std::max(
        status, verify_rect_corpus(korn::rect::Inequality::Poltora, cfg));
  }
  if (want("uest")) {
    status = std::max(status,
                      verify_rect_corpus(korn::rect::Inequality::Uest, cfg));
  }
  if (want("crazy")) {
    status = std::max(status,
                      verify_rect_corpus(korn::rect::Inequality::Crazy, cfg));
  }
  if (want("projection")) {
    const auto rep = korn::rect::projection_corpus(cfg);
    std::cout << "which=projection count=" << rep.count
              << " min_margin_grad=" << korn::format17(rep.min_margin_grad)
              << " min_margin_u=" << korn::format17(rep.min_margin_u)
              << " max_residual=" << short6(rep.max_residual)
              << " worst_h=" << short6(rep.worst_h)
              << " worst_alpha=" << short6(rep.worst_alpha)
              << " worst_index=" << rep.worst_index << "\n";
    if (rep.min_margin_grad < 0.0 || rep.min_margin_u < 0.0) {
      std::cerr << "verification failure: harmonic-projection bound "
                   "violated\n";
      status = std::max(status, kExitVerification);
    }
  }
  if (want("psi")) {
    const auto checks = korn::rect::psi_limit_checks();
    std::cout << "which=psi limit_gap=" << short6(checks.limit_gap)
              << " monotone=" << (checks.monotone ? "true" : "false")
              << " branch_gap=" << short6(checks.branch_gap) << "\n";
    if (!checks.pass) {
      std::cerr << "verification failure: psi checks failed\n";
      status = std::max(status, kExitVerification);
    }
  }
  if (want("sharp")) {
    bool ok = true;
    for (const auto& [h, p] :
         std::vector<std::pair<double, double>>{{0.1, 3.14159265358979323846},
                                                {0.05, 3.14159265358979323846},
                                                {0.1, 1.0}}) {
      const auto s = korn::rect::sharp_harmonic_check(h, p);
      std::cout << "which=sharp h=" << short6(h) << " p=" << short6(p)
                << " equality_rel_gap=" << short6(s.equality_rel_gap)
                << " tau1_discrepancy="
                << (s.tau1_discrepancy ? "true" : "false") << "\n";
      ok = ok && s.equality_at_tau;
    }
    if (!ok) {
      std::cerr << "verification failure: sharp-extremal equality failed\n";
      status = std::max(status, kExitVerification);
    }
  }
  return status;
}

struct SweepFlags {
  std::string kind = "korn";
  std::string space = "v1";
  std::string path = "2d";
  std::string h_csv = "0.1,0.05,0.025,0.0125";
  double L = 2.0;
  int nr = 0, nz = 0, n_max = 0, m_max = 8;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  bool timing = false;
  std::string out_dir;
  std::string basename = "sweep";
  double expect_slope = std::numeric_limits<double>::quiet_NaN();
  double slope_tol = 0.15;
};

int cmd_scaling_sweep(const SweepFlags& f) {
  korn::sweep::SweepConfig cfg;
  if (f.kind == "ansatz") {
    cfg.ansatz = true;
  } else {
    cfg.kind = korn::modes::kind_from_string(f.kind);
  }
  cfg.space = korn::space_from_string(f.space);
  cfg.path = korn::sweep::path_from_string(f.path);
  cfg.hs = parse_h_list(f.h_csv);
  cfg.L = f.L;
  cfg.res = {f.nr, f.nz};
  cfg.n_max = f.n_max;
  cfg.m_max = f.m_max;
  cfg.tol = f.tol;
  cfg.seed = f.seed;
  cfg.timing = f.timing;

  std::cout << "# resolved config\n" << korn::sweep::config_echo(cfg);
  const auto result = korn::sweep::run_sweep(cfg);

  std::cout << "  h            value        mode_n mode_m residual\n";
  for (const auto& row : result.rows) {
    if (!row.ok) {
      std::printf("%-12.6g failed: %s\n", row.h, row.error.c_str());
      continue;
    }
    std::printf("%-12.6g %-12.6g %6d %6d %-10.3g%s\n", row.h, row.value,
                row.mode_n, row.mode_m, row.residual,
                row.truncation_warning ? "  truncation_warning" : "");
  }
  if (result.fit_ok) {
    std::cout << "exponent=" << short6(result.fit.slope)
              << " intercept=" << short6(result.fit.intercept)
              << " max_rel_residual=" << short6(result.fit.max_rel_residual)
              << "\n";
  } else {
    std::cout << "exponent=unavailable (fewer than two successful rows)\n";
  }

  if (!f.out_dir.empty()) {
    const std::string stem = f.out_dir + "/" + f.basename;
    korn::sweep::write_file(stem + ".csv", korn::sweep::to_csv(result));
    korn::sweep::write_file(stem + ".json", korn::sweep::to_json(result));
    korn::sweep::write_file(stem + ".svg", korn::sweep::to_svg(result));
    std::cout << "wrote " << stem << ".{csv,json,svg}\n";
  }

  if (!std::isnan(f.expect_slope)) {
    if (!result.fit_ok ||
        std::abs(result.fit.slope - f.expect_slope) > f.slope_tol) {
      std::cerr << "verification failure: exponent "
                << (result.fit_ok ? short6(result.fit.slope)
                                  : std::string("unavailable"))
                << " outside " << short6(f.expect_slope) << " +/- "
                << short6(f.slope_tol) << "\n";
      return kExitVerification;
    }
    std::cout << "exponent within " << short6(f.expect_slope) << " +/- "
              << short6(f.slope_tol) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// selftest: quick closed-form example suite.
// ---------------------------------------------------------------------------

int cmd_selftest() {
  int failures = 0;
  auto check = [&](const char* name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << name
              << (detail.empty() ? "" : "  (" + detail + ")") << "\n";
    if (!ok) ++failures;
  };

  try {
    const korn::ShellGeometry geom(0.2, 1.5);
    auto grid = korn::Grid3::make(geom, 8, 16, 12);
    using F = korn::DisplacementField;
    const std::vector<F> rigid = {
        F::sample(
            grid, korn::SpaceTag::Free,
            [](double, double t, double) { return std::cos(t); },
            [](double, double t, double) { return -std::sin(t); },
            [](double, double, double) { return 0.0; }),
        F::sample(
            grid, korn::SpaceTag::Free,
            [](double, double, double) { return 0.0; },
            [](double r, double, double) { return r; },
            [](double, double, double) { return 0.0; }),
        F::sample(
            grid, korn::SpaceTag::Free,
            [](double, double, double) { return 0.0; },
            [](double, double, double) { return 0.0; },
            [](double, double, double) { return 1.0; }),
        F::sample(
            grid, korn::SpaceTag::Free,
            [](double, double t, double z) { return -z * std::sin(t); },
            [](double, double t, double z) { return -z * std::cos(t); },
            [](double r, double t, double) { return r * std::sin(t); })};
    double worst = 0.0;
    for (const auto& f : rigid) {
      const auto grad = korn::cylindrical_gradient(f);
      const double e2 = korn::l2_norm_sq(korn::symmetrize(grad));
      worst = std::max(worst, e2 / (1.0 + korn::l2_norm_sq(grad)));
    }
    check("rigid motions carry zero strain", worst < 1e-20, short6(worst));
  } catch (const std::exception& e) {
    check("rigid motions carry zero strain", false, e.what());
  }

  try {
    const korn::ShellGeometry geom(0.2, 1.5);
    auto grid = korn::Grid3::make(geom, 8, 16, 12);
    korn::SeededRng rng(7);
    const auto f = korn::random_field(grid, korn::SpaceTag::Free, rng);
    const auto grad = korn::cylindrical_gradient(f);
    const auto A = korn::scaled_gradient_A(f);
    // Column 2 of A is r times column 2 of the gradient; the radial factor
    // is pinched between the shell radii.
    const double lo = geom.r_inner() * geom.r_inner();
    const double hi = geom.r_outer() * geom.r_outer();
    double g2 = 0.0, a2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      g2 += korn::l2_norm_sq(*grid, grad.at(i, 1));
      a2 += korn::l2_norm_sq(*grid, A.at(i, 1));
    }
    const bool ok = a2 >= lo * g2 - 1e-12 && a2 <= hi * g2 + 1e-12;
    check("scaled-gradient column sandwich", ok,
          short6(a2 / g2) + " in [" + short6(lo) + ", " + short6(hi) + "]");
  } catch (const std::exception& e) {
    check("scaled-gradient column sandwich", false, e.what());
  }

  try {
    const auto psi = korn::rect::psi_limit_checks();
    check("psi limit/monotonicity/branch agreement", psi.pass,
          "limit_gap " + short6(psi.limit_gap));
  } catch (const std::exception& e) {
    check("psi limit/monotonicity/branch agreement", false, e.what());
  }

  try {
    const auto s = korn::rect::sharp_harmonic_check(0.1, 3.14159265358979323846);
    const bool closed =
        std::abs(s.lhs - s.lhs_closed) <= 1e-12 * std::abs(s.lhs_closed);
    check("sharp harmonic extremal equality", s.equality_at_tau && closed,
          "rel_gap " + short6(s.equality_rel_gap));
  } catch (const std::exception& e) {
    check("sharp harmonic extremal equality", false, e.what());
  }

  try {
    std::vector<korn::sweep::SweepRow> rows;
    for (double h : {0.5, 0.25, 0.125, 0.0625}) {
      korn::sweep::SweepRow row;
      row.h = h;
      row.value = 3.0 * std::pow(h, 1.5);
      rows.push_back(row);
    }
    const auto fit = korn::sweep::fit_exponent(rows);
    check("power-law fit on exact data", std::abs(fit.slope - 1.5) < 1e-12,
          "slope " + korn::format17(fit.slope));
  } catch (const std::exception& e) {
    check("power-law fit on exact data", false, e.what());
  }

  try {
    auto grid = korn::rect::make_rect_grid(0.2, 1.0, 8, 20);
    korn::SeededRng rng(11);
    const auto f = korn::rect::random_rect_field(
        grid, korn::rect::Boundary::ZeroVAtBottom, rng);
    const auto ext = korn::rect::even_odd_extend(f);
    const double base = korn::rect::norm_sq(f.grid(), f.u()) +
                        korn::rect::norm_sq(f.grid(), f.v());
    const double doubled = korn::rect::norm_sq(ext.grid(), ext.u()) +
                           korn::rect::norm_sq(ext.grid(), ext.v());
    const double rel = std::abs(doubled - 2.0 * base) / (2.0 * base);
    check("even-odd extension doubles the norm", rel < 1e-12, short6(rel));
  } catch (const std::exception& e) {
    check("even-odd extension doubles the norm", false, e.what());
  }

  try {
    korn::rect::CorpusConfig cfg;
    cfg.count = 12;
    const auto b = korn::rect::inequality_corpus(
        korn::rect::Inequality::Basicineq100, cfg);
    const auto u =
        korn::rect::inequality_corpus(korn::rect::Inequality::Uest, cfg);
    check("strip inequality margins on a small corpus",
          b.min_margin >= 0.0 && u.min_margin >= 0.0,
          "min margins " + short6(b.min_margin) + ", " + short6(u.min_margin));
  } catch (const std::exception& e) {
    check("strip inequality margins on a small corpus", false, e.what());
  }

  try {
    const korn::ShellGeometry geom(0.2, 1.0);
    const auto p = korn::modes::reduce_theta(
        geom, korn::SpaceTag::V1, 1, korn::modes::QuotientKind::Korn,
        {6, 10});
    korn::eig::PencilSpec spec;
    spec.N = p.N;
    spec.D = p.D;
    spec.which = korn::eig::Extreme::Smallest;
    const auto it = korn::eig::extreme_eig(spec);
    const auto dn =
        korn::eig::dense_extreme_eig(p.N, p.D, korn::eig::Extreme::Smallest);
    const double rel =
        std::abs(it.value - dn.value) / std::max(1e-300, std::abs(dn.value));
    check("iterative and dense eigensolves agree", rel < 1e-6, short6(rel));
  } catch (const std::exception& e) {
    check("iterative and dense eigensolves agree", false, e.what());
  }

  std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? 0 : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "kornlab: rigidity constants of thin cylindrical shells and the "
      "companion strip inequalities"};
  app.require_subcommand(1);
  long_help_only(&app);

  EnvelopeFlags kc_flags;
  std::string kc_config;
  auto* kc = app.add_subcommand(
      "korn-constant",
      "smallest strain/gradient Rayleigh quotient over a trace family");
  long_help_only(kc);
  kc_flags.attach(kc);
  kc->add_option("--config", kc_config,
                 "key=value config file (flags override)");

  EnvelopeFlags cr_flags;
  std::string cr_config;
  auto* cr = app.add_subcommand(
      "component-ratios",
      "largest component/strain ratios over a trace family");
  long_help_only(cr);
  cr_flags.attach(cr);
  cr->add_option("--config", cr_config,
                 "key=value config file (flags override)");

  double an_h = 0.01, an_L = 2.0;
  auto* an = app.add_subcommand(
      "ansatz-check",
      "closed-form oscillatory field: scale scan and quotient breakdown");
  long_help_only(an);
  an->add_option("--h", an_h, "shell thickness in (0,1)");
  an->add_option("--length", an_L, "axial length L");
  std::string an_config;
  an->add_option("--config", an_config,
                 "key=value config file (flags override)");

  RectFlags rect_flags;
  auto* rv = app.add_subcommand(
      "rectangle-verify",
      "strip inequalities, projection bounds, psi, sharp extremal");
  long_help_only(rv);
  rv->add_option("--which", rect_flags.which,
                 "basicineq100|poltora|uest|crazy|projection|psi|sharp|all");
  rv->add_option("--count", rect_flags.count, "corpus size");
  rv->add_option("--seed", rect_flags.seed, "random seed");
  rv->add_option("--h", rect_flags.hs, "strip thicknesses");
  rv->add_option("--alpha", rect_flags.alphas,
                 "alpha values for the modified gradient");
  rv->add_option("--p", rect_flags.p, "strip length (periodic kinds use 2pi)");
  rv->add_option("--nx", rect_flags.nx, "nodes across the strip");
  rv->add_option("--ny", rect_flags.ny, "nodes along the strip");
  std::string rv_config;
  rv->add_option("--config", rv_config,
                 "key=value config file (flags override)");

  SweepFlags sw_flags;
  auto* sw = app.add_subcommand(
      "scaling-sweep", "sweep h, fit the scaling exponent, emit artifacts");
  long_help_only(sw);
  sw->add_option("--kind", sw_flags.kind, "korn|rtheta|rz|thetaz|ansatz");
  sw->add_option("--space", sw_flags.space, "trace family");
  sw->add_option("--path", sw_flags.path, "2d|1d");
  sw->add_option("--h", sw_flags.h_csv, "comma-separated decreasing h list");
  sw->add_option("--length", sw_flags.L, "axial length L");
  sw->add_option("--nr", sw_flags.nr, "radial nodes (0 = policy default)");
  sw->add_option("--nz", sw_flags.nz, "axial nodes (0 = policy default)");
  sw->add_option("--n-max", sw_flags.n_max,
                 "circumferential truncation (0 = policy default)");
  sw->add_option("--m-max", sw_flags.m_max, "axial truncation (1d path)");
  sw->add_option("--tol", sw_flags.tol, "eigensolver tolerance");
  sw->add_option("--seed", sw_flags.seed, "random seed");
  sw->add_flag("--timing", sw_flags.timing,
               "write wall-clock seconds into artifacts (non-reproducible)");
  sw->add_option("--out-dir", sw_flags.out_dir,
                 "directory for CSV/JSON/SVG artifacts");
  sw->add_option("--basename", sw_flags.basename, "artifact basename");
  sw->add_option("--expect-slope", sw_flags.expect_slope,
                 "verify the fitted exponent against this value");
  sw->add_option("--slope-tol", sw_flags.slope_tol,
                 "tolerance for --expect-slope");
  std::string sw_config;
  sw->add_option("--config", sw_config,
                 "key=value config file (flags override)");

  auto* st = app.add_subcommand("selftest",
                                "run the quick closed-form example suite");
  long_help_only(st);

  CLI11_PARSE(app, argc, argv);

  try {
    if (kc->parsed()) {
      apply_config(kc, kc_config);
      return cmd_korn_constant(kc_flags);
    }
    if (cr->parsed()) {
      apply_config(cr, cr_config);
      return cmd_component_ratios(cr_flags);
    }
    if (an->parsed()) {
      apply_config(an, an_config);
      return cmd_ansatz_check(an_h, an_L);
    }
    if (rv->parsed()) {
      apply_config(rv, rv_config);
      return cmd_rectangle_verify(rect_flags);
    }
    if (sw->parsed()) {
      apply_config(sw, sw_config);
      return cmd_scaling_sweep(sw_flags);
    }
    if (st->parsed()) return cmd_selftest();
  } catch (const korn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const korn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
