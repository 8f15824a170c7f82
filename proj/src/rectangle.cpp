#include "korn/rectangle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <utility>

namespace korn::rect {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_resolution(int nx, int ny) {
  if (nx < 4 || ny < 4) {
    throw ResolutionError("rectangle grids need at least 4 nodes per side");
  }
}

double chebyshev_t(int k, double x) {
  if (k == 0) return 1.0;
  double tm = 1.0, t = x;
  for (int i = 1; i < k; ++i) {
    const double tn = 2.0 * x * t - tm;
    tm = t;
    t = tn;
  }
  return t;
}

// sinh(t) - t without cancellation for small t.
double sinh_minus_arg(double t) {
  if (t < 0.25) {
    // t^3/6 (1 + t^2/20 (1 + t^2/42 (1 + t^2/72 (1 + t^2/110))))
    const double t2 = t * t;
    double acc = 1.0 + t2 / 110.0;
    acc = 1.0 + t2 / 72.0 * acc;
    acc = 1.0 + t2 / 42.0 * acc;
    acc = 1.0 + t2 / 20.0 * acc;
    return t * t2 / 6.0 * acc;
  }
  return std::sinh(t) - t;
}

// int_{-h/2}^{h/2} cosh^2(k xi) d xi and the sinh^2 counterpart.
void cosh_sinh_integrals(double k, double h, double* C, double* S) {
  const double kh = k * h;
  const double half_sinh_over_k = 0.5 * std::sinh(kh) / k;
  *C = 0.5 * h + half_sinh_over_k;
  // S = (sinh(kh) - kh) / (2k), stable for small kh.
  *S = 0.5 * sinh_minus_arg(kh) / k;
}

}  // namespace

RectGridPtr make_rect_grid(double h, double p, int nx, int ny) {
  if (!(h > 0.0) || !(h < 1.0)) {
    throw ConfigError("rectangle thickness must satisfy 0 < h < 1");
  }
  if (!(p > 0.0)) throw ConfigError("rectangle length must be positive");
  check_resolution(nx, ny);
  auto g = std::make_shared<RectGrid>();
  g->h = h;
  g->y_lo = 0.0;
  g->y_hi = p;
  g->x = cheb_lobatto(nx, 1.0 - 0.5 * h, 1.0 + 0.5 * h);
  g->panels.push_back(cheb_lobatto(ny, 0.0, p));
  g->offsets = {0};
  g->ny_total = ny;
  return g;
}

std::string to_string(Boundary b) {
  switch (b) {
    case Boundary::PeriodicInU:
      return "periodic-in-u";
    case Boundary::ZeroVAtBottom:
      return "zero-v-at-bottom";
    case Boundary::PeriodicBoth:
      return "periodic-both";
    case Boundary::Free:
      return "free";
  }
  return "?";
}

RectField::RectField(RectGridPtr grid, Boundary tag, Eigen::MatrixXd u,
                     Eigen::MatrixXd v)
    : grid_(std::move(grid)), tag_(tag), u_(std::move(u)), v_(std::move(v)) {
  if (!grid_) throw ConfigError("null rectangle grid");
  const int nx = grid_->nx(), ny = grid_->ny();
  if (u_.rows() != nx || u_.cols() != ny || v_.rows() != nx ||
      v_.cols() != ny) {
    throw ConfigError("field dimensions do not match the grid");
  }
  if (!u_.allFinite() || !v_.allFinite()) {
    throw DegenerateInputError("rectangle field contains non-finite values");
  }
  const double scale =
      std::max(1.0, std::max(u_.cwiseAbs().maxCoeff(),
                             v_.cwiseAbs().maxCoeff()));
  const double tol = 1e-12 * scale;

  // Panel-interface continuity (multi-panel grids share interface nodes).
  for (std::size_t pnl = 1; pnl < grid_->panels.size(); ++pnl) {
    const int left = grid_->offsets[pnl] - 1;
    const int right = grid_->offsets[pnl];
    if ((u_.col(left) - u_.col(right)).cwiseAbs().maxCoeff() > tol ||
        (v_.col(left) - v_.col(right)).cwiseAbs().maxCoeff() > tol) {
      throw TraceError("field is discontinuous across a panel interface");
    }
  }

  auto periodic = [&](const Eigen::MatrixXd& f, const char* name) {
    if ((f.col(0) - f.col(ny - 1)).cwiseAbs().maxCoeff() > tol) {
      throw TraceError(std::string(name) +
                       " is not periodic across the y extent");
    }
  };
  switch (tag_) {
    case Boundary::PeriodicInU:
      periodic(u_, "u");
      break;
    case Boundary::ZeroVAtBottom:
      if (v_.col(0).cwiseAbs().maxCoeff() > tol) {
        throw TraceError("v does not vanish at the bottom edge");
      }
      break;
    case Boundary::PeriodicBoth:
      periodic(u_, "u");
      periodic(v_, "v");
      break;
    case Boundary::Free:
      break;
  }
}

Eigen::MatrixXd d_dx(const RectGrid& g, const Eigen::MatrixXd& f) {
  return g.x.D * f;
}

Eigen::MatrixXd d_dy(const RectGrid& g, const Eigen::MatrixXd& f) {
  Eigen::MatrixXd out(f.rows(), f.cols());
  for (std::size_t p = 0; p < g.panels.size(); ++p) {
    const int off = g.offsets[p];
    const int n = static_cast<int>(g.panels[p].x.size());
    out.middleCols(off, n) =
        f.middleCols(off, n) * g.panels[p].D.transpose();
  }
  return out;
}

double norm_sq(const RectGrid& g, const Eigen::MatrixXd& f) {
  KahanSum acc;
  int col = 0;
  for (std::size_t p = 0; p < g.panels.size(); ++p) {
    const auto& panel = g.panels[p];
    for (int j = 0; j < panel.x.size(); ++j, ++col) {
      for (int i = 0; i < g.nx(); ++i) {
        acc.add(g.x.w[i] * panel.w[j] * f(i, col) * f(i, col));
      }
    }
  }
  return acc.value();
}

RectGradient modified_gradient(const RectField& f, double alpha) {
  if (!(alpha >= -1.0 && alpha <= 1.0)) {
    throw ConfigError("alpha must lie in [-1, 1]");
  }
  RectGradient g;
  g.grid = f.grid_ptr();
  g.g11 = d_dx(f.grid(), f.u());
  g.g12 = d_dy(f.grid(), f.u());
  g.g21 = d_dx(f.grid(), f.v());
  g.g22 = d_dy(f.grid(), f.v()) + alpha * f.u();
  return g;
}

RectGradient star_gradient(const RectField& f) {
  RectGradient g;
  g.grid = f.grid_ptr();
  g.g11 = d_dx(f.grid(), f.u());
  g.g12 = d_dy(f.grid(), f.u()) - f.v();
  g.g21 = d_dx(f.grid(), f.v());
  g.g22 = d_dy(f.grid(), f.v()) + f.u();
  return g;
}

double grad_norm_sq(const RectGradient& g) {
  const RectGrid& grid = *g.grid;
  return norm_sq(grid, g.g11) + norm_sq(grid, g.g12) + norm_sq(grid, g.g21) +
         norm_sq(grid, g.g22);
}

double strain_norm_sq(const RectGradient& g) {
  const RectGrid& grid = *g.grid;
  const Eigen::MatrixXd e12 = 0.5 * (g.g12 + g.g21);
  return norm_sq(grid, g.g11) + norm_sq(grid, g.g22) +
         2.0 * norm_sq(grid, e12);
}

// ---------------------------------------------------------------------------
// Harmonic extension of boundary data (cached dense factorization per grid).
// ---------------------------------------------------------------------------

namespace {

struct LaplaceSolver {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  Eigen::MatrixXd L;
  int nx = 0, ny = 0;
};

std::shared_ptr<const LaplaceSolver> laplace_solver(const RectGridPtr& grid) {
  static std::mutex mu;
  static std::map<std::weak_ptr<const RectGrid>,
                  std::shared_ptr<const LaplaceSolver>,
                  std::owner_less<std::weak_ptr<const RectGrid>>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  for (auto it = cache.begin(); it != cache.end();) {
    it = it->first.expired() ? cache.erase(it) : std::next(it);
  }
  auto found = cache.find(grid);
  if (found != cache.end()) return found->second;

  const RectGrid& g = *grid;
  const int nx = g.nx(), ny = g.ny();
  const Eigen::MatrixXd D2x = g.x.D * g.x.D;
  const Eigen::MatrixXd D2y = g.panels[0].D * g.panels[0].D;
  const int n = nx * ny;
  auto solver = std::make_shared<LaplaceSolver>();
  solver->nx = nx;
  solver->ny = ny;
  solver->L = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd& L = solver->L;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const int row = i * ny + j;
      const bool boundary = i == 0 || i == nx - 1 || j == 0 || j == ny - 1;
      if (boundary) {
        L(row, row) = 1.0;
        continue;
      }
      for (int k = 0; k < nx; ++k) L(row, k * ny + j) += D2x(i, k);
      for (int l = 0; l < ny; ++l) L(row, i * ny + l) += D2y(j, l);
    }
  }
  solver->lu.compute(L);
  cache.emplace(grid, solver);
  return solver;
}

}  // namespace

HarmonicResult harmonic_projection(const RectField& f) {
  const RectGrid& g = f.grid();
  if (g.panels.size() != 1) {
    throw ConfigError("harmonic projection expects a single-panel grid");
  }
  auto solver = laplace_solver(f.grid_ptr());
  const int nx = g.nx(), ny = g.ny();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nx * ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const bool boundary = i == 0 || i == nx - 1 || j == 0 || j == ny - 1;
      if (boundary) rhs[i * ny + j] = f.u()(i, j);
    }
  }
  const Eigen::VectorXd sol = solver->lu.solve(rhs);
  const double scale = std::max(1.0, f.u().cwiseAbs().maxCoeff());
  const double res =
      (solver->L * sol - rhs).cwiseAbs().maxCoeff() / scale;
  HarmonicResult out;
  out.residual = res;
  out.w.resize(nx, ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) out.w(i, j) = sol[i * ny + j];
  }
  if (!out.w.allFinite()) {
    throw DegenerateInputError("harmonic extension produced non-finite data");
  }
  return out;
}

double k0_constant() { return (std::sqrt(2.0) + 1.0 / kPi) / kPi; }

ProjectionBounds projection_bounds(const RectField& f, double alpha) {
  const RectGrid& g = f.grid();
  HarmonicResult hw = harmonic_projection(f);
  const Eigen::MatrixXd diff = f.u() - hw.w;
  const double grad_diff = std::sqrt(norm_sq(g, d_dx(g, diff)) +
                                     norm_sq(g, d_dy(g, diff)));
  const double u_diff = std::sqrt(norm_sq(g, diff));
  const double e_norm =
      std::sqrt(strain_norm_sq(modified_gradient(f, alpha)));
  ProjectionBounds out;
  out.alpha = alpha;
  out.grad_diff = grad_diff;
  out.bound_grad = kPi * k0_constant() * e_norm;
  out.u_diff = u_diff;
  out.bound_u = k0_constant() * g.h * e_norm;
  out.margin_grad = out.bound_grad - out.grad_diff;
  out.margin_u = out.bound_u - out.u_diff;
  out.residual = hw.residual;
  return out;
}

// ---------------------------------------------------------------------------
// Psi
// ---------------------------------------------------------------------------

double psi_series_branch(double tau) {
  const double t2 = tau * tau;
  return 3.0 *
         (1.0 + t2 * (-2.0 / 15.0 +
                      t2 * (13.0 / 1575.0 + t2 * (-2.0 / 7875.0))));
}

double psi_direct_branch(double tau) {
  const double s = std::sinh(tau);
  const double den = sinh_minus_arg(tau) * (s + tau);
  const double t2 = tau * tau;
  return t2 * t2 / den;
}

double psi(double tau) {
  if (!(tau >= 0.0)) throw ConfigError("psi expects a nonnegative argument");
  if (tau == 0.0) return 3.0;
  if (tau < 1e-2) return psi_series_branch(tau);
  if (tau > 300.0) return 0.0;  // underflow region; consistent with decay
  return psi_direct_branch(tau);
}

PsiChecks psi_limit_checks() {
  PsiChecks out;
  out.value_small = psi(1e-5);
  out.limit_gap = std::abs(out.value_small - 3.0);
  out.limit_ok = out.limit_gap <= 1e-9;

  out.monotone = true;
  const double lo = 1e-3, hi = 20.0;
  const int n = 200;
  double prev = psi(lo);
  for (int i = 1; i <= n; ++i) {
    const double tau = lo * std::pow(hi / lo, static_cast<double>(i) / n);
    const double val = psi(tau);
    if (!(val < prev)) {
      out.monotone = false;
      break;
    }
    prev = val;
  }

  const double at_switch = 1e-2;
  const double a = psi_series_branch(at_switch);
  const double b = psi_direct_branch(at_switch);
  out.branch_gap = std::abs(a - b) / std::abs(a);
  out.branch_ok = out.branch_gap <= 1e-12;
  out.pass = out.limit_ok && out.monotone && out.branch_ok;
  return out;
}

SharpCheck sharp_harmonic_check(double h, double p) {
  if (!(h > 0.0) || !(h < 1.0)) {
    throw ConfigError("sharp check expects 0 < h < 1");
  }
  if (!(p > 0.0)) throw ConfigError("sharp check expects p > 0");
  const double k = kPi / p;
  double C, S;
  cosh_sinh_integrals(k, h, &C, &S);
  SharpCheck out;
  out.h = h;
  out.p = p;
  out.w_sq = 0.5 * p * C;
  out.wx_sq = k * k * 0.5 * p * S;
  out.wy_sq = k * k * 0.5 * p * C;
  out.lhs = out.wy_sq - out.wx_sq;
  out.lhs_closed = k * k * 0.5 * p * h;
  out.tau = k * h;
  out.rhs_tau = 2.0 * std::sqrt(psi(out.tau)) / h *
                std::sqrt(out.w_sq * out.wx_sq);
  out.tau1 = 2.0 * kPi * h / p;
  out.rhs_tau1 = 2.0 * std::sqrt(psi(out.tau1)) / h *
                 std::sqrt(out.w_sq * out.wx_sq);
  out.equality_rel_gap = std::abs(out.lhs - out.rhs_tau) / out.lhs;
  out.equality_at_tau = out.equality_rel_gap <= 1e-10;
  out.tau1_discrepancy = out.rhs_tau1 < out.lhs;
  return out;
}

RectField even_odd_extend(const RectField& f) {
  if (f.tag() != Boundary::ZeroVAtBottom) {
    throw TraceError(
        "even-odd extension requires a zero bottom trace on v");
  }
  const RectGrid& g = f.grid();
  if (g.panels.size() != 1 || g.y_lo != 0.0) {
    throw ConfigError("even-odd extension expects a single panel on [0, p]");
  }
  const Cheb1D& src = g.panels[0];
  const int ny = static_cast<int>(src.x.size());
  const int nx = g.nx();

  // Mirrored panel on [-p, 0]: nodes, weights, and differentiation matrix
  // are exact images of the source panel, so the doubled quadrature is the
  // source quadrature twice.
  Cheb1D mirror;
  mirror.x.resize(ny);
  mirror.w.resize(ny);
  mirror.D.resize(ny, ny);
  for (int i = 0; i < ny; ++i) {
    mirror.x[i] = -src.x[ny - 1 - i];
    mirror.w[i] = src.w[ny - 1 - i];
    for (int j = 0; j < ny; ++j) {
      mirror.D(i, j) = -src.D(ny - 1 - i, ny - 1 - j);
    }
  }

  auto grid2 = std::make_shared<RectGrid>();
  grid2->h = g.h;
  grid2->y_lo = -g.y_hi;
  grid2->y_hi = g.y_hi;
  grid2->x = g.x;
  grid2->panels = {std::move(mirror), src};
  grid2->offsets = {0, ny};
  grid2->ny_total = 2 * ny;

  Eigen::MatrixXd u2(nx, 2 * ny), v2(nx, 2 * ny);
  for (int j = 0; j < ny; ++j) {
    u2.col(j) = f.u().col(ny - 1 - j);
    v2.col(j) = -f.v().col(ny - 1 - j);
    u2.col(ny + j) = f.u().col(j);
    v2.col(ny + j) = f.v().col(j);
  }
  return RectField(grid2, Boundary::PeriodicInU, std::move(u2),
                   std::move(v2));
}

std::string to_string(Inequality which) {
  switch (which) {
    case Inequality::Basicineq100:
      return "basicineq100";
    case Inequality::Poltora:
      return "poltora";
    case Inequality::Uest:
      return "uest";
    case Inequality::Crazy:
      return "crazy";
  }
  return "?";
}

Inequality inequality_from_string(const std::string& s) {
  if (s == "basicineq100") return Inequality::Basicineq100;
  if (s == "poltora") return Inequality::Poltora;
  if (s == "uest") return Inequality::Uest;
  if (s == "crazy") return Inequality::Crazy;
  throw ConfigError("unknown inequality '" + s +
                    "' (expected basicineq100|poltora|uest|crazy)");
}

MarginReport verify_inequality(const RectField& f, Inequality which,
                               double alpha, double constant_override) {
  const RectGrid& g = f.grid();
  const double h = g.h;
  MarginReport out;
  out.which = which;
  out.alpha = alpha;

  auto require = [&](bool ok, const char* msg) {
    if (!ok) throw TraceError(msg);
  };

  switch (which) {
    case Inequality::Basicineq100: {
      require(f.tag() == Boundary::PeriodicInU ||
                  f.tag() == Boundary::PeriodicBoth,
              "the bound requires u periodic across the y extent");
      RectGradient G = modified_gradient(f, alpha);
      const double e_norm = std::sqrt(strain_norm_sq(G));
      const double u_norm = std::sqrt(norm_sq(g, f.u()));
      out.lhs = grad_norm_sq(G);
      out.rhs_base = e_norm * (u_norm / h + e_norm);
      out.constant_used = constant_override > 0.0 ? constant_override : 100.0;
      break;
    }
    case Inequality::Poltora: {
      require(f.tag() == Boundary::ZeroVAtBottom,
              "the bound requires a zero bottom trace on v");
      RectGradient G = modified_gradient(f, 0.0);
      const double e_norm = std::sqrt(strain_norm_sq(G));
      const double u_norm = std::sqrt(norm_sq(g, f.u()));
      out.lhs = grad_norm_sq(G);
      out.rhs_base = e_norm * (u_norm / h + e_norm);
      out.constant_used = constant_override > 0.0
                              ? constant_override
                              : std::numeric_limits<double>::quiet_NaN();
      break;
    }
    case Inequality::Uest: {
      require(f.tag() == Boundary::PeriodicBoth,
              "the bound requires both components periodic");
      RectGradient G = star_gradient(f);
      const double e_sq = strain_norm_sq(G);
      const double g_norm = std::sqrt(grad_norm_sq(G));
      const double v_norm = std::sqrt(norm_sq(g, f.v()));
      out.lhs = norm_sq(g, f.u());
      out.rhs_base = e_sq + 2.0 * g_norm * v_norm + 2.0 * v_norm * v_norm;
      out.constant_used = constant_override > 0.0 ? constant_override : 1.0;
      break;
    }
    case Inequality::Crazy: {
      require(f.tag() == Boundary::PeriodicBoth,
              "the bound requires both components periodic");
      RectGradient G = star_gradient(f);
      const double e_norm = std::sqrt(strain_norm_sq(G));
      const double u_norm = std::sqrt(norm_sq(g, f.u()));
      const double v_sq = norm_sq(g, f.v());
      out.lhs = grad_norm_sq(G);
      out.rhs_base = e_norm * e_norm + e_norm * u_norm / h + v_sq;
      out.constant_used = constant_override > 0.0
                              ? constant_override
                              : std::numeric_limits<double>::quiet_NaN();
      break;
    }
  }

  out.required_constant = out.rhs_base > 0.0
                              ? out.lhs / out.rhs_base
                              : (out.lhs > 0.0
                                     ? std::numeric_limits<double>::infinity()
                                     : 0.0);
  out.rhs = out.constant_used * out.rhs_base;
  out.margin = out.rhs - out.lhs;
  return out;
}

double crazy_h_threshold(double measured_constant) {
  if (!(measured_constant > 0.0)) {
    throw ConfigError("threshold needs a positive measured constant");
  }
  return std::sqrt(0.5 / measured_constant);
}

RectField random_rect_field(RectGridPtr grid, Boundary tag, SeededRng& rng,
                            const RectFieldSpec& spec) {
  if (!grid) throw ConfigError("null rectangle grid");
  const RectGrid& g = *grid;
  const int nx = g.nx(), ny = g.ny();
  const double period = g.period();

  // Flattened y coordinates.
  Eigen::VectorXd ys(ny);
  {
    int col = 0;
    for (const auto& panel : g.panels) {
      for (int j = 0; j < panel.x.size(); ++j, ++col) ys[col] = panel.x[j];
    }
  }

  const bool periodic_u =
      tag == Boundary::PeriodicInU || tag == Boundary::PeriodicBoth;
  const bool periodic_v = tag == Boundary::PeriodicBoth;
  const bool window_v = tag == Boundary::ZeroVAtBottom;

  auto component = [&](bool periodic, bool window) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nx, ny);
    // x factors: Chebyshev in the scaled radial coordinate.
    Eigen::MatrixXd tx(nx, spec.deg_x + 1);
    for (int i = 0; i < nx; ++i) {
      const double xi = (g.x.x[i] - 1.0) / (0.5 * g.h);
      for (int d = 0; d <= spec.deg_x; ++d) tx(i, d) = chebyshev_t(d, xi);
    }
    if (periodic) {
      // 1, cos(2 pi j s), sin(2 pi j s) with s = (y - y_lo)/period.
      const int nyf = 1 + 2 * spec.waves_y;
      Eigen::MatrixXd ty(ny, nyf);
      for (int j = 0; j < ny; ++j) {
        const double s = (ys[j] - g.y_lo) / period;
        ty(j, 0) = 1.0;
        for (int w = 1; w <= spec.waves_y; ++w) {
          ty(j, 2 * w - 1) = std::cos(2.0 * kPi * w * s);
          ty(j, 2 * w) = std::sin(2.0 * kPi * w * s);
        }
      }
      for (int d = 0; d <= spec.deg_x; ++d) {
        for (int w = 0; w < nyf; ++w) {
          const int wave = (w + 1) / 2;
          const double decay =
              1.0 / ((1.0 + d * d) * (1.0 + wave * wave));
          const double c = rng.uniform(-1.0, 1.0) * decay;
          out += c * (tx.col(d) * ty.col(w).transpose());
        }
      }
    } else {
      Eigen::MatrixXd ty(ny, spec.deg_y + 1);
      for (int j = 0; j < ny; ++j) {
        const double s = 2.0 * (ys[j] - g.y_lo) / period - 1.0;
        for (int d = 0; d <= spec.deg_y; ++d) ty(j, d) = chebyshev_t(d, s);
      }
      for (int d = 0; d <= spec.deg_x; ++d) {
        for (int k = 0; k <= spec.deg_y; ++k) {
          const double decay = 1.0 / ((1.0 + d * d) * (1.0 + k * k));
          const double c = rng.uniform(-1.0, 1.0) * decay;
          out += c * (tx.col(d) * ty.col(k).transpose());
        }
      }
      if (window) {
        for (int j = 0; j < ny; ++j) {
          out.col(j) *= (ys[j] - g.y_lo) / period;
        }
      }
    }
    return out;
  };

  Eigen::MatrixXd u = component(periodic_u, false);
  Eigen::MatrixXd v = component(periodic_v, window_v);
  return RectField(std::move(grid), tag, std::move(u), std::move(v));
}

namespace {

Boundary corpus_boundary(Inequality which) {
  switch (which) {
    case Inequality::Basicineq100:
      return Boundary::PeriodicInU;
    case Inequality::Poltora:
      return Boundary::ZeroVAtBottom;
    case Inequality::Uest:
    case Inequality::Crazy:
      return Boundary::PeriodicBoth;
  }
  return Boundary::Free;
}

}  // namespace

CorpusReport inequality_corpus(Inequality which, const CorpusConfig& cfg) {
  if (cfg.count <= 0) throw ConfigError("corpus count must be positive");
  if (cfg.hs.empty()) throw ConfigError("corpus needs at least one h");
  const bool fixed =
      which == Inequality::Basicineq100 || which == Inequality::Uest;
  const double p =
      (which == Inequality::Uest || which == Inequality::Crazy) ? 2.0 * kPi
                                                                : cfg.p;
  const Boundary tag = corpus_boundary(which);

  std::map<double, RectGridPtr> grids;
  for (double h : cfg.hs) grids[h] = make_rect_grid(h, p, cfg.nx, cfg.ny);

  CorpusReport rep;
  rep.which = which;
  rep.fixed_constant = fixed;
  rep.min_margin = std::numeric_limits<double>::infinity();
  const std::size_t n_alpha =
      which == Inequality::Basicineq100 ? cfg.alphas.size() : 1;
  for (int i = 0; i < cfg.count; ++i) {
    const double h = cfg.hs[static_cast<std::size_t>(i) % cfg.hs.size()];
    const double alpha =
        which == Inequality::Basicineq100
            ? cfg.alphas[(static_cast<std::size_t>(i) / cfg.hs.size()) %
                         n_alpha]
            : 0.0;
    SeededRng rng(cfg.seed * 1000003ull + static_cast<std::uint64_t>(i));
    RectField f = random_rect_field(grids[h], tag, rng);
    MarginReport m = verify_inequality(f, which, alpha);
    ++rep.count;
    const bool worse_constant = m.required_constant > rep.max_required_constant;
    if (worse_constant) rep.max_required_constant = m.required_constant;
    if (fixed) {
      if (m.margin < rep.min_margin) {
        rep.min_margin = m.margin;
        rep.worst_h = h;
        rep.worst_alpha = alpha;
        rep.worst_index = i;
      }
    } else if (worse_constant) {
      rep.worst_h = h;
      rep.worst_alpha = alpha;
      rep.worst_index = i;
    }
  }
  if (!fixed) rep.min_margin = 0.0;
  return rep;
}

ProjectionCorpusReport projection_corpus(const CorpusConfig& cfg) {
  if (cfg.count <= 0) throw ConfigError("corpus count must be positive");
  if (cfg.hs.empty()) throw ConfigError("corpus needs at least one h");
  std::map<double, RectGridPtr> grids;
  for (double h : cfg.hs) grids[h] = make_rect_grid(h, cfg.p, cfg.nx, cfg.ny);

  ProjectionCorpusReport rep;
  rep.min_margin_grad = std::numeric_limits<double>::infinity();
  rep.min_margin_u = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cfg.count; ++i) {
    const double h = cfg.hs[static_cast<std::size_t>(i) % cfg.hs.size()];
    const double alpha =
        cfg.alphas[(static_cast<std::size_t>(i) / cfg.hs.size()) %
                   cfg.alphas.size()];
    SeededRng rng(cfg.seed * 1000003ull + static_cast<std::uint64_t>(i));
    RectField f = random_rect_field(grids[h], Boundary::Free, rng);
    ProjectionBounds b = projection_bounds(f, alpha);
    ++rep.count;
    rep.max_residual = std::max(rep.max_residual, b.residual);
    const double worst = std::min(b.margin_grad, b.margin_u);
    if (std::min(rep.min_margin_grad, rep.min_margin_u) > worst) {
      rep.worst_h = h;
      rep.worst_alpha = alpha;
      rep.worst_index = i;
    }
    rep.min_margin_grad = std::min(rep.min_margin_grad, b.margin_grad);
    rep.min_margin_u = std::min(rep.min_margin_u, b.margin_u);
  }
  return rep;
}

Eigen::MatrixXd synthesize_harmonic(const RectGrid& g,
                                    const HarmonicModes& modes) {
  const int n_modes = static_cast<int>(modes.a.size());
  if (modes.b.size() != n_modes || modes.c.size() != n_modes ||
      modes.d.size() != n_modes) {
    throw ConfigError("harmonic mode arrays must have equal sizes");
  }
  const double period = g.period();
  Eigen::MatrixXd w(g.nx(), g.ny());
  int col = 0;
  for (const auto& panel : g.panels) {
    for (int j = 0; j < panel.x.size(); ++j, ++col) {
      const double y = panel.x[j];
      for (int i = 0; i < g.nx(); ++i) {
        const double xi = g.x.x[i] - 1.0;
        double acc = modes.a0 + modes.c0 * xi;
        for (int n = 1; n <= n_modes; ++n) {
          const double k = 2.0 * kPi * n / period;
          const double cy = std::cos(k * y), sy = std::sin(k * y);
          acc += std::cosh(k * xi) *
                     (modes.a[n - 1] * cy + modes.b[n - 1] * sy) +
                 std::sinh(k * xi) *
                     (modes.c[n - 1] * cy + modes.d[n - 1] * sy);
        }
        w(i, col) = acc;
      }
    }
  }
  return w;
}

HarmonicNorms harmonic_norms_closed_form(double h, double p,
                                         const HarmonicModes& modes) {
  const int n_modes = static_cast<int>(modes.a.size());
  if (modes.b.size() != n_modes || modes.c.size() != n_modes ||
      modes.d.size() != n_modes) {
    throw ConfigError("harmonic mode arrays must have equal sizes");
  }
  HarmonicNorms out;
  KahanSum wsq, wxsq, wysq;
  wsq.add(p * h * modes.a0 * modes.a0);
  wsq.add(p * h * h * h / 12.0 * modes.c0 * modes.c0);
  wxsq.add(p * h * modes.c0 * modes.c0);
  for (int n = 1; n <= n_modes; ++n) {
    const double k = 2.0 * kPi * n / p;
    double C, S;
    cosh_sinh_integrals(k, h, &C, &S);
    const double ab = modes.a[n - 1] * modes.a[n - 1] +
                      modes.b[n - 1] * modes.b[n - 1];
    const double cd = modes.c[n - 1] * modes.c[n - 1] +
                      modes.d[n - 1] * modes.d[n - 1];
    wsq.add(0.5 * p * (C * ab + S * cd));
    wxsq.add(0.5 * p * k * k * (S * ab + C * cd));
    wysq.add(0.5 * p * k * k * (C * ab + S * cd));
  }
  out.w_sq = wsq.value();
  out.wx_sq = wxsq.value();
  out.wy_sq = wysq.value();
  return out;
}

}  // namespace korn::rect
