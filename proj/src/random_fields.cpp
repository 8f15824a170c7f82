#include "korn/random_fields.hpp"

#include <cmath>
#include <vector>

namespace korn {

namespace {

double cheb_T(int n, double xi) {
  if (n == 0) return 1.0;
  double t0 = 1.0, t1 = xi;
  for (int k = 2; k <= n; ++k) {
    double t2 = 2.0 * xi * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return n == 0 ? t0 : t1;
}

}  // namespace

DisplacementField random_field(GridPtr grid, SpaceTag space, SeededRng& rng,
                               const SmoothFieldSpec& spec) {
  const Grid3& g = *grid;
  const ShellGeometry& geom = g.geometry();
  TraceSet ts = trace_conditions(space);

  const int nth_fun = 2 * spec.waves_theta + 1;
  std::array<Scalar3, 3> comps;
  for (int c = 0; c < 3; ++c) {
    // Coefficients drawn in a fixed order so corpora are reproducible.
    std::vector<double> coef;
    coef.reserve((spec.deg_r + 1) * nth_fun * (spec.deg_z + 1));
    for (int i = 0; i <= spec.deg_r; ++i) {
      for (int j = 0; j < nth_fun; ++j) {
        int wave = (j + 1) / 2;
        double decay =
            1.0 / ((1.0 + i * i) * (1.0 + wave * wave) * 1.0);
        for (int k = 0; k <= spec.deg_z; ++k) {
          coef.push_back(rng.uniform(-1.0, 1.0) * decay / (1.0 + k * k));
        }
      }
    }

    comps[c] = Scalar3(g.size());
    const double rm = 0.5 * (geom.r_inner() + geom.r_outer());
    const double rh = 0.5 * (geom.r_outer() - geom.r_inner());
    for (int i = 0; i < g.nr(); ++i) {
      double xir = (g.r().x[i] - rm) / rh;
      for (int j = 0; j < g.ntheta(); ++j) {
        double th = g.theta().x[j];
        for (int k = 0; k < g.nz(); ++k) {
          double z = g.z().x[k];
          double xiz = 2.0 * z / geom.L - 1.0;
          double acc = 0.0;
          std::size_t idx = 0;
          for (int ir = 0; ir <= spec.deg_r; ++ir) {
            double Tr = cheb_T(ir, xir);
            for (int jt = 0; jt < nth_fun; ++jt) {
              int wave = (jt + 1) / 2;
              double gt = (jt == 0)   ? 1.0
                          : (jt % 2)  ? std::cos(wave * th)
                                      : std::sin(wave * th);
              for (int kz = 0; kz <= spec.deg_z; ++kz) {
                acc += coef[idx++] * Tr * gt * cheb_T(kz, xiz);
              }
            }
          }
          // Minimal polynomial window enforcing the declared traces.
          double win = 1.0;
          if (ts.pinned[c][0] && ts.pinned[c][1]) {
            win = 4.0 * (z / geom.L) * (1.0 - z / geom.L);
          } else if (ts.pinned[c][0]) {
            win = z / geom.L;
          } else if (ts.pinned[c][1]) {
            win = 1.0 - z / geom.L;
          }
          comps[c][g.idx(i, j, k)] = win * acc;
        }
      }
    }
  }
  return DisplacementField(std::move(grid), space, std::move(comps));
}

}  // namespace korn
