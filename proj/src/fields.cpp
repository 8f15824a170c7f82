#include "korn/fields.hpp"

#include <cmath>

namespace korn {

std::shared_ptr<const Grid3> Grid3::make(const ShellGeometry& geom, int nr,
                                         int ntheta, int nz) {
  geom.validate();
  if (nr < 2 || nz < 2 || ntheta < 4) {
    throw ResolutionError("grid too small: need nr,nz >= 2 and ntheta >= 4");
  }
  Cheb1D r = cheb_lobatto(nr, geom.r_inner(), geom.r_outer());
  Trig1D th = trig_periodic(ntheta);
  Cheb1D z = cheb_lobatto(nz, 0.0, geom.L);
  return std::shared_ptr<const Grid3>(
      new Grid3(geom, std::move(r), std::move(th), std::move(z)));
}

namespace {

void check_traces(const Grid3& g, SpaceTag space,
                  const std::array<Scalar3, 3>& comps) {
  TraceSet ts = trace_conditions(space);
  const int nz = g.nz();
  for (int c = 0; c < 3; ++c) {
    double scale = std::max(1.0, comps[c].abs().maxCoeff());
    for (int end = 0; end < 2; ++end) {
      if (!ts.pinned[c][end]) continue;
      int k = (end == 0) ? 0 : nz - 1;
      for (int i = 0; i < g.nr(); ++i) {
        for (int j = 0; j < g.ntheta(); ++j) {
          if (std::abs(comps[c][g.idx(i, j, k)]) > 1e-12 * scale) {
            throw TraceError("component " + std::to_string(c) +
                             " violates the declared trace at z=" +
                             (end == 0 ? std::string("0") : std::string("L")) +
                             " for space " + to_string(space));
          }
        }
      }
    }
  }
}

}  // namespace

DisplacementField::DisplacementField(GridPtr grid, SpaceTag space,
                                     std::array<Scalar3, 3> components)
    : grid_(std::move(grid)), space_(space), comps_(std::move(components)) {
  for (int c = 0; c < 3; ++c) {
    if (comps_[c].size() != grid_->size()) {
      throw ConfigError("component array does not conform to the grid shape");
    }
    if (!comps_[c].isFinite().all()) {
      throw DegenerateInputError("component contains non-finite values");
    }
  }
  check_traces(*grid_, space_, comps_);
}

DisplacementField DisplacementField::sample(GridPtr grid, SpaceTag space,
                                            const Sampler& fr,
                                            const Sampler& ftheta,
                                            const Sampler& fz) {
  const Grid3& g = *grid;
  std::array<Scalar3, 3> comps;
  std::array<const Sampler*, 3> fs{&fr, &ftheta, &fz};
  for (int c = 0; c < 3; ++c) {
    comps[c] = Scalar3(g.size());
    for (int i = 0; i < g.nr(); ++i) {
      for (int j = 0; j < g.ntheta(); ++j) {
        for (int k = 0; k < g.nz(); ++k) {
          comps[c][g.idx(i, j, k)] =
              (*fs[c])(g.r().x[i], g.theta().x[j], g.z().x[k]);
        }
      }
    }
  }
  return DisplacementField(std::move(grid), space, std::move(comps));
}

namespace {

// Directional derivatives on the tensor grid.
Scalar3 d_r(const Grid3& g, const Scalar3& v) {
  Scalar3 out(g.size());
  const Eigen::MatrixXd& D = g.r().D;
  for (int j = 0; j < g.ntheta(); ++j) {
    for (int k = 0; k < g.nz(); ++k) {
      for (int i = 0; i < g.nr(); ++i) {
        double acc = 0.0;
        for (int i2 = 0; i2 < g.nr(); ++i2) {
          acc += D(i, i2) * v[g.idx(i2, j, k)];
        }
        out[g.idx(i, j, k)] = acc;
      }
    }
  }
  return out;
}

Scalar3 d_theta(const Grid3& g, const Scalar3& v) {
  Scalar3 out(g.size());
  const Eigen::MatrixXd& D = g.theta().D;
  for (int i = 0; i < g.nr(); ++i) {
    for (int k = 0; k < g.nz(); ++k) {
      for (int j = 0; j < g.ntheta(); ++j) {
        double acc = 0.0;
        for (int j2 = 0; j2 < g.ntheta(); ++j2) {
          acc += D(j, j2) * v[g.idx(i, j2, k)];
        }
        out[g.idx(i, j, k)] = acc;
      }
    }
  }
  return out;
}

Scalar3 d_z(const Grid3& g, const Scalar3& v) {
  Scalar3 out(g.size());
  const Eigen::MatrixXd& D = g.z().D;
  for (int i = 0; i < g.nr(); ++i) {
    for (int j = 0; j < g.ntheta(); ++j) {
      for (int k = 0; k < g.nz(); ++k) {
        double acc = 0.0;
        for (int k2 = 0; k2 < g.nz(); ++k2) {
          acc += D(k, k2) * v[g.idx(i, j, k2)];
        }
        out[g.idx(i, j, k)] = acc;
      }
    }
  }
  return out;
}

// Multiply nodal values by a function of r (1/r or r).
Scalar3 scale_by_r(const Grid3& g, const Scalar3& v, bool inverse) {
  Scalar3 out(g.size());
  for (int i = 0; i < g.nr(); ++i) {
    double f = inverse ? 1.0 / g.r().x[i] : g.r().x[i];
    for (int j = 0; j < g.ntheta(); ++j) {
      for (int k = 0; k < g.nz(); ++k) {
        out[g.idx(i, j, k)] = f * v[g.idx(i, j, k)];
      }
    }
  }
  return out;
}

void require_gradient_resolution(const Grid3& g) {
  if (g.nr() < 4 || g.nz() < 4 || g.ntheta() < 4) {
    throw ResolutionError(
        "grid too coarse for spectral differentiation (need >= 4 nodes per "
        "direction)");
  }
}

// Gradient in cylindrical components; `scaled` drops the 1/r factors from
// the second column (the scaled gradient A).
GradField gradient_impl(const DisplacementField& f, bool scaled) {
  const Grid3& g = f.grid();
  require_gradient_resolution(g);
  GradField out;
  out.grid = f.grid_ptr();
  const Scalar3& pr = f.comp(0);
  const Scalar3& pt = f.comp(1);
  const Scalar3& pz = f.comp(2);

  out.at(0, 0) = d_r(g, pr);
  out.at(1, 0) = d_r(g, pt);
  out.at(2, 0) = d_r(g, pz);
  out.at(0, 2) = d_z(g, pr);
  out.at(1, 2) = d_z(g, pt);
  out.at(2, 2) = d_z(g, pz);

  Scalar3 c0 = d_theta(g, pr) - pt;  // phi_r,theta - phi_theta
  Scalar3 c1 = d_theta(g, pt) + pr;  // phi_theta,theta + phi_r
  Scalar3 c2 = d_theta(g, pz);       // phi_z,theta
  if (scaled) {
    out.at(0, 1) = std::move(c0);
    out.at(1, 1) = std::move(c1);
    out.at(2, 1) = std::move(c2);
  } else {
    out.at(0, 1) = scale_by_r(g, c0, true);
    out.at(1, 1) = scale_by_r(g, c1, true);
    out.at(2, 1) = scale_by_r(g, c2, true);
  }
  return out;
}

}  // namespace

GradField cylindrical_gradient(const DisplacementField& f) {
  return gradient_impl(f, false);
}

GradField scaled_gradient_A(const DisplacementField& f) {
  return gradient_impl(f, true);
}

GradField symmetrize(const GradField& g) {
  GradField out;
  out.grid = g.grid;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out.at(i, j) = 0.5 * (g.at(i, j) + g.at(j, i));
    }
  }
  return out;
}

double l2_norm_sq(const Grid3& g, const Scalar3& v) {
  KahanSum s;
  for (int i = 0; i < g.nr(); ++i) {
    for (int j = 0; j < g.ntheta(); ++j) {
      for (int k = 0; k < g.nz(); ++k) {
        Eigen::Index id = g.idx(i, j, k);
        s.add(g.weight(i, j, k) * v[id] * v[id]);
      }
    }
  }
  return s.value();
}

double l2_norm_sq(const GradField& g) {
  KahanSum s;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      s.add(l2_norm_sq(*g.grid, g.at(i, j)));
    }
  }
  return s.value();
}

double l2_norm_sq(const DisplacementField& f) {
  KahanSum s;
  for (int c = 0; c < 3; ++c) s.add(l2_norm_sq(f.grid(), f.comp(c)));
  return s.value();
}

ComponentNorms component_norms(const DisplacementField& f) {
  const Grid3& g = f.grid();
  GradField A = scaled_gradient_A(f);
  auto nrm = [&](const Scalar3& v) { return std::sqrt(l2_norm_sq(g, v)); };
  auto nrm2 = [&](int i, int j) { return l2_norm_sq(g, A.at(i, j)); };

  ComponentNorms out{};
  out.G11 = nrm(A.at(0, 0));
  out.G22 = nrm(A.at(1, 1));
  out.G33 = nrm(A.at(2, 2));
  out.G12 = std::sqrt(nrm2(0, 1) + nrm2(1, 0));
  out.G13 = std::sqrt(nrm2(0, 2) + nrm2(2, 0));
  out.G23 = std::sqrt(nrm2(1, 2) + nrm2(2, 1));
  out.E11 = out.G11;
  out.E22 = out.G22;
  out.E33 = out.G33;
  out.E12 = nrm(A.at(0, 1) + A.at(1, 0));
  out.E13 = nrm(A.at(0, 2) + A.at(2, 0));
  out.E23 = nrm(A.at(1, 2) + A.at(2, 1));
  out.norm_phi_r = nrm(f.comp(0));
  out.norm_phi_theta = nrm(f.comp(1));
  return out;
}

}  // namespace korn
