#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <memory>

#include "korn/basis1d.hpp"
#include "korn/geometry.hpp"

namespace korn {

// Tensor collocation grid on the shell: Chebyshev-Gauss-Lobatto in r and z,
// uniform periodic in theta. Immutable once built; fields share it.
class Grid3 {
 public:
  static std::shared_ptr<const Grid3> make(const ShellGeometry& geom, int nr,
                                           int ntheta, int nz);

  const ShellGeometry& geometry() const { return geom_; }
  int nr() const { return static_cast<int>(r_.x.size()); }
  int ntheta() const { return static_cast<int>(th_.x.size()); }
  int nz() const { return static_cast<int>(z_.x.size()); }
  Eigen::Index size() const {
    return static_cast<Eigen::Index>(nr()) * ntheta() * nz();
  }

  const Cheb1D& r() const { return r_; }
  const Trig1D& theta() const { return th_; }
  const Cheb1D& z() const { return z_; }

  Eigen::Index idx(int i, int j, int k) const {
    return (static_cast<Eigen::Index>(i) * ntheta() + j) * nz() + k;
  }
  // Quadrature weight including the r factor of the volume measure.
  double weight(int i, int j, int k) const {
    return r_.w[i] * r_.x[i] * th_.w[j] * z_.w[k];
  }

 private:
  Grid3(const ShellGeometry& geom, Cheb1D r, Trig1D th, Cheb1D z)
      : geom_(geom), r_(std::move(r)), th_(std::move(th)), z_(std::move(z)) {}
  ShellGeometry geom_;
  Cheb1D r_;
  Trig1D th_;
  Cheb1D z_;
};

using GridPtr = std::shared_ptr<const Grid3>;

// Scalar nodal data on a Grid3.
using Scalar3 = Eigen::ArrayXd;

// Displacement in cylindrical components (phi_r, phi_theta, phi_z) declared
// to live in a function space; construction verifies the declared traces at
// the boundary nodes to 1e-12 (relative to max(1, |field|_inf)).
class DisplacementField {
 public:
  using Sampler = std::function<double(double r, double theta, double z)>;

  DisplacementField(GridPtr grid, SpaceTag space,
                    std::array<Scalar3, 3> components);

  static DisplacementField sample(GridPtr grid, SpaceTag space,
                                  const Sampler& fr, const Sampler& ftheta,
                                  const Sampler& fz);

  const Grid3& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  SpaceTag space() const { return space_; }
  const Scalar3& comp(int c) const { return comps_[c]; }
  Scalar3& comp(int c) { return comps_[c]; }

 private:
  GridPtr grid_;
  SpaceTag space_;
  std::array<Scalar3, 3> comps_;
};

// A 3x3 matrix field on the grid (gradient, strain, scaled gradient).
struct GradField {
  GridPtr grid;
  std::array<std::array<Scalar3, 3>, 3> m;
  const Scalar3& at(int i, int j) const { return m[i][j]; }
  Scalar3& at(int i, int j) { return m[i][j]; }
};

// Full cylindrical gradient (with the 1/r factors in column 2).
GradField cylindrical_gradient(const DisplacementField& f);
// Symmetric part (strain when applied to the gradient).
GradField symmetrize(const GradField& g);
// Scaled gradient: cylindrical gradient with the 1/r factors of column 2
// removed (second column multiplied by r).
GradField scaled_gradient_A(const DisplacementField& f);

// L2 norms over the shell with measure r dr dtheta dz (compensated sums).
double l2_norm_sq(const Grid3& grid, const Scalar3& v);
double l2_norm_sq(const GradField& g);
inline double l2_norm(const GradField& g) { return std::sqrt(l2_norm_sq(g)); }
double l2_norm_sq(const DisplacementField& f);

// Componentwise norms of the scaled gradient A and its symmetric part.
// G off-diagonals combine both entries: G12^2 = |A12|^2 + |A21|^2, etc.
// E off-diagonals are norms of the entry sums: E12 = |A12 + A21|, and the
// diagonals satisfy Eii = Gii by construction.
struct ComponentNorms {
  double G11, G22, G33, G12, G13, G23;
  double E11, E22, E33, E12, E13, E23;
  double norm_phi_r, norm_phi_theta;
};

ComponentNorms component_norms(const DisplacementField& f);

}  // namespace korn
