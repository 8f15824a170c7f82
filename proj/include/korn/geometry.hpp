#pragma once

#include <array>
#include <string>

#include "korn/util.hpp"

namespace korn {

// Thin cylindrical shell: radial section I_h = [1-h/2, 1+h/2], full angle,
// axial extent [0, L]. Volume measure is r dr dtheta dz throughout.
struct ShellGeometry {
  double h = 0.1;
  double L = 2.0;

  ShellGeometry() = default;
  ShellGeometry(double h_, double L_) : h(h_), L(L_) { validate(); }

  void validate() const {
    if (!(h > 0.0) || !(h < 1.0)) {
      throw ConfigError("shell thickness must satisfy 0 < h < 1");
    }
    if (!(L > 0.0)) throw ConfigError("shell length must be positive");
  }
  double r_inner() const { return 1.0 - 0.5 * h; }
  double r_outer() const { return 1.0 + 0.5 * h; }
};

// Admissible displacement families, distinguished by which components are
// pinned (zero trace) at the axial ends z = 0 and z = L.
//
//   V0        all components pinned at both ends
//   V1        all pinned at z=0; radial+circumferential pinned at z=L
//   V2        circumferential+axial pinned at both ends
//   Vstar     circumferential pinned at both ends, axial pinned at z=0
//   ParityOdd   sine axial structure in (r,theta) components, cosine in z:
//               encoded by its H^1 closure (r,theta pinned at both ends)
//   ParityEven  cosine structure in (r,theta), sine in z: closure pins z only
//   Free      no trace claim (rigid motions, raw test fields)
enum class SpaceTag { V0, V1, V2, Vstar, ParityOdd, ParityEven, Free };

// pinned[c] = {pinned at z=0, pinned at z=L} for component c in (r,theta,z).
struct TraceSet {
  std::array<std::array<bool, 2>, 3> pinned{};
};

TraceSet trace_conditions(SpaceTag tag);
std::string to_string(SpaceTag tag);
SpaceTag space_from_string(const std::string& name);

}  // namespace korn
