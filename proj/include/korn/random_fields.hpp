#pragma once

#include "korn/fields.hpp"
#include "korn/util.hpp"

namespace korn {

// Random smooth displacement fields: truncated Chebyshev x trig x Chebyshev
// series with coefficient decay 1/(1+k^2) per index, drawn from a seeded
// generator. Components in a pinned space are multiplied by the minimal
// polynomial z-window enforcing the declared traces exactly at the end nodes.
struct SmoothFieldSpec {
  int deg_r = 6;       // Chebyshev degree in r
  int waves_theta = 3; // max circumferential wavenumber
  int deg_z = 6;       // Chebyshev degree in z
};

DisplacementField random_field(GridPtr grid, SpaceTag space, SeededRng& rng,
                               const SmoothFieldSpec& spec = {});

}  // namespace korn
