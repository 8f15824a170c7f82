#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "korn/util.hpp"

namespace korn::eig {

enum class Extreme { Smallest, Largest };

// Symmetric pencil N x = lambda D x with D expected positive definite on the
// working subspace. `tol` is the target scaled backward error
// |N x - lambda D x| / (|N x| + |lambda| |D x|) and must lie in (0, 1e-2].
struct PencilSpec {
  Eigen::MatrixXd N;
  Eigen::MatrixXd D;
  Extreme which = Extreme::Smallest;
  double tol = 1e-9;
  int max_iter = 500;
  int block = 4;
  std::uint64_t seed = 1;
  double shift = 0.0;  // shift-invert origin for the smallest eigenvalue
};

struct EigResult {
  double value = 0.0;
  Eigen::VectorXd vector;  // D-normalized
  double residual = 0.0;
  int iterations = 0;
  double d_pivot_ratio = 0.0;  // extreme |pivot| ratio of D's factorization
};

// Block Rayleigh-Ritz iteration: shift-and-invert (factorization of N -
// shift*D) for the smallest eigenvalue, D-solve preconditioned LOBPCG-style
// iteration for the largest. Deterministic for a fixed seed.
//
// Errors: KernelError (D singular; offending direction attached),
// ConditionError (D pivot ratio beyond 1e14), IterationCapError (budget
// exhausted; best iterate attached), DegenerateInputError (asymmetry, NaN).
EigResult extreme_eig(const PencilSpec& spec);

// Reference path: full dense factorization of the pencil. Independent of the
// iterative route; tests compare the two.
EigResult dense_extreme_eig(const Eigen::MatrixXd& N, const Eigen::MatrixXd& D,
                            Extreme which);

}  // namespace korn::eig
