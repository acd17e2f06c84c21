#pragma once

#include <vector>

#include "cylspec/numerics.hpp"
#include "cylspec/operator2d.hpp"

namespace cylspec {

struct EigenPair {
  Complex lambda;
  double residual = 0.0;  // ||A u - lambda u|| / ||u||
  std::vector<Complex> vec;
};

struct SolverInfo {
  Complex shift;      // shift actually used (after singularity retries)
  int iterations = 0; // linear solves performed
  int subspace = 0;   // final Krylov dimension
  int restarts = 0;
};

struct EigenResult {
  std::vector<EigenPair> pairs;  // sorted by |lambda - shift|
  SolverInfo solver;
};

inline constexpr unsigned long long kEigSeed = 0x2545F4914F6CDD1DULL;

// k eigenpairs nearest `target` of a symmetric operator (c = 0 or
// symmetrized), via shift-invert Lanczos with full reorthogonalization over
// a banded factorization of (op - target I). Pairs failing `residual_tol`
// are polished by inverse iteration at their own Ritz value.
EigenResult eig_symmetric(const DiscreteOperator& op, int k, double target,
                          double residual_tol = 1e-8,
                          unsigned long long seed = kEigSeed);

// k Ritz pairs nearest `shift` via shift-invert Arnoldi over the complex
// field. `residual_tol` as above; pass a tighter value to force per-pair
// inverse-iteration polish (one extra factorization per polished pair).
EigenResult eig_general(const DiscreteOperator& op, int k, Complex shift,
                        double residual_tol = 1e-8,
                        unsigned long long seed = kEigSeed);

// Eigenvalues of a complex upper-Hessenberg matrix (row-major m x m) by the
// shifted QR iteration with deflation. Exposed for testing.
std::vector<Complex> hessenberg_eigenvalues(std::vector<Complex> h, int m);

// One inverse-iteration polish at fixed shift pair.lambda: a single banded
// factorization plus a few solves; updates lambda (Rayleigh quotient),
// vector, and residual when it improves the pair.
void polish_pair(const DiscreteOperator& op, EigenPair& pair,
                 double target_residual, int max_steps = 3);

}  // namespace cylspec
