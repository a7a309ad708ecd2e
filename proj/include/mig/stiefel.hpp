#pragma once

#include <functional>
#include <vector>

#include "mig/rng.hpp"
#include "mig/types.hpp"

namespace mig {

// Point on the complex Stiefel manifold: W in C^{N x M} with W^H W = I.
class StiefelPoint {
 public:
  StiefelPoint() = default;
  explicit StiefelPoint(const ComplexMatrix& w);  // validates orthonormality

  static StiefelPoint trusted(const ComplexMatrix& w);

  Index rows() const { return w_.rows(); }
  Index cols() const { return w_.cols(); }
  const ComplexMatrix& mat() const { return w_; }

 private:
  ComplexMatrix w_;
};

// Tangent projection of a Euclidean gradient: G - W sym(W^H G) with
// sym(A) = (A + A^H)/2.
ComplexMatrix riemannian_gradient(const StiefelPoint& w, const ComplexMatrix& egrad);

// Geodesic through W with initial velocity Z, evaluated at parameter t.
// Uses the quasi-geodesic exponential
//   gamma(t) = [W Z] expm(t [[A, -B], [I, A]]) [I; 0] expm(-t A)
// with A = W^H Z (skew-Hermitian) and B = Z^H Z. The result is
// re-orthonormalized by thin QR when roundoff drift exceeds 1e-9.
StiefelPoint geodesic_step(const StiefelPoint& w, const ComplexMatrix& z, double t);

// Thin QR with the R diagonal rotated positive, so the factor is unique and
// runs are reproducible.
ComplexMatrix orthonormalize(const ComplexMatrix& a);

StiefelPoint random_stiefel(Index n, Index m, uint64_t seed);

struct RgdOptions {
  int max_iter = 300;
  double grad_tol = 1e-6;   // on the Riemannian gradient norm
  double init_step = 1.0;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 40;
  uint64_t seed = 0;  // recorded by callers that draw the initial point
};

struct RgdResult {
  StiefelPoint point;
  std::vector<double> cost_trace;  // accepted iterates only, non-increasing
  double grad_norm = 0.0;
  int iterations = 0;
  bool stalled = false;  // line search exhausted before reaching grad_tol
};

// Riemannian gradient descent with Armijo backtracking along geodesics. The
// accepted step seeds the next line search (one growth step allowed).
RgdResult rgd_minimize(const std::function<double(const StiefelPoint&)>& cost,
                       const std::function<ComplexMatrix(const StiefelPoint&)>& egrad,
                       const StiefelPoint& w0, const RgdOptions& opts = {});

}  // namespace mig
