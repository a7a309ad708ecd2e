#pragma once

#include <string>

#include "mig/types.hpp"

namespace mig {

// Inputs are accepted as Hermitian when ||A - A^H||_F / ||A||_F is below this.
inline constexpr double kHermitianTol = 1e-12;

inline ComplexMatrix herm_part(const ComplexMatrix& a) {
  return 0.5 * (a + a.adjoint());
}

double herm_defect(const ComplexMatrix& a);

// Hermitian positive definite matrix. The checked constructor validates
// Hermiticity and positive definiteness; trusted() skips the definiteness
// check for results that are HPD by construction (congruences, spectral
// reassembly, ridge-loaded outer products). Both store the symmetrized matrix.
class HpdMatrix {
 public:
  HpdMatrix() = default;
  explicit HpdMatrix(const ComplexMatrix& a);

  static HpdMatrix trusted(const ComplexMatrix& a);

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& mat() const { return m_; }

 private:
  ComplexMatrix m_;
};

struct HermitianEig {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // unitary, columns match eigenvalues
};

// Spectral decomposition with a Hermiticity gate; the input is symmetrized
// before factoring.
HermitianEig hermitian_eig(const ComplexMatrix& a);

enum class MatrixFun { Log, Exp, Sqrt, InvSqrt, Inverse };

// Spectral calculus f(A) = U f(D) U^H. Exp accepts any Hermitian input; the
// others require positive eigenvalues and report the offending minimum.
ComplexMatrix hpd_fun(const ComplexMatrix& a, MatrixFun f);
ComplexMatrix hpd_fun(const HpdMatrix& a, MatrixFun f);

// Frechet derivative of the matrix logarithm at HPD A in direction H:
// U [ M .* (U^H H U) ] U^H with Loewner weights
// M_ij = (log l_i - log l_j) / (l_i - l_j), M_ii = 1 / l_i.
ComplexMatrix dlog_frechet(const HpdMatrix& a, const ComplexMatrix& h);

// tr(A^H B); conjugate-linear in the first argument.
Complex frob_inner(const ComplexMatrix& a, const ComplexMatrix& b);

// log(X^{-1} Y) = X^{-1/2} log(X^{-1/2} Y X^{-1/2}) X^{1/2}. The result is
// not Hermitian, but its eigenvalues are the real numbers log l_i(X^{-1} Y).
ComplexMatrix log_inv_pair(const HpdMatrix& x, const HpdMatrix& y);

}  // namespace mig
