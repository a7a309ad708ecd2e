#pragma once

// Shared helpers for the test binaries: seeded random manifold points, a
// quadrature rule used as an independent oracle, and the contamination
// family the influence tests evaluate.

#include <cmath>
#include <utility>
#include <vector>

#include "mig/hermitian.hpp"
#include "mig/influence.hpp"
#include "mig/rng.hpp"
#include "mig/stiefel.hpp"
#include "mig/types.hpp"

namespace testsup {

inline mig::ComplexMatrix random_gaussian(mig::Index n, mig::Index m, mig::RngStream& rng) {
  mig::ComplexMatrix a(n, m);
  for (mig::Index j = 0; j < m; ++j)
    for (mig::Index i = 0; i < n; ++i) a(i, j) = rng.cnormal();
  return a;
}

inline mig::ComplexMatrix random_unitary(mig::Index n, mig::RngStream& rng) {
  return mig::orthonormalize(random_gaussian(n, n, rng));
}

inline mig::ComplexMatrix random_hermitian(mig::Index n, mig::RngStream& rng) {
  return mig::herm_part(random_gaussian(n, n, rng));
}

// U diag(lambda) U^H with log-uniform eigenvalues in [lo, hi].
inline mig::HpdMatrix random_hpd(mig::Index n, mig::RngStream& rng, double lo, double hi) {
  mig::ComplexMatrix u = random_unitary(n, rng);
  mig::RealVector lam(n);
  for (mig::Index i = 0; i < n; ++i) lam(i) = lo * std::pow(hi / lo, rng.uniform());
  return mig::HpdMatrix::trusted(u * lam.asDiagonal() * u.adjoint());
}

inline double rel_frob_err(const mig::ComplexMatrix& a, const mig::ComplexMatrix& ref) {
  const double scale = ref.norm();
  return (a - ref).norm() / (scale > 0.0 ? scale : 1.0);
}

// Gauss-Legendre nodes and weights on [0, 1], by Newton iteration on the
// Legendre recurrence. Used to integrate matrix resolvents independently of
// the spectral formulas under test.
inline std::vector<std::pair<double, double>> gauss_legendre01(int n) {
  const double pi = std::acos(-1.0);
  std::vector<std::pair<double, double>> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double deriv = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      deriv = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / deriv;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * deriv * deriv);
    out[size_t(i)] = {0.5 * (1.0 - x), 0.5 * w};
  }
  return out;
}

// Contamination scenario for the influence oracle comparisons: a cluster of
// moderately conditioned base matrices and a few stronger outliers drawn
// around a shared frame. The closed forms are first-order approximations
// whose error grows linearly with frame misalignment, so the rotation is
// kept small enough that they operate inside their regime of validity
// (worst case about 0.5% against the numerical oracle at 0.05).
struct ScenarioShape {
  mig::Index n = 4;
  int k_base = 10;
  int j_out = 3;
  double base_lo = 0.5, base_hi = 2.0;
  double out_lo = 1.0, out_hi = 5.0;
  double rotation = 0.05;  // 0 freezes all frames to the shared one
};

inline mig::HpdMatrix rotated_hpd(const mig::ComplexMatrix& frame, double rotation, double lo,
                                  double hi, mig::RngStream& rng) {
  const mig::Index n = frame.rows();
  mig::ComplexMatrix skew = random_gaussian(n, n, rng);
  skew = 0.5 * (skew - skew.adjoint());
  mig::ComplexMatrix u = frame;
  if (rotation > 0.0) {
    // Cayley transform of the scaled skew generator stays unitary.
    const mig::ComplexMatrix s = (rotation / 2.0) * skew;
    const mig::ComplexMatrix eye = mig::ComplexMatrix::Identity(n, n);
    u = frame * (eye - s).inverse() * (eye + s);
  }
  mig::RealVector lam(n);
  for (mig::Index i = 0; i < n; ++i) lam(i) = lo * std::pow(hi / lo, rng.uniform());
  return mig::HpdMatrix::trusted(u * lam.asDiagonal() * u.adjoint());
}

inline mig::OutlierScenario influence_scenario(mig::RngStream& rng,
                                               const ScenarioShape& shape = {}) {
  mig::OutlierScenario sc;
  const mig::ComplexMatrix frame = random_unitary(shape.n, rng);
  for (int k = 0; k < shape.k_base; ++k)
    sc.base.push_back(rotated_hpd(frame, shape.rotation, shape.base_lo, shape.base_hi, rng));
  for (int j = 0; j < shape.j_out; ++j)
    sc.outliers.push_back(rotated_hpd(frame, shape.rotation, shape.out_lo, shape.out_hi, rng));
  sc.epsilon = 1e-4;
  return sc;
}

}  // namespace testsup
